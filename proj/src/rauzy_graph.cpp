#include "sadic/rauzy_graph.hpp"

#include <deque>
#include <sstream>

#include "json.hpp"

#include "sadic/errors.hpp"

namespace sadic {

RauzyGraph RauzyGraph::closure(const IETPermutation& start) {
    RauzyGraph g;
    std::deque<int> queue;
    g.vertices_.push_back(start);
    g.index_[start] = 0;
    queue.push_back(0);
    while (!queue.empty()) {
        int id = queue.front();
        queue.pop_front();
        IETPermutation pi = g.vertices_[id];
        for (RauzyType label : {RauzyType::A, RauzyType::B}) {
            IETPermutation next = rauzy_apply(pi, label);
            auto [it, inserted] = g.index_.try_emplace(next, static_cast<int>(g.vertices_.size()));
            if (inserted) {
                g.vertices_.push_back(next);
                queue.push_back(it->second);
            }
            Substitution sub = rauzy_substitution(pi, label);
            if (!sub.matrix().is_unimodular())
                throw std::logic_error("RauzyGraph: edge matrix is not unimodular");
            // Vertices are discovered in BFS order, so edges for vertex `id`
            // are appended exactly when we pop it.
            g.out_.push_back(RauzyEdge{id, it->second, label, std::move(sub)});
        }
    }
    return g;
}

int RauzyGraph::vertex_id(const IETPermutation& pi) const {
    auto it = index_.find(pi);
    if (it == index_.end()) throw std::invalid_argument("RauzyGraph: permutation not in class");
    return it->second;
}

const RauzyEdge& RauzyGraph::edge(int vertex, RauzyType label) const {
    std::size_t idx = static_cast<std::size_t>(vertex) * 2 + (label == RauzyType::B ? 1 : 0);
    return out_.at(idx);
}

std::string RauzyGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph rauzy {\n";
    for (int v = 0; v < vertex_count(); ++v)
        os << "  v" << v << " [label=\"" << vertices_[v].to_string() << "\"];\n";
    for (const RauzyEdge& e : out_)
        os << "  v" << e.source << " -> v" << e.target << " [label=\"" << static_cast<char>(e.label) << "\"];\n";
    os << "}\n";
    return os.str();
}

std::string RauzyGraph::to_json() const {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (int v = 0; v < vertex_count(); ++v) {
        nlohmann::json vert = nlohmann::json::array();
        for (int i = 1; i <= vertices_[v].size(); ++i) vert.push_back(vertices_[v].map(i));
        j["vertices"].push_back(vert);
    }
    j["edges"] = nlohmann::json::array();
    for (const RauzyEdge& e : out_) {
        nlohmann::json edge;
        edge["source"] = e.source;
        edge["target"] = e.target;
        edge["label"] = std::string(1, static_cast<char>(e.label));
        nlohmann::json images = nlohmann::json::array();
        for (const Word& w : e.substitution.images()) images.push_back(format_word(w));
        edge["substitution"] = images;
        nlohmann::json matrix = nlohmann::json::array();
        const IntMatrix& mat = e.substitution.matrix();
        for (int r = 0; r < mat.rows(); ++r)
            for (int c = 0; c < mat.cols(); ++c) matrix.push_back(mat.at(r, c).get_si());
        edge["matrix"] = matrix;
        j["edges"].push_back(edge);
    }
    return j.dump(2);
}

RauzyPath::RauzyPath(const RauzyGraph& graph, int start_vertex)
    : graph_(&graph), start_(start_vertex), end_(start_vertex) {
    if (start_vertex < 0 || start_vertex >= graph.vertex_count())
        throw std::invalid_argument("RauzyPath: start vertex out of range");
}

void RauzyPath::append(RauzyType label) {
    const RauzyEdge& e = graph_->edge(end_, label);
    labels_.push_back(static_cast<char>(label));
    end_ = e.target;
    if (substitution_) substitution_ = compose(*substitution_, e.substitution);
    else substitution_ = e.substitution;
}

void RauzyPath::append_path(const RauzyPath& continuation) {
    if (continuation.graph_ != graph_) throw std::invalid_argument("append_path: different graphs");
    if (continuation.start_ != end_) throw std::invalid_argument("append_path: paths do not connect");
    for (char c : continuation.labels_) append(c == 'a' ? RauzyType::A : RauzyType::B);
}

const Substitution& RauzyPath::substitution() const {
    if (!substitution_) throw std::invalid_argument("RauzyPath: empty path has no substitution");
    return *substitution_;
}

const IntMatrix& RauzyPath::matrix() const { return substitution().matrix(); }

Substitution path_substitution(const RauzyPath& path) { return path.substitution(); }

RauzyPath label_cycle(const RauzyGraph& graph, int vertex, RauzyType label) {
    RauzyPath path(graph, vertex);
    for (int steps = 0; steps <= graph.vertex_count(); ++steps) {
        path.append(label);
        if (path.end() == vertex) return path;
    }
    throw std::logic_error("label_cycle: did not return to start");
}

namespace {

// Shortest loop at `start` with a strictly positive matrix, by BFS over
// label words.
std::optional<RauzyPath> find_positive_loop(const RauzyGraph& graph, int start, int max_len) {
    std::deque<RauzyPath> frontier;
    frontier.emplace_back(graph, start);
    const std::size_t node_cap = 1u << 18;
    std::size_t explored = 0;
    while (!frontier.empty()) {
        RauzyPath path = std::move(frontier.front());
        frontier.pop_front();
        if (path.length() >= max_len) continue;
        for (RauzyType label : {RauzyType::A, RauzyType::B}) {
            RauzyPath next = path;
            next.append(label);
            if (next.end() == start && next.matrix().is_positive()) return next;
            if (++explored > node_cap) return std::nullopt;
            frontier.push_back(std::move(next));
        }
    }
    return std::nullopt;
}

Letter first_letter_map(const Substitution& s, Letter a) { return s.image(a).front(); }

} // namespace

GoodWordReport construct_good_word(const RauzyGraph& graph, int start, const GoodWordBudget& budget) {
    std::optional<RauzyPath> loop = find_positive_loop(graph, start, budget.max_loop_length);
    if (!loop) throw BudgetError("construct_good_word: no positive loop within budget");
    const Substitution zeta_v = loop->substitution();
    const int m = zeta_v.alphabet_size();

    // Smallest n with all images of zeta(V^n) starting alike, via iterating
    // the first-letter map.
    int power = -1;
    {
        std::vector<Letter> first(m);
        for (int a = 0; a < m; ++a) first[a] = static_cast<Letter>(a);
        for (int n = 1; n <= budget.max_power; ++n) {
            bool constant = true;
            for (int a = 0; a < m; ++a) {
                first[a] = first_letter_map(zeta_v, first[a]);
                if (first[a] != first[0]) constant = false;
            }
            for (int a = 1; a < m && constant; ++a) constant = first[a] == first[0];
            if (constant) { power = n; break; }
        }
    }
    if (power < 0) throw BudgetError("construct_good_word: no common-first-letter power within budget");

    const RauzyType x = loop->labels().front() == 'a' ? RauzyType::A : RauzyType::B;
    const RauzyType y = x == RauzyType::A ? RauzyType::B : RauzyType::A;
    RauzyPath w2 = label_cycle(graph, start, x);

    for (int n = power; n <= budget.max_power; ++n) {
        // q = V^{2n} W2 W1 with |W1| > |V^{2n} W2|.
        RauzyPath q(graph, start);
        for (int r = 0; r < 2 * n; ++r) q.append_path(*loop);
        q.append_path(w2);
        const int head_len = q.length();
        RauzyPath w1 = label_cycle(graph, start, y);
        while (w1.length() <= head_len) w1.append_path(label_cycle(graph, start, y));
        q.append_path(w1);

        Substitution zeta_vn = loop->substitution();
        for (int r = 1; r < n; ++r) zeta_vn = compose(zeta_vn, loop->substitution());

        Substitution block = q.substitution();
        GoodWordReport report{std::move(q), std::move(block), {}, loop->length(), n};
        for (int a = 0; a < m; ++a) report.return_words.push_back(zeta_vn.image(static_cast<Letter>(a)));

        report.simple = is_simple_word(report.path.labels());
        report.positive = report.block.matrix().is_positive();

        auto contains = [](const Word& hay, const Word& needle) {
            return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
        };
        report.returns_good = true;
        for (const Word& v : report.return_words) {
            Word vc = v;
            vc.push_back(v.front());
            for (int a = 0; a < m && report.returns_good; ++a)
                report.returns_good = contains(report.block.image(static_cast<Letter>(a)), vc);
            if (!report.returns_good) break;
        }

        std::vector<PopulationVector> ells;
        for (const Word& v : report.return_words)
            ells.push_back(population_vector(v, report.block.alphabet()));
        report.lattice_full = generates_lattice(ells);

        if (report.verified()) return report;
    }
    throw BudgetError("construct_good_word: verification failed within power budget");
}

} // namespace sadic
