#include "sadic/flow.hpp"

#include <cmath>

#include "sadic/errors.hpp"

namespace sadic {

Letter KRTower::floor_letter(Letter a, std::size_t k) const {
    const Word& w = system->level_word(level, a);
    if (k >= w.size()) throw std::out_of_range("KRTower: floor index above tower height");
    return w[k];
}

SAdicSystem::SAdicSystem(SubstitutionSequence seq, std::size_t word_budget)
    : seq_(std::move(seq)), word_budget_(word_budget) {
    matrices_.push_back(IntMatrix::identity(seq_.alphabet_size()));
}

const IntMatrix& SAdicSystem::composite_matrix_locked(int n) const {
    if (n < 0) throw std::invalid_argument("composite_matrix: negative level");
    while (static_cast<int>(matrices_.size()) <= n)
        matrices_.push_back(matrices_.back() * seq_.at(static_cast<long>(matrices_.size())).matrix());
    return matrices_[static_cast<std::size_t>(n)];
}

const IntMatrix& SAdicSystem::composite_matrix(int n) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return composite_matrix_locked(n);
}

Word SAdicSystem::expand(Letter a, int from_level, int to_level) const {
    if (to_level > from_level) throw std::invalid_argument("expand: to_level above from_level");
    Word word{a};
    for (int k = from_level; k > to_level; --k) {
        const Substitution& z = seq_.at(k);
        Word next;
        std::size_t total = 0;
        for (Letter b : word) total += z.image(b).size();
        if (total > word_budget_) throw BudgetError("expand: word budget exceeded");
        next.reserve(total);
        for (Letter b : word) {
            const Word& img = z.image(b);
            next.insert(next.end(), img.begin(), img.end());
        }
        word = std::move(next);
    }
    return word;
}

const Word& SAdicSystem::level_word(int n, Letter a) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (n < 0) throw std::invalid_argument("level_word: negative level");
    while (static_cast<int>(level_words_.size()) <= n) level_words_.emplace_back(alphabet_size());
    Word& slot = level_words_[static_cast<std::size_t>(n)][a];
    if (slot.empty()) {
        Word w = expand(a, n, 0);
        words_used_ += w.size();
        if (words_used_ > word_budget_) throw BudgetError("level_word: word budget exceeded");
        slot = std::move(w);
    }
    return slot;
}

KRTower SAdicSystem::tower(int n) const {
    if (n < 0) throw std::invalid_argument("tower: level must be >= 0");
    KRTower t;
    t.level = n;
    t.heights = composite_matrix(n).column_sums();
    t.system = this;
    return t;
}

std::vector<double> SAdicSystem::measure_vector(int n, int depth) const {
    const int m = alphabet_size();
    // Positivity window check (weak primitivity witness).
    {
        std::vector<std::vector<bool>> pattern(m, std::vector<bool>(m, false));
        for (int i = 0; i < m; ++i) pattern[i][i] = true;
        bool positive = false;
        for (int k = 1; k <= depth && !positive; ++k) {
            const IntMatrix& s = seq_.at(n + k).matrix();
            std::vector<std::vector<bool>> next(m, std::vector<bool>(m, false));
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    bool any = false;
                    for (int l = 0; l < m && !any; ++l) any = pattern[i][l] && s.at(l, j) > 0;
                    next[i][j] = any;
                }
            pattern = std::move(next);
            positive = true;
            for (int i = 0; i < m && positive; ++i)
                for (int j = 0; j < m && positive; ++j) positive = pattern[i][j];
        }
        if (!positive)
            throw std::runtime_error("measure_vector: no positive window within depth (primitivity witness missing)");
    }

    // Direction: normalized S_{n+1} ... S_{n+depth} applied to the uniform
    // vector, accumulated from the deep end.
    std::vector<double> v(m, 1.0);
    for (int k = depth; k >= 1; --k) {
        v = seq_.at(n + k).matrix().apply(v);
        double sum = 0.0;
        for (double x : v) sum += x;
        for (double& x : v) x /= sum;
    }
    // Scale so that mu_0 = S^[n] mu_n has total mass 1.
    std::vector<double> pushed = composite_matrix(n).apply(v);
    double mass = 0.0;
    for (double x : pushed) mass += x;
    for (double& x : v) x /= mass;
    return v;
}

double SAdicSystem::measure_recursion_residual(int levels, int depth) const {
    double worst = 0.0;
    std::vector<double> cur = measure_vector(0, depth);
    for (int n = 0; n < levels; ++n) {
        std::vector<double> next = measure_vector(n + 1, depth);
        std::vector<double> pushed = seq_.at(n + 1).matrix().apply(next);
        for (int i = 0; i < alphabet_size(); ++i) worst = std::max(worst, std::abs(pushed[i] - cur[i]));
        cur = std::move(next);
    }
    return worst;
}

RoofVector SAdicSystem::normalize_roof(const RoofVector& s, int depth) const {
    if (s.size() != alphabet_size()) throw std::invalid_argument("normalize_roof: size mismatch");
    std::vector<double> mu = letter_measures(depth);
    double total = 0.0;
    for (int a = 0; a < alphabet_size(); ++a) total += mu[a] * s.s[a];
    std::vector<double> scaled(s.s);
    for (double& v : scaled) v /= total;
    return RoofVector(std::move(scaled), true);
}

std::vector<double> SAdicSystem::level_roof(const RoofVector& s, int level) const {
    if (s.size() != alphabet_size()) throw std::invalid_argument("level_roof: size mismatch");
    return composite_matrix(level).transpose().apply(s.s);
}

LetterStream LetterStream::generate(const SAdicSystem& sys, int level, std::size_t min_letters) {
    const int m = sys.alphabet_size();
    IntMatrix window = IntMatrix::identity(m);
    for (int top = level + 1; top <= level + 2048; ++top) {
        // Heights of level-`level` words of top-level letters are the column
        // sums of S_{level+1} ... S_top.
        window = window * sys.sequence().at(top).matrix();
        std::vector<mpz_class> sums = window.column_sums();
        int best = 0;
        for (int j = 1; j < m; ++j)
            if (sums[j] > sums[best]) best = j;
        if (sums[best] >= static_cast<long>(min_letters)) {
            LetterStream out;
            out.level = level;
            out.top_level = top;
            out.top_letter = static_cast<Letter>(best);
            out.letters = sys.expand(out.top_letter, top, level);
            return out;
        }
    }
    throw BudgetError("LetterStream: could not reach requested length");
}

} // namespace sadic
