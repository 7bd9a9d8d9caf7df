// The Rauzy graph of an irreducible permutation, labeled paths, and the
// constructive search for a simple positive word with good return words.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sadic/iet.hpp"
#include "sadic/substitution.hpp"

namespace sadic {

struct RauzyEdge {
    int source = -1;
    int target = -1;
    RauzyType label = RauzyType::A;
    Substitution substitution; // new names -> old-name words, unimodular matrix
};

class RauzyGraph {
public:
    static RauzyGraph closure(const IETPermutation& start); // BFS over a/b moves

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    const IETPermutation& vertex(int id) const { return vertices_.at(id); }
    int vertex_id(const IETPermutation& pi) const;

    const RauzyEdge& edge(int vertex, RauzyType label) const;

    std::string to_dot() const;
    std::string to_json() const;

private:
    std::vector<IETPermutation> vertices_;
    std::map<IETPermutation, int> index_;
    std::vector<RauzyEdge> out_; // flat, 2 per vertex: 'a' then 'b'
};

// A path holds its edges in traversal order; the accumulated substitution
// composes per-edge substitutions with the earliest edge outermost,
//   zeta(e1 e2 ... ek) = zeta(e1) o zeta(e2) o ... o zeta(ek),
// which matches the first-return towers of the underlying IET (see the
// simulation oracle in the tests).  Appending a path segment therefore
// composes its substitution on the inside.
class RauzyPath {
public:
    RauzyPath(const RauzyGraph& graph, int start_vertex);

    void append(RauzyType label);
    void append_path(const RauzyPath& continuation);

    int start() const { return start_; }
    int end() const { return end_; }
    int length() const { return static_cast<int>(labels_.size()); }
    const std::string& labels() const { return labels_; }

    // Substitution of the induction block; throws on an empty path.
    const Substitution& substitution() const;
    // Equals the ordered product of edge incidence matrices, earliest first.
    const IntMatrix& matrix() const;

private:
    const RauzyGraph* graph_;
    int start_, end_;
    std::string labels_;
    std::optional<Substitution> substitution_;
};

Substitution path_substitution(const RauzyPath& path);

// Shortest all-'a' (resp. all-'b') cycle through `vertex`.
RauzyPath label_cycle(const RauzyGraph& graph, int vertex, RauzyType label);

struct GoodWordReport {
    RauzyPath path;
    Substitution block;            // zeta of the whole word
    std::vector<Word> return_words; // images of the positive loop power
    int loop_length = 0;
    int power = 0; // n with all images of zeta(V^n) starting alike
    bool simple = false;
    bool positive = false;
    bool returns_good = false;
    bool lattice_full = false;
    bool verified() const { return simple && positive && returns_good && lattice_full; }
};

struct GoodWordBudget {
    int max_loop_length = 64;  // cap on the positive loop search
    int max_power = 32;        // cap on the common-first-letter power
};

// Constructive search: (1) find a loop V at `start` whose matrix is strictly
// positive; (2) find n such that every image of zeta(V^n) starts with the
// same letter (checked combinatorially); (3) return the word V^{2n} W2 W1
// where W2 is the cycle at `start` with V's first label and W1 is the
// other-label cycle repeated past |V^{2n} W2| in length.  The three
// verification predicates are checked on the result; n is bumped if needed.
GoodWordReport construct_good_word(const RauzyGraph& graph, int start,
                                   const GoodWordBudget& budget = {});

} // namespace sadic
