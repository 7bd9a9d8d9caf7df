// S-adic shift machinery: composed matrices, invariant-measure vectors,
// Kakutani-Rokhlin towers, roof normalization and symbol streams for the
// special flow.
#pragma once

#include <mutex>

#include "sadic/cocycle.hpp"
#include "sadic/sequence.hpp"

namespace sadic {

struct RoofVector {
    std::vector<double> s;
    bool normalized = false;

    RoofVector() = default;
    explicit RoofVector(std::vector<double> entries, bool normalized_flag = false)
        : s(std::move(entries)), normalized(normalized_flag) {
        for (double v : s)
            if (!(v > 0.0)) throw std::invalid_argument("RoofVector: entries must be positive");
    }
    int size() const { return static_cast<int>(s.size()); }
    double operator[](Letter a) const { return s[a]; }
};

class SAdicSystem;

struct KRTower {
    int level = 0;
    std::vector<mpz_class> heights;   // |zeta^[n](a)| = column sums of S^[n]
    const SAdicSystem* system = nullptr;

    // Level-0 letter under floor k of the tower over letter a.
    Letter floor_letter(Letter a, std::size_t k) const;
};

class SAdicSystem {
public:
    explicit SAdicSystem(SubstitutionSequence seq, std::size_t word_budget = std::size_t(1) << 27);

    const SubstitutionSequence& sequence() const { return seq_; }
    int alphabet_size() const { return seq_.alphabet_size(); }
    const Alphabet& alphabet() const { return seq_.alphabet(); }

    // S^[n] = S_1 ... S_n (S^[0] = identity), exact and cached.
    const IntMatrix& composite_matrix(int n) const;

    // Word of level-`to` letters representing one letter of level `from`.
    Word expand(Letter a, int from_level, int to_level) const;
    // zeta^[n](a); cached. Throws when the materialized length would exceed
    // the word budget.
    const Word& level_word(int n, Letter a) const;

    KRTower tower(int n) const;

    // Direction of the level-n measure vector from a positive window of
    // depth `depth`; scaled so that mu_0 = S^[n] mu_n is a probability
    // vector. Throws when no positive window exists within `depth`.
    std::vector<double> measure_vector(int n, int depth = 48) const;
    std::vector<double> letter_measures(int depth = 48) const { return measure_vector(0, depth); }
    // max_n || mu_n - S_{n+1} mu_{n+1} ||_inf over 0 <= n < levels.
    double measure_recursion_residual(int levels, int depth = 48) const;

    RoofVector normalize_roof(const RoofVector& s, int depth = 48) const;
    // s^(l) = (S^[l])^t s.
    std::vector<double> level_roof(const RoofVector& s, int level) const;

private:
    SubstitutionSequence seq_;
    std::size_t word_budget_;
    mutable std::mutex cache_mutex_;
    mutable std::vector<IntMatrix> matrices_;            // S^[0..k]
    mutable std::vector<std::vector<Word>> level_words_; // per level, per letter
    mutable std::size_t words_used_ = 0;

    const IntMatrix& composite_matrix_locked(int n) const;
};

// A finite stretch of a level-`level` letter reading of one orbit, obtained
// by expanding a single letter from high enough up the tower hierarchy.
struct LetterStream {
    int level = 0;
    int top_level = 0;
    Letter top_letter = 0;
    Word letters; // level-`level` letters

    static LetterStream generate(const SAdicSystem& sys, int level, std::size_t min_letters);
};

} // namespace sadic
