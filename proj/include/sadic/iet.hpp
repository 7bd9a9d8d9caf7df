// Interval exchange transformations and one Rauzy induction step.
//
// Conventions, fixed once and validated against first-return simulation on
// rational-length IETs:
//   * one-row permutations: interval i (domain order) is sent to slot pi(i)
//     of the range, so the range reads I_{pi^-1(1)}, ..., I_{pi^-1(m)};
//   * step type 'a' when the last domain interval is strictly longer than
//     the interval occupying the last range slot, type 'b' when strictly
//     shorter; an exact tie is an error ("Rauzy-nondeterministic");
//   * the per-step substitution maps new interval names to old-name words:
//       type 'a':  alpha -> alpha m,  j -> j otherwise
//       type 'b':  j -> j (j <= alpha), alpha+1 -> alpha m, j -> j-1 (j >= alpha+2)
//     where alpha = pi^-1(m); both matrices are unimodular.
#pragma once

#include <stdexcept>
#include <vector>

#include "sadic/substitution.hpp"

namespace sadic {

class IETPermutation {
public:
    // One-row images, 1-based: perm[i] = pi(i+1). Must be irreducible.
    explicit IETPermutation(std::vector<int> images);

    int size() const { return static_cast<int>(images_.size()); }
    int map(int i) const { return images_.at(i - 1); }         // pi(i), 1-based
    int preimage(int slot) const { return inverse_.at(slot - 1); } // pi^-1(slot)

    bool operator==(const IETPermutation&) const = default;
    bool operator<(const IETPermutation& rhs) const { return images_ < rhs.images_; }

    std::string to_string() const;

private:
    std::vector<int> images_;
    std::vector<int> inverse_;
};

bool is_irreducible(const std::vector<int>& images);

enum class RauzyType : char { A = 'a', B = 'b' };

IETPermutation rauzy_apply(const IETPermutation& pi, RauzyType type);

// Elementary substitution attached to one induction step at `pi`.
Substitution rauzy_substitution(const IETPermutation& pi, RauzyType type);

struct RauzyTie : std::runtime_error {
    RauzyTie() : std::runtime_error("Rauzy-nondeterministic: exact length tie") {}
};

template <typename Scalar>
struct IETOf {
    IETPermutation pi;
    std::vector<Scalar> lengths; // all positive

    IETOf(IETPermutation pi_, std::vector<Scalar> lengths_) : pi(std::move(pi_)), lengths(std::move(lengths_)) {
        if (static_cast<int>(lengths.size()) != pi.size())
            throw std::invalid_argument("IET: length vector size mismatch");
        for (const Scalar& l : lengths)
            if (!(l > 0)) throw std::invalid_argument("IET: lengths must be positive");
    }
};

using IET = IETOf<double>;

template <typename Scalar>
std::pair<RauzyType, IETOf<Scalar>> rauzy_step(const IETOf<Scalar>& iet) {
    const int m = iet.pi.size();
    const int alpha = iet.pi.preimage(m);
    const Scalar& last_domain = iet.lengths[m - 1];
    const Scalar& last_range = iet.lengths[alpha - 1];
    if (last_domain == last_range) throw RauzyTie{};

    if (last_domain > last_range) { // type 'a': cut inside the last domain interval
        std::vector<Scalar> lengths = iet.lengths;
        lengths[m - 1] = last_domain - last_range;
        return {RauzyType::A, IETOf<Scalar>(rauzy_apply(iet.pi, RauzyType::A), std::move(lengths))};
    }
    // type 'b': the last range slot swallows the last domain interval
    std::vector<Scalar> lengths;
    lengths.reserve(m);
    for (int j = 1; j <= m; ++j) {
        if (j < alpha) lengths.push_back(iet.lengths[j - 1]);
        else if (j == alpha) lengths.push_back(iet.lengths[alpha - 1] - last_domain);
        else if (j == alpha + 1) lengths.push_back(last_domain);
        else lengths.push_back(iet.lengths[j - 2]);
    }
    return {RauzyType::B, IETOf<Scalar>(rauzy_apply(iet.pi, RauzyType::B), std::move(lengths))};
}

} // namespace sadic
