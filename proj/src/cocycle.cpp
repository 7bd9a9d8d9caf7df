#include "sadic/cocycle.hpp"

#include <algorithm>
#include <cmath>

namespace sadic {

IntMatrix cocycle_factor(const SubstitutionSequence& seq, long n) {
    return seq.at(n).matrix().transpose();
}

void CocycleAccumulator::advance() {
    matrix_ = cocycle_factor(*seq_, n_ + 1) * matrix_;
    ++n_;
}

void CocycleAccumulator::advance_to(long n) {
    if (n < n_) throw std::invalid_argument("CocycleAccumulator: cannot rewind");
    while (n_ < n) advance();
}

CocycleProduct cocycle_product(const SubstitutionSequence& seq, long n) {
    const int m = seq.alphabet_size();
    if (n >= 0) {
        CocycleAccumulator acc(seq);
        acc.advance_to(n);
        return {n, acc.matrix(), n == 0 ? 0.0 : acc.matrix().log_linf_norm()};
    }
    // A(-k, a) = A(k, sigma^{-k} a)^{-1}; factors must be unimodular for the
    // inverse to stay integral.
    const long k = -n;
    IntMatrix prod = IntMatrix::identity(m);
    for (long j = 0; j < k; ++j) {
        IntMatrix factor = cocycle_factor(seq, -j); // zeta_{1-k}, ..., zeta_0 in product order
        if (!factor.is_unimodular())
            throw std::invalid_argument("cocycle_product: non-unimodular factor for negative n");
        prod = prod * factor;
    }
    IntMatrix inv = prod.inverse_unimodular();
    return {n, inv, inv.log_linf_norm()};
}

std::vector<double> w_values(const SubstitutionSequence& seq, long count) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long n = 1; n <= count; ++n)
        out.push_back(cocycle_factor(seq, n).log_linf_norm());
    return out;
}

WStat::WStat(const SubstitutionSequence& seq, long n_max) : n_max_(n_max) {
    if (n_max < 1) throw std::invalid_argument("WStat: need n_max >= 1");
    values_ = w_values(seq, n_max + 1);
    sorted_shifted_.assign(values_.begin() + 1, values_.end());
    std::sort(sorted_shifted_.begin(), sorted_shifted_.end(), std::greater<>());
    prefix_sums_.resize(sorted_shifted_.size() + 1, 0.0);
    for (std::size_t i = 0; i < sorted_shifted_.size(); ++i)
        prefix_sums_[i + 1] = prefix_sums_[i] + sorted_shifted_[i];
}

double WStat::max_subset_sum(double delta) const {
    if (delta < 0) throw std::invalid_argument("max_subset_sum: negative delta");
    long k = static_cast<long>(std::floor(delta * static_cast<double>(n_max_)));
    k = std::clamp<long>(k, 0, n_max_);
    return prefix_sums_[static_cast<std::size_t>(k)];
}

long WStat::count_above(double threshold) const {
    long count = 0;
    for (long n = 1; n <= n_max_; ++n)
        if (values_[static_cast<std::size_t>(n)] > threshold) ++count; // values_[n] == W_{n+1}
    return count;
}

double WStat::fit_l1(const std::vector<double>& deltas) const {
    double best = 0.0;
    for (double delta : deltas) {
        if (!(delta > 0.0 && delta < 1.0)) continue;
        long k = static_cast<long>(std::floor(delta * static_cast<double>(n_max_)));
        if (k < 1) continue;
        double bound_unit = std::log(1.0 / delta) * delta * static_cast<double>(n_max_);
        best = std::max(best, max_subset_sum(delta) / bound_unit);
    }
    return best;
}

double WStat::max_w() const { return *std::max_element(values_.begin(), values_.end()); }

double WStat::quantile(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0,1]");
    std::vector<double> sorted = values_;
    std::sort(sorted.begin(), sorted.end());
    double idx = p * static_cast<double>(sorted.size() - 1);
    std::size_t lo = static_cast<std::size_t>(idx);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = idx - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace sadic
