// The renormalization cocycle A(n,a): exact big-integer products of
// transposed substitution matrices, together with the log-norm statistics
// feeding the quantitative criterion.
#pragma once

#include <vector>

#include "sadic/int_matrix.hpp"
#include "sadic/sequence.hpp"

namespace sadic {

struct CocycleProduct {
    long n = 0;
    IntMatrix matrix;   // A(n,a), exact
    double log_norm = 0.0;
};

// Per-factor transposed incidence matrix A(zeta_n).
IntMatrix cocycle_factor(const SubstitutionSequence& seq, long n);

// A(n,a) for n >= 0; for n < 0 all factors must be unimodular (exact integer
// inverses are used), otherwise an exception is thrown.
CocycleProduct cocycle_product(const SubstitutionSequence& seq, long n);

// Incremental left-multiplication: appending one factor at a time.
class CocycleAccumulator {
public:
    explicit CocycleAccumulator(const SubstitutionSequence& seq)
        : seq_(&seq), matrix_(IntMatrix::identity(seq.alphabet_size())) {}

    void advance();                 // n -> n+1
    void advance_to(long n);
    long n() const { return n_; }
    const IntMatrix& matrix() const { return matrix_; }
    double log_norm() const { return n_ == 0 ? 0.0 : matrix_.log_linf_norm(); }

private:
    const SubstitutionSequence* seq_;
    IntMatrix matrix_;
    long n_ = 0;
};

// W_n = log ||A(a_n)|| for n = 1..count (l-infinity operator norm).
std::vector<double> w_values(const SubstitutionSequence& seq, long count);

class WStat {
public:
    WStat(const SubstitutionSequence& seq, long n_max); // stores W_1..W_{n_max+1}

    long n_max() const { return n_max_; }
    double w(long n) const { return values_.at(static_cast<std::size_t>(n - 1)); } // W_n

    // Exact maximum of sum_{n in Psi} W_{n+1} over Psi subset of {1..N} with
    // |Psi| <= delta*N: the floor(delta*N) largest among W_2..W_{N+1}.
    double max_subset_sum(double delta) const;
    // card{ n <= N : W_{n+1} > threshold }.
    long count_above(double threshold) const;
    // Smallest L with max_subset_sum(delta) <= L * log(1/delta) * delta * N
    // across the given grid (deltas with floor(delta*N) >= 1).
    double fit_l1(const std::vector<double>& deltas) const;

    double max_w() const;
    double quantile(double p) const;

private:
    long n_max_;
    std::vector<double> values_;         // W_1..W_{n_max+1}
    std::vector<double> sorted_shifted_; // W_2..W_{n_max+1}, descending
    std::vector<double> prefix_sums_;
};

} // namespace sadic
