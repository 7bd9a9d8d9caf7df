// Lyapunov spectrum estimation by periodically re-orthonormalized products,
// and approximate Oseledets unstable projections.
#pragma once

#include <Eigen/Dense>

#include "sadic/sequence.hpp"

namespace sadic {

struct LyapunovOptions {
    long steps = 100000;     // N
    int trials = 4;          // independent random start frames
    int cadence = 5;         // QR renormalization every this many steps
    std::uint64_t seed = 1;  // frame seed
};

struct LyapunovEstimate {
    std::vector<double> exponents; // descending, per-step normalization
    std::vector<double> spread;    // stddev over trials, per exponent
    int kappa = 0;                 // count of exponents > 3x spread
    bool top_simple = false;       // theta_1 - theta_2 resolved beyond noise
    long steps = 0;
    int trials = 0;

    double theta(int i) const { return exponents.at(static_cast<std::size_t>(i)); } // 0-based
    double sum() const;
};

LyapunovEstimate lyapunov_spectrum(const SubstitutionSequence& seq, const LyapunovOptions& opts = {});

struct ProjectionOptions {
    int n_back = 40;        // pushforward depth for the unstable frame
    int n_forward = -1;     // complement depth; -1 means n_back
    std::uint64_t seed = 7; // generic frame seed
    double min_angle = 1e-10;
};

struct UnstableProjection {
    Eigen::MatrixXd p;      // projection onto the unstable subspace
    Eigen::MatrixXd basis;  // orthonormal columns spanning the estimate of E^u
    int kappa = 0;
    double idempotence_residual = 0.0; // max-norm of P*P - P
};

// Approximates E^u at the current origin of the (two-sided) sequence as the
// image of a generic kappa-frame pushed forward from n_back steps in the
// past; the complementary directions come from the small right-singular
// subspace of the forward product.  Throws when the two subspaces are closer
// than `min_angle`.
UnstableProjection unstable_projection(const SubstitutionSequence& seq, int kappa,
                                       const ProjectionOptions& opts = {});

// || A(n,a) P_a - P_{sigma^n a} A(n,a) || / || A(n,a) ||  in the max norm.
double equivariance_residual(const SubstitutionSequence& seq, long n, const UnstableProjection& at_origin,
                             const UnstableProjection& at_shifted);

} // namespace sadic
