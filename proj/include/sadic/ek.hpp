// Torus distances of cocycle images, the nearest-lattice (K_n, eps_n)
// tracker, criterion constants, good-time densities, the covering count and
// the lattice-comparison constant.
#pragma once

#include <optional>

#include "sadic/cocycle.hpp"
#include "sadic/flow.hpp"

namespace sadic {

struct TorusPoint {
    std::vector<mpz_class> nearest; // K
    std::vector<double> eps;        // signed offsets, each in [-1/2, 1/2]
    double dist = 0.0;              // ||eps||_inf
};

// Componentwise nearest-integer decomposition; exact .5 ties round to even.
TorusPoint torus_distance(const std::vector<double>& v);

struct EKSettings {
    int precision_bits = 0;   // 0: derived from ||A(N)|| and the rho guard
    double rho_guard = 1e-3;  // rounding stays below guard * min_n rho_n
    // Optional full-precision roof; doubles lose eigenvalue directions once
    // ||A(n)|| amplifies their rounding.
    std::vector<mpf_class> roof_hp;
};

// (phi, 1) with phi = (1 + sqrt 5)/2 at the requested precision.
std::vector<mpf_class> golden_roof_hp(int precision_bits = 512);

struct EKRow {
    long n = 0;
    std::vector<mpz_class> k;
    std::vector<double> eps;
    double eps_inf = 0.0;
    double w_next = 0.0;   // W_{n+1}
    double rho = 0.0;      // rho_n = (1/2) / (1 + exp W_{n+1})
    mpz_class m_bound;     // M_n = (2 + exp W_{n+1})^m, exact
    bool flag = false;     // eps_inf >= the flag threshold
};

struct EKTrace {
    std::vector<EKRow> rows; // n = 0..N
    double flag_threshold = 0.0;
    int precision_bits = 0;
    double min_rho = 0.0;
    long uniqueness_violations = 0; // Lemma (ii) online assertion failures

    long flagged_count() const;            // #{1 <= n <= N : eps_inf >= threshold}
    double flagged_density() const;
    // signed ratio eps_{n+1}[j*] / eps_n[j*] along the maximal component
    std::vector<double> component_ratios() const;
};

EKTrace ek_track(const SubstitutionSequence& seq, const RoofVector& s, double omega, long n_max,
                 double flag_threshold, const EKSettings& settings = {});

struct CriterionParams {
    double delta = 0.0;
    double l1 = 0.0;
    double c1_tilde = 0.0;
    double theta1 = 0.0;
    double k_exponent = 0.0; // K = 2 L1 log(1/delta)
    double rho = 0.0;        // (1/2) / (1 + e^K) unless overridden
    double gamma = 0.0;      // min{delta/16, -delta log(1 - c1~ rho^2) / (8 theta1)}
};

CriterionParams criterion_constants(double delta, double l1, double c1_tilde, double theta1,
                                    std::optional<double> rho_override = std::nullopt);

struct DensityReport {
    double rho = 0.0;
    double b_range = 0.0;
    long n_max = 0;
    struct PerOmega {
        double omega = 0.0;
        long count = 0;
        double density = 0.0;
    };
    std::vector<PerOmega> rows;
    double min_density = 0.0;

    bool satisfies(double delta) const { return min_density >= delta; }
};

// Counts {n <= N : ||A(n,a)(omega s)|| >= rho} per omega; omega grid must
// sit inside [1/B, B].
DensityReport good_time_density(const SubstitutionSequence& seq, const RoofVector& s,
                                const std::vector<double>& omega_grid, double rho, long n_max,
                                double b_range, const EKSettings& settings = {});

struct CoveringCount {
    long n_max = 0;
    double delta = 0.0;
    double b_range = 0.0;
    std::vector<long> psi;           // branch positions, 1-based
    mpz_class k0_count;              // admissible starts for the given B
    mpz_class count;                 // exhaustive leaf count
    mpz_class branch_width_product;  // prod over psi of the exact widths
    mpz_class m_bound_product;       // prod over psi of M_n, times k0
    double log_count = 0.0;
    double log_rate = 0.0;           // log(count) / N
};

// Enumerates admissible K-sequences: deterministic K_{n+1} = A(a_{n+1}) K_n
// off the exceptional set, and full branching over the Lemma ball at the
// |Psi| < delta N evenly spaced branch positions.
CoveringCount ek_covering_count(const SubstitutionSequence& seq, long n_max, double delta, double b_range,
                                std::uint64_t leaf_budget = 50'000'000ULL);

struct LatticeConstant {
    double c_right = 0.0; // max_j || l(v_j) ||_1
    double c_left = 0.0;  // max_i sum_j |a_{ij}|
    double c = 1.0;       // the constant in the two-sided comparison
    IntMatrix coefficients; // integer a_{ij} with sum_j a_{ij} l(v_j) = e_i
    long violations = 0;
    long samples = 0;
};

// Explicit constant comparing max_j ||<l(v_j), x>||_{R/Z} with
// ||x||_{R^m/Z^m}; verified on `samples` random points.
LatticeConstant lattice_constant(const std::vector<PopulationVector>& ells, std::uint64_t seed,
                                 long samples = 10000);

} // namespace sadic
