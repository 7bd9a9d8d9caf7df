// Twisted integrals along the special flow: exact piecewise integration over
// letter segments, L2-averaged growth estimates, the correlation-route
// spectral mass estimator, and the Riesz-product upper bound.
#pragma once

#include <complex>

#include "sadic/cyl_function.hpp"
#include "sadic/flow.hpp"

namespace sadic {

// Per-(system, roof, level) tables giving each block its flow duration and
// each block prefix its flow offset.
struct FlowTables {
    int level = 0;
    std::vector<double> block_time;                // s^(l)_a
    std::vector<std::vector<double>> prefix_time;  // per letter: flow time of level-0 prefixes

    static FlowTables build(const SAdicSystem& sys, const RoofVector& roof, int level);
};

// A position on one orbit of the special flow: index into a level-l letter
// stream plus the flow offset inside the current block.
struct FlowCursor {
    const LetterStream* stream = nullptr;
    std::size_t block = 0;
    double t_in_block = 0.0;

    Letter current_letter() const { return stream->letters.at(block); }
};

// S_R at the cursor: integral of e^{-2 pi i omega tau} f(h_tau y) d tau over
// tau in [0, R], evaluated segment by segment in closed form.  Advances the
// cursor by flow time R.  Throws when the stream runs out before R.
std::complex<double> twisted_birkhoff(FlowCursor& cursor, const FlowTables& tables, const CylFunction& f,
                                      double omega, double big_r);

// Stratified starting cursors: equally spaced level-0 positions along the
// stream, snapped to the containing block and floor.
std::vector<FlowCursor> stratified_starts(const LetterStream& stream, const FlowTables& tables,
                                          const SAdicSystem& sys, int count, std::size_t usable_blocks);

struct SpectralCell {
    double omega = 0.0;
    double big_r = 0.0;
    std::complex<double> mean;  // average of S_R over starting points
    double rms = 0.0;           // sqrt(mean |S_R|^2): the L2-average growth
};

struct PowerFit {
    double alpha = 0.0;     // slope of log|S_R| against log R (upper half of the grid)
    double gamma = 0.0;     // 2 (1 - alpha)
    double c1 = 0.0;        // max over fitted range of rms / R^alpha
    double r0 = 0.0;        // start of the fitted range
    double residual = 0.0;  // rms of the fit residuals
    int points = 0;
};

struct SpectralEstimate {
    std::vector<double> omega_grid;
    std::vector<double> r_grid;
    std::vector<SpectralCell> cells;     // omega-major order
    std::vector<PowerFit> fits;          // per omega
    PowerFit uniform_fit;                // against max_omega rms per R

    const SpectralCell& cell(std::size_t omega_idx, std::size_t r_idx) const {
        return cells[omega_idx * r_grid.size() + r_idx];
    }
};

struct SpectralOptions {
    int starts = 64;               // sampled starting points
    int mid_level_extra = 0;       // sampling level offset above the function level
    std::size_t max_letters = std::size_t(1) << 25;
};

SpectralEstimate spectral_estimate(const SAdicSystem& sys, const RoofVector& roof, const CylFunction& f,
                                   const std::vector<double>& omega_grid, const std::vector<double>& r_grid,
                                   const SpectralOptions& opts = {});

// Fits log rms = alpha log R + c over the upper half of the R grid.
PowerFit fit_power_law(const std::vector<double>& r_values, const std::vector<double>& rms_values);

// Correlation-route estimator for local spectral mass: one long orbit, the
// cumulative twisted integral G on a uniform grid, and the Cesaro-window
// average (1/U) int |G(u+T) - G(u)|^2 du as the estimate of E|S_T|^2.
class CorrelationEstimator {
public:
    CorrelationEstimator(const SAdicSystem& sys, const RoofVector& roof, const CylFunction& f, double omega,
                         double max_window, double orbit_time, double dt);

    double mean_square_st(double window) const;          // estimate of E |S_T|^2
    double sigma_mass(double radius) const;              // pi^2 r^2 E|S_{1/(2r)}|^2
    double correlation_zero() const;                     // <f o h_0, f> estimate = mean |f|^2
    double dt() const { return dt_; }

private:
    double dt_;
    double orbit_time_;
    std::vector<std::complex<double>> cumulative_; // G at grid points
    double mean_square_f_ = 0.0;
};

struct RieszBound {
    std::vector<long> n_values;
    std::vector<double> gr_factors;     // 1 - c1 max_{v in GR} ||omega |zeta^[n](v)|_s||^2
    std::vector<double> torus_factors;  // 1 - c1~ ||A(n,a)(omega s)||^2
    double gr_product = 1.0;
    double torus_product = 1.0;

    // O(1) ||f||_inf (R^{1/2} + R^{1+eta} * product) with unit constant.
    double bound(double big_r, double sup_norm, double eta, bool torus_form) const;
};

struct RieszOptions {
    double c1 = 0.5;
    double c1_tilde = 0.5;
    double theta1 = 0.0;     // must be supplied (from lyapunov_spectrum)
    int precision_bits = 256;
};

// Evaluates the product over l+1 <= n < log(R)/(4 theta1) in both the
// good-return form and the torus-norm form.
RieszBound riesz_bound(const SAdicSystem& sys, const RoofVector& roof,
                       const std::vector<Word>& good_returns, double omega, int level, double big_r,
                       const RieszOptions& opts);

} // namespace sadic
