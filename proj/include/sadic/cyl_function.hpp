// Test functions for the special flow: bounded cylindrical functions of a
// given level (piecewise-constant profiles per letter) and tower-sampled
// functions with their weak-Lipschitz seminorm.
#pragma once

#include <complex>
#include <functional>

#include "sadic/flow.hpp"

namespace sadic {

// f(x,t) = psi_a(t) on the level-l cylinder of letter a.  Profiles are
// piecewise constant in the relative coordinate t / s^(l)_a, so one function
// object works for every roof.  Arbitrary bounded profiles are supported
// through a user-supplied twisted segment integral.
class CylFunction {
public:
    struct Profile {
        std::vector<double> breaks;                    // ascending, within (0,1)
        std::vector<std::complex<double>> values;      // breaks.size() + 1 pieces
    };

    // Exact integral of e^{-2 pi i omega u} psi_a(u) du over [u1,u2] in
    // absolute block time, for profiles beyond piecewise-constant.
    using SegmentIntegral =
        std::function<std::complex<double>(Letter a, double block_time, double u1, double u2, double omega)>;

    CylFunction(int level, std::vector<Profile> profiles);

    static CylFunction constant(int level, int m, std::complex<double> value);
    static CylFunction indicator(int level, int m, Letter a);
    // Constant value per letter-block.
    static CylFunction blockwise(int level, std::vector<std::complex<double>> values);
    // blockwise values shifted so the space average over the normalized
    // suspension vanishes.
    static CylFunction mean_zero_blockwise(const SAdicSystem& sys, const RoofVector& roof, int level,
                                           std::vector<std::complex<double>> values);

    int level() const { return level_; }
    int letters() const { return static_cast<int>(profiles_.size()); }
    const Profile& profile(Letter a) const { return profiles_[a]; }
    std::complex<double> value(Letter a, double fraction) const;
    double sup_norm() const;

    void set_segment_integral(SegmentIntegral f) { segment_ = std::move(f); }
    const SegmentIntegral& segment_integral() const { return segment_; }

private:
    int level_;
    std::vector<Profile> profiles_;
    SegmentIntegral segment_; // empty unless user-supplied
};

// Values per floor of the level-L towers; the discrete sample on which the
// weak-Lipschitz seminorm is evaluated.
struct TowerFunction {
    int level = 0;
    std::vector<std::vector<double>> values; // per letter, per floor

    double sup_norm() const;
};

struct WeaklyLipschitzReport {
    double sup = 0.0;
    double oscillation_constant = 0.0; // best constant over the evaluated levels
    double norm = 0.0;                 // sup + constant
    double approx_error = 0.0;         // max |f - f^(l)| over the sample at eval_level
    double approx_bound = 0.0;         // norm * max_a mu(zeta^[l][a])
    int eval_level = 0;
};

// Best constant in the cylinder-oscillation bound over levels
// eval_level..f.level, plus the level-`eval_level` cylindrical
// approximation error and its bound.
WeaklyLipschitzReport weakly_lipschitz_norm(const TowerFunction& f, const SAdicSystem& sys, int eval_level,
                                            int depth = 48);

} // namespace sadic
