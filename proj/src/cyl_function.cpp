#include "sadic/cyl_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sadic {

CylFunction::CylFunction(int level, std::vector<Profile> profiles)
    : level_(level), profiles_(std::move(profiles)) {
    if (level < 0) throw std::invalid_argument("CylFunction: negative level");
    if (profiles_.size() < 2) throw std::invalid_argument("CylFunction: need a profile per letter");
    for (const Profile& p : profiles_) {
        if (p.values.size() != p.breaks.size() + 1)
            throw std::invalid_argument("CylFunction: values must be one more than breaks");
        if (!std::is_sorted(p.breaks.begin(), p.breaks.end()))
            throw std::invalid_argument("CylFunction: breaks must be ascending");
        for (double b : p.breaks)
            if (!(b > 0.0 && b < 1.0)) throw std::invalid_argument("CylFunction: breaks must lie in (0,1)");
    }
}

CylFunction CylFunction::constant(int level, int m, std::complex<double> value) {
    std::vector<Profile> profiles(static_cast<std::size_t>(m), Profile{{}, {value}});
    return CylFunction(level, std::move(profiles));
}

CylFunction CylFunction::indicator(int level, int m, Letter a) {
    std::vector<Profile> profiles(static_cast<std::size_t>(m), Profile{{}, {0.0}});
    profiles[a] = Profile{{}, {1.0}};
    return CylFunction(level, std::move(profiles));
}

CylFunction CylFunction::blockwise(int level, std::vector<std::complex<double>> values) {
    std::vector<Profile> profiles;
    profiles.reserve(values.size());
    for (auto v : values) profiles.push_back(Profile{{}, {v}});
    return CylFunction(level, std::move(profiles));
}

CylFunction CylFunction::mean_zero_blockwise(const SAdicSystem& sys, const RoofVector& roof, int level,
                                             std::vector<std::complex<double>> values) {
    // Space average of a blockwise function: sum_a mu_l(a) s^(l)_a v_a over
    // the total suspension mass.
    std::vector<double> mu = sys.measure_vector(level);
    std::vector<double> s_l = sys.level_roof(roof, level);
    std::complex<double> mean = 0.0;
    double mass = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a) {
        mean += mu[a] * s_l[a] * values[a];
        mass += mu[a] * s_l[a];
    }
    mean /= mass;
    for (auto& v : values) v -= mean;
    return blockwise(level, std::move(values));
}

std::complex<double> CylFunction::value(Letter a, double fraction) const {
    const Profile& p = profiles_[a];
    std::size_t piece = std::upper_bound(p.breaks.begin(), p.breaks.end(), fraction) - p.breaks.begin();
    return p.values[piece];
}

double CylFunction::sup_norm() const {
    double best = 0.0;
    for (const Profile& p : profiles_)
        for (auto v : p.values) best = std::max(best, std::abs(v));
    return best;
}

double TowerFunction::sup_norm() const {
    double best = 0.0;
    for (const auto& column : values)
        for (double v : column) best = std::max(best, std::abs(v));
    return best;
}

WeaklyLipschitzReport weakly_lipschitz_norm(const TowerFunction& f, const SAdicSystem& sys, int eval_level,
                                            int depth) {
    const int m = sys.alphabet_size();
    if (static_cast<int>(f.values.size()) != m)
        throw std::invalid_argument("weakly_lipschitz_norm: one value column per letter required");
    if (eval_level > f.level) throw std::invalid_argument("weakly_lipschitz_norm: eval level above sample level");

    WeaklyLipschitzReport report;
    report.eval_level = eval_level;
    report.sup = f.sup_norm();

    for (int lev = eval_level; lev <= f.level; ++lev) {
        std::vector<double> mu = sys.measure_vector(lev, depth);
        std::vector<mpz_class> heights = sys.composite_matrix(lev).column_sums();
        // Spread of the sample within each (letter, floor-offset) class of
        // the level-`lev` partition.
        std::map<std::pair<Letter, std::size_t>, std::pair<double, double>> ranges;
        std::map<std::pair<Letter, std::size_t>, double> representative;
        double approx_err = 0.0;
        for (int b = 0; b < m; ++b) {
            Word blocks = sys.expand(static_cast<Letter>(b), f.level, lev);
            std::size_t expected = 0;
            for (Letter a : blocks) expected += heights[a].get_ui();
            if (expected != f.values[b].size())
                throw std::invalid_argument("weakly_lipschitz_norm: sample size does not match tower heights");
            std::size_t k = 0;
            for (Letter a : blocks) {
                std::size_t h = heights[a].get_ui();
                for (std::size_t i = 0; i < h; ++i, ++k) {
                    double v = f.values[b].at(k);
                    auto key = std::make_pair(a, i);
                    auto [it, fresh] = ranges.try_emplace(key, std::make_pair(v, v));
                    if (!fresh) {
                        it->second.first = std::min(it->second.first, v);
                        it->second.second = std::max(it->second.second, v);
                    }
                    if (lev == eval_level) {
                        auto [rep, inserted] = representative.try_emplace(key, v);
                        approx_err = std::max(approx_err, std::abs(v - rep->second));
                    }
                }
            }
        }
        for (const auto& [key, range] : ranges) {
            double spread = range.second - range.first;
            if (spread > 0.0)
                report.oscillation_constant = std::max(report.oscillation_constant, spread / mu[key.first]);
        }
        if (lev == eval_level) {
            report.approx_error = approx_err;
            double max_mu = *std::max_element(mu.begin(), mu.end());
            report.approx_bound = max_mu; // scaled below once the norm is known
        }
    }
    report.norm = report.sup + report.oscillation_constant;
    report.approx_bound *= report.norm;
    return report;
}

} // namespace sadic
