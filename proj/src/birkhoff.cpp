#include "sadic/birkhoff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sadic/errors.hpp"

namespace sadic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::complex<double> unit_phase(double angle) { return std::polar(1.0, angle); }

// integral of e^{-2 pi i omega tau} d tau over [a, b]
std::complex<double> phase_integral(double omega, double a, double b) {
    if (omega == 0.0) return {b - a, 0.0};
    const std::complex<double> num = unit_phase(-kTwoPi * omega * a) - unit_phase(-kTwoPi * omega * b);
    return num / std::complex<double>(0.0, kTwoPi * omega);
}

} // namespace

FlowTables FlowTables::build(const SAdicSystem& sys, const RoofVector& roof, int level) {
    FlowTables t;
    t.level = level;
    t.block_time = sys.level_roof(roof, level);
    t.prefix_time.resize(sys.alphabet_size());
    for (int a = 0; a < sys.alphabet_size(); ++a) {
        const Word& w = sys.level_word(level, a);
        auto& prefix = t.prefix_time[a];
        prefix.resize(w.size() + 1);
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            prefix[i] = acc;
            acc += roof[w[i]];
        }
        prefix[w.size()] = acc;
    }
    return t;
}

std::complex<double> twisted_birkhoff(FlowCursor& cursor, const FlowTables& tables, const CylFunction& f,
                                      double omega, double big_r) {
    if (!(big_r > 0.0)) throw std::invalid_argument("twisted_birkhoff: need R > 0");
    std::complex<double> total = 0.0;
    double tau = 0.0, tau_comp = 0.0; // Kahan-compensated local time
    double remaining = big_r;
    const auto& letters = cursor.stream->letters;

    while (remaining > 0.0) {
        if (cursor.block >= letters.size())
            throw BudgetError("twisted_birkhoff: R exceeds the generated orbit budget");
        const Letter b = letters[cursor.block];
        const double block_time = tables.block_time[b];
        const double t0 = cursor.t_in_block;
        const bool block_limited = block_time - t0 <= remaining;
        const double seg = block_limited ? block_time - t0 : remaining;

        const double end = block_limited ? block_time : t0 + seg;
        if (const auto& custom = f.segment_integral()) {
            total += unit_phase(-kTwoPi * omega * (tau - t0)) * custom(b, block_time, t0, end, omega);
        } else {
            const CylFunction::Profile& prof = f.profile(b);
            // piece boundaries in absolute block time; the final piece always
            // reaches block_time >= end, so the index stays in range
            double lo = t0;
            std::size_t piece =
                std::upper_bound(prof.breaks.begin(), prof.breaks.end(), t0 / block_time) - prof.breaks.begin();
            while (lo < end) {
                double hi = piece < prof.breaks.size() ? prof.breaks[piece] * block_time : block_time;
                if (hi > end) hi = end;
                total += prof.values[piece] * phase_integral(omega, tau + (lo - t0), tau + (hi - t0));
                lo = hi;
                ++piece;
            }
        }

        // advance the clock (compensated) and the cursor
        double y = seg - tau_comp;
        double t = tau + y;
        tau_comp = (t - tau) - y;
        tau = t;
        remaining -= seg;
        if (block_limited) {
            ++cursor.block;
            cursor.t_in_block = 0.0;
            if (remaining <= 0.0) break;
        } else {
            cursor.t_in_block = t0 + seg;
            break;
        }
    }
    return total;
}

std::vector<FlowCursor> stratified_starts(const LetterStream& stream, const FlowTables& tables,
                                          const SAdicSystem& sys, int count, std::size_t usable_blocks) {
    if (count < 1) throw std::invalid_argument("stratified_starts: need count >= 1");
    usable_blocks = std::min(usable_blocks, stream.letters.size());
    if (usable_blocks == 0) throw std::invalid_argument("stratified_starts: no usable blocks");

    // cumulative level-0 heights over the usable prefix of the stream
    std::vector<std::size_t> block_heights(sys.alphabet_size());
    for (int a = 0; a < sys.alphabet_size(); ++a)
        block_heights[a] = sys.level_word(tables.level, static_cast<Letter>(a)).size();
    std::vector<std::size_t> cumulative(usable_blocks + 1, 0);
    for (std::size_t i = 0; i < usable_blocks; ++i)
        cumulative[i + 1] = cumulative[i] + block_heights[stream.letters[i]];

    const std::size_t total = cumulative[usable_blocks];
    std::vector<FlowCursor> starts;
    starts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        std::size_t pos = static_cast<std::size_t>((static_cast<double>(i) + 0.5) /
                                                   static_cast<double>(count) * static_cast<double>(total));
        pos = std::min(pos, total - 1);
        std::size_t block =
            static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), pos) -
                                     cumulative.begin()) - 1;
        std::size_t floor_idx = pos - cumulative[block];
        FlowCursor c;
        c.stream = &stream;
        c.block = block;
        c.t_in_block = tables.prefix_time[stream.letters[block]][floor_idx];
        starts.push_back(c);
    }
    return starts;
}

PowerFit fit_power_law(const std::vector<double>& r_values, const std::vector<double>& rms_values) {
    if (r_values.size() != rms_values.size()) throw std::invalid_argument("fit_power_law: size mismatch");
    std::size_t n = r_values.size();
    std::size_t from = n / 2 >= 1 ? n / 2 - (n % 2 == 0 ? 1 : 0) : 0; // upper half, at least half the points
    if (n - from < 3) from = n >= 3 ? n - 3 : 0;
    if (n - from < 3) throw std::invalid_argument("fit_power_law: need at least 3 R values");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t pts = 0;
    for (std::size_t i = from; i < n; ++i) {
        if (!(rms_values[i] > 0.0)) continue;
        double x = std::log(r_values[i]);
        double y = std::log(rms_values[i]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++pts;
    }
    if (pts < 3) throw std::invalid_argument("fit_power_law: degenerate fit");
    double denom = static_cast<double>(pts) * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw std::invalid_argument("fit_power_law: degenerate fit (single R)");
    PowerFit fit;
    fit.alpha = (static_cast<double>(pts) * sxy - sx * sy) / denom;
    fit.gamma = 2.0 * (1.0 - fit.alpha);
    fit.points = static_cast<int>(pts);
    fit.r0 = r_values[from];
    double intercept = (sy - fit.alpha * sx) / static_cast<double>(pts);
    double ss = 0.0;
    fit.c1 = 0.0;
    for (std::size_t i = from; i < n; ++i) {
        if (!(rms_values[i] > 0.0)) continue;
        double resid = std::log(rms_values[i]) - (intercept + fit.alpha * std::log(r_values[i]));
        ss += resid * resid;
        fit.c1 = std::max(fit.c1, rms_values[i] / std::pow(r_values[i], fit.alpha));
    }
    fit.residual = std::sqrt(ss / static_cast<double>(pts));
    return fit;
}

SpectralEstimate spectral_estimate(const SAdicSystem& sys, const RoofVector& roof, const CylFunction& f,
                                   const std::vector<double>& omega_grid, const std::vector<double>& r_grid,
                                   const SpectralOptions& opts) {
    if (omega_grid.empty() || r_grid.empty())
        throw std::invalid_argument("spectral_estimate: empty grids");
    std::vector<double> r_sorted = r_grid;
    std::sort(r_sorted.begin(), r_sorted.end());
    const double r_max = r_sorted.back();

    FlowTables tables = FlowTables::build(sys, roof, f.level());
    double min_block = *std::min_element(tables.block_time.begin(), tables.block_time.end());
    std::size_t needed_blocks = static_cast<std::size_t>(r_max / min_block) + 2;
    std::size_t want = needed_blocks + needed_blocks / 2 + 64;
    if (want > opts.max_letters) throw std::invalid_argument("spectral_estimate: orbit budget too small for R grid");
    LetterStream stream = LetterStream::generate(sys, f.level(), want);
    std::size_t usable = stream.letters.size() > needed_blocks ? stream.letters.size() - needed_blocks : 1;
    std::vector<FlowCursor> starts = stratified_starts(stream, tables, sys, opts.starts, usable);

    SpectralEstimate est;
    est.omega_grid = omega_grid;
    est.r_grid = r_sorted;
    est.cells.assign(omega_grid.size() * r_sorted.size(), SpectralCell{});

    for (std::size_t oi = 0; oi < omega_grid.size(); ++oi) {
        const double omega = omega_grid[oi];
        for (std::size_t ri = 0; ri < r_sorted.size(); ++ri) {
            SpectralCell& cell = est.cells[oi * r_sorted.size() + ri];
            cell.omega = omega;
            cell.big_r = r_sorted[ri];
        }
        for (const FlowCursor& start : starts) {
            FlowCursor cursor = start;
            std::complex<double> acc = 0.0;
            double consumed = 0.0;
            for (std::size_t ri = 0; ri < r_sorted.size(); ++ri) {
                double step = r_sorted[ri] - consumed;
                if (step > 0.0) {
                    std::complex<double> piece = twisted_birkhoff(cursor, tables, f, omega, step);
                    acc += unit_phase(-kTwoPi * omega * consumed) * piece;
                    consumed = r_sorted[ri];
                }
                SpectralCell& cell = est.cells[oi * r_sorted.size() + ri];
                cell.mean += acc;
                cell.rms += std::norm(acc);
            }
        }
        for (std::size_t ri = 0; ri < r_sorted.size(); ++ri) {
            SpectralCell& cell = est.cells[oi * r_sorted.size() + ri];
            cell.mean /= static_cast<double>(starts.size());
            cell.rms = std::sqrt(cell.rms / static_cast<double>(starts.size()));
        }
        std::vector<double> rms;
        for (std::size_t ri = 0; ri < r_sorted.size(); ++ri) rms.push_back(est.cell(oi, ri).rms);
        est.fits.push_back(fit_power_law(r_sorted, rms));
    }

    std::vector<double> worst(r_sorted.size(), 0.0);
    for (std::size_t ri = 0; ri < r_sorted.size(); ++ri)
        for (std::size_t oi = 0; oi < omega_grid.size(); ++oi)
            worst[ri] = std::max(worst[ri], est.cell(oi, ri).rms);
    est.uniform_fit = fit_power_law(r_sorted, worst);
    return est;
}

CorrelationEstimator::CorrelationEstimator(const SAdicSystem& sys, const RoofVector& roof,
                                           const CylFunction& f, double omega, double max_window,
                                           double orbit_time, double dt)
    : dt_(dt), orbit_time_(orbit_time) {
    if (!(dt > 0.0)) throw std::invalid_argument("CorrelationEstimator: dt must be positive");
    const double total_time = orbit_time + max_window + dt;
    FlowTables tables = FlowTables::build(sys, roof, f.level());
    double min_block = *std::min_element(tables.block_time.begin(), tables.block_time.end());
    std::size_t blocks = static_cast<std::size_t>(total_time / min_block) + 4;
    LetterStream stream = LetterStream::generate(sys, f.level(), blocks);
    FlowCursor cursor;
    cursor.stream = &stream;

    const std::size_t steps = static_cast<std::size_t>(std::ceil(total_time / dt));
    cumulative_.resize(steps + 1);
    cumulative_[0] = 0.0;
    double sumsq = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
        const Letter b = cursor.current_letter();
        const double frac = cursor.t_in_block / tables.block_time[b];
        sumsq += std::norm(f.value(b, std::min(frac, 1.0 - 1e-12)));
        std::complex<double> piece = twisted_birkhoff(cursor, tables, f, omega, dt);
        cumulative_[k + 1] =
            cumulative_[k] + unit_phase(-kTwoPi * omega * (static_cast<double>(k) * dt)) * piece;
    }
    mean_square_f_ = sumsq / static_cast<double>(steps);
}

double CorrelationEstimator::mean_square_st(double window) const {
    const std::size_t j = static_cast<std::size_t>(std::llround(window / dt_));
    if (j == 0 || j >= cumulative_.size()) throw std::invalid_argument("mean_square_st: window out of range");
    const std::size_t usable = static_cast<std::size_t>(orbit_time_ / dt_);
    const std::size_t count = std::min(usable, cumulative_.size() - 1 - j);
    if (count == 0) throw std::invalid_argument("mean_square_st: orbit too short for window");
    double acc = 0.0;
    for (std::size_t k = 0; k <= count; ++k) acc += std::norm(cumulative_[k + j] - cumulative_[k]);
    return acc / static_cast<double>(count + 1);
}

double CorrelationEstimator::sigma_mass(double radius) const {
    if (!(radius > 0.0)) throw std::invalid_argument("sigma_mass: radius must be positive");
    const double window = 1.0 / (2.0 * radius);
    const double pi = std::numbers::pi;
    return pi * pi * radius * radius * mean_square_st(window);
}

double CorrelationEstimator::correlation_zero() const { return mean_square_f_; }

double RieszBound::bound(double big_r, double sup_norm, double eta, bool torus_form) const {
    double product = torus_form ? torus_product : gr_product;
    return sup_norm * (std::sqrt(big_r) + std::pow(big_r, 1.0 + eta) * product);
}

namespace {

double torus_dist_mpf(const mpf_class& x) {
    // x = k + e with e in [-1/2, 1/2): distance is |e|
    mpf_class shifted = x + mpf_class(0.5, x.get_prec());
    mpf_class flo(0, x.get_prec());
    mpf_floor(flo.get_mpf_t(), shifted.get_mpf_t());
    mpf_class eps = x - flo;
    return std::abs(eps.get_d());
}

} // namespace

RieszBound riesz_bound(const SAdicSystem& sys, const RoofVector& roof,
                       const std::vector<Word>& good_returns, double omega, int level, double big_r,
                       const RieszOptions& opts) {
    if (good_returns.empty()) throw std::invalid_argument("riesz_bound: good return words missing");
    if (!(opts.theta1 > 0.0)) throw std::invalid_argument("riesz_bound: theta1 must be positive");
    const int m = sys.alphabet_size();
    const mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(opts.precision_bits);

    std::vector<mpf_class> omega_s;
    for (int a = 0; a < m; ++a) omega_s.emplace_back(mpf_class(omega * roof[static_cast<Letter>(a)], prec));

    std::vector<PopulationVector> ells;
    for (const Word& v : good_returns) ells.push_back(population_vector(v, sys.alphabet()));

    RieszBound out;
    const double n_hi = std::log(big_r) / (4.0 * opts.theta1);
    for (long n = level + 1; static_cast<double>(n) < n_hi; ++n) {
        IntMatrix a_n = sys.composite_matrix(static_cast<int>(n)).transpose();
        std::vector<mpf_class> image = a_n.apply(omega_s);

        double torus = 0.0;
        for (const mpf_class& coord : image) torus = std::max(torus, torus_dist_mpf(coord));

        double gr = 0.0;
        for (const PopulationVector& ell : ells) {
            mpf_class inner(0, prec);
            for (int i = 0; i < m; ++i) inner += mpf_class(ell[i], prec) * image[i];
            gr = std::max(gr, torus_dist_mpf(inner));
        }

        out.n_values.push_back(n);
        out.gr_factors.push_back(1.0 - opts.c1 * gr * gr);
        out.torus_factors.push_back(1.0 - opts.c1_tilde * torus * torus);
        out.gr_product *= out.gr_factors.back();
        out.torus_product *= out.torus_factors.back();
    }
    return out;
}

} // namespace sadic
