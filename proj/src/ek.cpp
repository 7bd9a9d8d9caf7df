#include "sadic/ek.hpp"

#include <algorithm>
#include <cfenv>
#include <functional>
#include <cmath>
#include <random>

#include "sadic/errors.hpp"

namespace sadic {

TorusPoint torus_distance(const std::vector<double>& v) {
    TorusPoint out;
    out.nearest.reserve(v.size());
    out.eps.reserve(v.size());
    for (double x : v) {
        double r = std::nearbyint(x); // FE_TONEAREST: ties to even
        out.nearest.emplace_back(r);
        double e = x - r;
        out.eps.push_back(e);
        out.dist = std::max(out.dist, std::abs(e));
    }
    return out;
}

namespace {

// Nearest integer of a high-precision value; exact .5 ties go to the even
// neighbour, matching torus_distance.
mpz_class mpf_nearest(const mpf_class& x) {
    mpf_class shifted = x + mpf_class(0.5, x.get_prec());
    mpf_class flo(0, x.get_prec());
    mpf_floor(flo.get_mpf_t(), shifted.get_mpf_t());
    mpz_class n(flo);
    if (shifted == flo && n % 2 != 0) n -= 1; // landed exactly on k + 1/2
    return n;
}

mpz_class linf_int_norm(const IntMatrix& a) { return a.linf_norm(); }

std::vector<mpf_class> omega_roof(const RoofVector& s, const std::vector<mpf_class>& roof_hp, double omega,
                                  int m, mp_bitcnt_t prec) {
    if (!roof_hp.empty() && static_cast<int>(roof_hp.size()) != m)
        throw std::invalid_argument("ek: high-precision roof size mismatch");
    std::vector<mpf_class> out;
    out.reserve(m);
    for (int a = 0; a < m; ++a) {
        if (roof_hp.empty()) {
            out.emplace_back(mpf_class(omega * s.s[a], prec));
        } else {
            mpf_class v(roof_hp[static_cast<std::size_t>(a)], prec);
            v *= mpf_class(omega, prec);
            out.push_back(std::move(v));
        }
    }
    return out;
}

} // namespace

std::vector<mpf_class> golden_roof_hp(int precision_bits) {
    const mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(precision_bits);
    mpf_class five(5, prec), root(0, prec);
    mpf_sqrt(root.get_mpf_t(), five.get_mpf_t());
    mpf_class phi = (1 + root) / 2;
    return {mpf_class(phi, prec), mpf_class(1, prec)};
}

long EKTrace::flagged_count() const {
    long c = 0;
    for (const EKRow& row : rows)
        if (row.n >= 1 && row.flag) ++c;
    return c;
}

double EKTrace::flagged_density() const {
    long n_max = rows.empty() ? 0 : rows.back().n;
    return n_max > 0 ? static_cast<double>(flagged_count()) / static_cast<double>(n_max) : 0.0;
}

std::vector<double> EKTrace::component_ratios() const {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const EKRow& cur = rows[i];
        const EKRow& next = rows[i + 1];
        std::size_t j = 0;
        for (std::size_t c = 1; c < cur.eps.size(); ++c)
            if (std::abs(cur.eps[c]) > std::abs(cur.eps[j])) j = c;
        out.push_back(cur.eps[j] == 0.0 ? 0.0 : next.eps[j] / cur.eps[j]);
    }
    return out;
}

EKTrace ek_track(const SubstitutionSequence& seq, const RoofVector& s, double omega, long n_max,
                 double flag_threshold, const EKSettings& settings) {
    const int m = seq.alphabet_size();
    if (s.size() != m) throw std::invalid_argument("ek_track: roof size mismatch");
    if (n_max < 1) throw std::invalid_argument("ek_track: need n_max >= 1");

    // Pass 1: exact products, block norms, and the precision requirement.
    std::vector<IntMatrix> products; // A(0)..A(N)
    products.reserve(static_cast<std::size_t>(n_max) + 1);
    products.push_back(IntMatrix::identity(m));
    std::vector<mpz_class> block_norms; // ||A(a_n)||, n = 1..N+1
    for (long n = 1; n <= n_max + 1; ++n) {
        IntMatrix factor = cocycle_factor(seq, n);
        block_norms.push_back(linf_int_norm(factor));
        if (n <= n_max) products.push_back(factor * products.back());
    }
    double min_rho = 0.5 / (1.0 + block_norms[0].get_d());
    for (const mpz_class& w : block_norms) min_rho = std::min(min_rho, 0.5 / (1.0 + w.get_d()));

    int precision = settings.precision_bits;
    if (precision <= 0) {
        double log2_norm = products.back().log_linf_norm() / std::log(2.0);
        double guard_bits = std::log2(1.0 / (settings.rho_guard * min_rho));
        precision = static_cast<int>(log2_norm + guard_bits) + 64;
    }
    const mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(precision);
    std::vector<mpf_class> omega_s = omega_roof(s, settings.roof_hp, omega, m, prec);

    EKTrace trace;
    trace.flag_threshold = flag_threshold;
    trace.precision_bits = precision;
    trace.min_rho = min_rho;

    for (long n = 0; n <= n_max; ++n) {
        std::vector<mpf_class> v = products[static_cast<std::size_t>(n)].apply(omega_s);
        EKRow row;
        row.n = n;
        for (int i = 0; i < m; ++i) {
            mpz_class k = mpf_nearest(v[i]);
            mpf_class eps = v[i] - mpf_class(k, prec);
            double e = eps.get_d();
            row.k.push_back(std::move(k));
            row.eps.push_back(e);
            row.eps_inf = std::max(row.eps_inf, std::abs(e));
        }
        const mpz_class& w_norm = block_norms[static_cast<std::size_t>(n)]; // ||A(a_{n+1})||
        row.w_next = log_mpz(w_norm);
        row.rho = 0.5 / (1.0 + w_norm.get_d());
        mpz_class base = w_norm + 2;
        mpz_pow_ui(row.m_bound.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(m));
        row.flag = row.eps_inf >= flag_threshold;
        trace.rows.push_back(std::move(row));
    }

    // Lemma (ii) online: whenever both offsets sit below rho_n the next
    // lattice point is forced.
    for (long n = 0; n < n_max; ++n) {
        const EKRow& cur = trace.rows[static_cast<std::size_t>(n)];
        const EKRow& next = trace.rows[static_cast<std::size_t>(n) + 1];
        if (std::max(cur.eps_inf, next.eps_inf) < cur.rho) {
            std::vector<mpz_class> forced = cocycle_factor(seq, n + 1).apply(cur.k);
            if (forced != next.k) ++trace.uniqueness_violations;
        }
    }
    return trace;
}

CriterionParams criterion_constants(double delta, double l1, double c1_tilde, double theta1,
                                    std::optional<double> rho_override) {
    if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("criterion_constants: delta outside (0,1)");
    if (!(l1 > 0.0)) throw std::invalid_argument("criterion_constants: L1 must be positive");
    if (!(c1_tilde > 0.0 && c1_tilde < 1.0))
        throw std::invalid_argument("criterion_constants: c1~ outside (0,1)");
    if (!(theta1 > 0.0)) throw std::invalid_argument("criterion_constants: theta1 must be positive");

    CriterionParams p;
    p.delta = delta;
    p.l1 = l1;
    p.c1_tilde = c1_tilde;
    p.theta1 = theta1;
    p.k_exponent = 2.0 * l1 * std::log(1.0 / delta);
    p.rho = rho_override ? *rho_override : 0.5 / (1.0 + std::exp(p.k_exponent));
    if (!(p.rho > 0.0 && p.rho < 0.5))
        throw std::invalid_argument("criterion_constants: rho outside (0, 1/2)");
    p.gamma = std::min(delta / 16.0, -delta * std::log(1.0 - c1_tilde * p.rho * p.rho) / (8.0 * theta1));
    return p;
}

DensityReport good_time_density(const SubstitutionSequence& seq, const RoofVector& s,
                                const std::vector<double>& omega_grid, double rho, long n_max,
                                double b_range, const EKSettings& settings) {
    if (omega_grid.empty()) throw std::invalid_argument("good_time_density: empty omega grid");
    if (!(b_range > 1.0)) throw std::invalid_argument("good_time_density: need B > 1");
    for (double w : omega_grid)
        if (!(w >= 1.0 / b_range - 1e-12 && w <= b_range + 1e-12))
            throw std::invalid_argument("good_time_density: omega outside [1/B, B]");

    const int m = seq.alphabet_size();
    std::vector<IntMatrix> products;
    products.reserve(static_cast<std::size_t>(n_max) + 1);
    products.push_back(IntMatrix::identity(m));
    for (long n = 1; n <= n_max; ++n) products.push_back(cocycle_factor(seq, n) * products.back());

    int precision = settings.precision_bits;
    if (precision <= 0)
        precision = static_cast<int>(products.back().log_linf_norm() / std::log(2.0)) + 96;
    const mp_bitcnt_t prec = static_cast<mp_bitcnt_t>(precision);

    DensityReport report;
    report.rho = rho;
    report.b_range = b_range;
    report.n_max = n_max;
    report.min_density = 1.0;
    for (double omega : omega_grid) {
        std::vector<mpf_class> x = omega_roof(s, settings.roof_hp, omega, m, prec);
        long count = 0;
        for (long n = 1; n <= n_max; ++n) {
            std::vector<mpf_class> v = products[static_cast<std::size_t>(n)].apply(x);
            double dist = 0.0;
            for (const mpf_class& coord : v) {
                mpf_class eps = coord - mpf_class(mpf_nearest(coord), prec);
                dist = std::max(dist, std::abs(eps.get_d()));
            }
            if (dist >= rho) ++count;
        }
        DensityReport::PerOmega row;
        row.omega = omega;
        row.count = count;
        row.density = static_cast<double>(count) / static_cast<double>(n_max);
        report.min_density = std::min(report.min_density, row.density);
        report.rows.push_back(row);
    }
    return report;
}

CoveringCount ek_covering_count(const SubstitutionSequence& seq, long n_max, double delta, double b_range,
                                std::uint64_t leaf_budget) {
    if (n_max < 1) throw std::invalid_argument("ek_covering_count: need N >= 1");
    if (!(delta >= 0.0 && delta < 1.0)) throw std::invalid_argument("ek_covering_count: delta outside [0,1)");
    if (!(b_range > 1.0)) throw std::invalid_argument("ek_covering_count: need B > 1");
    const int m = seq.alphabet_size();

    CoveringCount out;
    out.n_max = n_max;
    out.delta = delta;
    out.b_range = b_range;

    // |Psi| < delta N, evenly spread over {1..N}.
    long psi_size = static_cast<long>(std::floor(delta * static_cast<double>(n_max)));
    if (psi_size >= 1 && std::abs(delta * static_cast<double>(n_max) - static_cast<double>(psi_size)) < 1e-12)
        --psi_size; // strict inequality when delta N is an integer
    for (long i = 1; i <= psi_size; ++i)
        out.psi.push_back(std::max<long>(1, (i * n_max) / (psi_size + 1)));

    // Admissible starts: K_0 = nearest(omega s) componentwise with
    // omega in [1/B, B] and s on the normalized simplex, so coordinate j
    // ranges over [0, B / mu_j].
    SAdicSystem sys{seq};
    std::vector<double> mu = sys.letter_measures();
    std::vector<long> k0_hi(m);
    out.k0_count = 1;
    for (int j = 0; j < m; ++j) {
        k0_hi[j] = static_cast<long>(std::floor(b_range / mu[j] + 0.5));
        out.k0_count *= mpz_class(k0_hi[j] + 1);
    }

    // Branch widths and the Lemma bound at the branch positions.
    out.branch_width_product = 1;
    out.m_bound_product = out.k0_count;
    std::vector<long> widths;
    for (long n : out.psi) {
        mpz_class norm = linf_int_norm(cocycle_factor(seq, n + 1));
        // ball radius (1 + ||A||)/2 per coordinate
        long w = 2 * static_cast<long>((1 + norm.get_ui()) / 2) + 1;
        widths.push_back(w);
        mpz_class width_m, base(w);
        mpz_pow_ui(width_m.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(m));
        out.branch_width_product *= width_m;
        mpz_class mb, mb_base = norm + 2;
        mpz_pow_ui(mb.get_mpz_t(), mb_base.get_mpz_t(), static_cast<unsigned long>(m));
        out.m_bound_product *= mb;
    }

    // Exhaustive DFS over starts and branch choices, counting leaves.
    mpz_class leaves = 0;
    std::uint64_t visited = 0;
    std::vector<IntMatrix> factors;
    for (long n = 1; n <= n_max; ++n) factors.push_back(cocycle_factor(seq, n));

    std::vector<mpz_class> k(m, 0);
    std::function<void(long, std::vector<mpz_class>&)> dfs = [&](long n, std::vector<mpz_class>& cur) {
        if (++visited > leaf_budget) throw BudgetError("ek_covering_count: budget exceeded");
        if (n == n_max) {
            leaves += 1;
            return;
        }
        std::vector<mpz_class> pushed = factors[static_cast<std::size_t>(n)].apply(cur);
        auto it = std::find(out.psi.begin(), out.psi.end(), n); // branch when building K_{n+1} from K_n, n in Psi
        if (it == out.psi.end()) {
            dfs(n + 1, pushed);
            return;
        }
        std::size_t branch = static_cast<std::size_t>(it - out.psi.begin());
        long half = (widths[branch] - 1) / 2;
        std::vector<long> offset(m, -half);
        while (true) {
            std::vector<mpz_class> next = pushed;
            for (int j = 0; j < m; ++j) next[j] += offset[j];
            dfs(n + 1, next);
            int carry = 0;
            while (carry < m && ++offset[carry] > half) offset[carry++] = -half;
            if (carry == m) break;
        }
    };

    std::vector<long> start(m, 0);
    std::function<void(int)> start_loop = [&](int j) {
        if (j == m) {
            std::vector<mpz_class> k0;
            for (long v : start) k0.emplace_back(v);
            dfs(0, k0);
            return;
        }
        for (long v = 0; v <= k0_hi[j]; ++v) {
            start[static_cast<std::size_t>(j)] = v;
            start_loop(j + 1);
        }
    };
    start_loop(0);

    out.count = leaves;
    out.log_count = log_mpz(out.count);
    out.log_rate = out.log_count / static_cast<double>(n_max);
    return out;
}

LatticeConstant lattice_constant(const std::vector<PopulationVector>& ells, std::uint64_t seed,
                                 long samples) {
    if (ells.empty()) throw std::invalid_argument("lattice_constant: no vectors");
    const int m = static_cast<int>(ells[0].size());
    const int k = static_cast<int>(ells.size());

    LatticeConstant out;
    for (const PopulationVector& ell : ells) {
        double l1 = 0.0;
        for (const mpz_class& c : ell) l1 += std::abs(c.get_d());
        out.c_right = std::max(out.c_right, l1);
    }

    out.coefficients = IntMatrix(m, k);
    for (int i = 0; i < m; ++i) {
        std::vector<mpz_class> e(m, 0);
        e[i] = 1;
        auto coeffs = solve_integer(ells, e);
        if (!coeffs)
            throw std::invalid_argument("lattice_constant: population vectors do not span the full lattice");
        double abs_sum = 0.0;
        for (int j = 0; j < k; ++j) {
            out.coefficients.at(i, j) = (*coeffs)[j];
            abs_sum += std::abs((*coeffs)[j].get_d());
        }
        out.c_left = std::max(out.c_left, abs_sum);
    }
    out.c = std::max(out.c_right, out.c_left);

    auto torus_scalar = [](double x) {
        double r = x - std::nearbyint(x);
        return std::abs(r);
    };

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    out.samples = samples;
    for (long t = 0; t < samples; ++t) {
        std::vector<double> x(m);
        for (double& c : x) c = coord(rng);
        double xd = 0.0;
        for (double c : x) xd = std::max(xd, torus_scalar(c));
        double inner_max = 0.0;
        for (const PopulationVector& ell : ells) {
            double dot = 0.0;
            for (int i = 0; i < m; ++i) dot += ell[i].get_d() * x[i];
            inner_max = std::max(inner_max, torus_scalar(dot));
        }
        const double slack = 1e-9;
        if (!(inner_max <= out.c * xd + slack) || !(xd <= out.c * inner_max + slack)) ++out.violations;
    }
    return out;
}

} // namespace sadic
