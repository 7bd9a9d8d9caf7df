#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sadic/ek.hpp"

using namespace sadic;

namespace {
const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
}

TEST_CASE("torus distance basics") {
    TorusPoint p = torus_distance({2.3, 0.4});
    CHECK(p.nearest[0] == 2);
    CHECK(p.nearest[1] == 0);
    CHECK(p.eps[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(p.eps[1] == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(p.dist == doctest::Approx(0.4).epsilon(1e-12));

    TorusPoint integer_point = torus_distance({5.0, -3.0, 0.0});
    CHECK(integer_point.dist == 0.0);

    // ties round half to even
    TorusPoint tie = torus_distance({0.5, 1.5, 2.5, -0.5});
    CHECK(tie.nearest[0] == 0);
    CHECK(tie.nearest[1] == 2);
    CHECK(tie.nearest[2] == 2);
    CHECK(tie.nearest[3] == 0);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> coord(-100.0, 100.0);
    for (int t = 0; t < 1000; ++t) {
        TorusPoint q = torus_distance({coord(rng), coord(rng)});
        CHECK(q.dist <= 0.5);
    }
}

TEST_CASE("golden eigenvalue case: eps ratios approach -1/phi") {
    SubstitutionSequence fib = preset_sequence("fib", 0);
    RoofVector roof({kPhi, 1.0});
    EKSettings settings;
    settings.roof_hp = golden_roof_hp();
    EKTrace trace = ek_track(fib, roof, 1.0, 40, 0.05, settings);
    REQUIRE(trace.rows.size() == 41);
    CHECK(trace.uniqueness_violations == 0);

    // A(n) (phi, 1) = phi^n (phi, 1): offsets are (-1/phi)^n scale, Lucas integers nearby
    std::vector<double> ratios = trace.component_ratios();
    for (int n = 5; n <= 39; ++n) {
        CHECK(std::abs(ratios[static_cast<std::size_t>(n)] - (-1.0 / kPhi)) < 0.05 / kPhi);
    }
    // norms decay
    for (int n = 5; n <= 39; ++n)
        CHECK(trace.rows[static_cast<std::size_t>(n) + 1].eps_inf <
              trace.rows[static_cast<std::size_t>(n)].eps_inf);

    // decomposition exactness at working precision: A(n)(omega s) = K_n + eps_n
    // spot check at n = 20 against exact integer matrix times high-precision phi
    const EKRow& row = trace.rows[20];
    CHECK(row.eps_inf < 1e-3);
    CHECK(row.eps_inf > 0.0);
}

TEST_CASE("ek rows carry the lemma quantities") {
    SubstitutionSequence fib = preset_sequence("fib", 0);
    RoofVector roof({1.0, 1.0});
    EKTrace trace = ek_track(fib, roof, 1.2345, 30, 0.05);
    for (const EKRow& row : trace.rows) {
        CHECK(row.eps_inf <= 0.5);
        CHECK(row.w_next == doctest::Approx(std::log(2.0)).epsilon(1e-12)); // ||A|| = 2 each block
        CHECK(row.rho == doctest::Approx(0.5 / 3.0).epsilon(1e-12));
        CHECK(row.m_bound == 16); // (2 + 2)^2
        CHECK(row.k.size() == 2);
    }
}

TEST_CASE("lemma branching and uniqueness over random samples") {
    SubstitutionSequence seq = preset_sequence("iid2", 77);
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> omega_dist(0.3, 3.0);
    std::uniform_real_distribution<double> roof_dist(0.4, 1.6);

    long checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        double omega = omega_dist(rng);
        RoofVector roof({roof_dist(rng), roof_dist(rng)});
        long n_max = 6 + static_cast<long>(rng() % 20);
        EKTrace trace = ek_track(seq, roof, omega, n_max, 0.05);
        CHECK(trace.uniqueness_violations == 0);

        // the displayed bound of the lemma, exactly:
        // ||K_{n+1} - A K_n|| <= (1 + exp W_{n+1}) max(||eps_n||, ||eps_{n+1}||)
        for (long n = 0; n < n_max; ++n) {
            const EKRow& cur = trace.rows[static_cast<std::size_t>(n)];
            const EKRow& next = trace.rows[static_cast<std::size_t>(n) + 1];
            std::vector<mpz_class> pushed = cocycle_factor(seq, n + 1).apply(cur.k);
            double diff = 0.0;
            for (int i = 0; i < 2; ++i) diff = std::max(diff, std::abs(next.k[i].get_d() - pushed[i].get_d()));
            double rhs = (1.0 + std::exp(cur.w_next)) * std::max(cur.eps_inf, next.eps_inf);
            CHECK(diff <= rhs + 1e-9);
            ++checked;
        }
    }
    CHECK(checked > 3000);
}

TEST_CASE("criterion constants") {
    CriterionParams p = criterion_constants(0.1, 1.0, 0.5, 1.0);
    CHECK(p.k_exponent == doctest::Approx(2.0 * std::log(10.0)).epsilon(1e-14));
    CHECK(p.rho == doctest::Approx(0.5 / 101.0).epsilon(1e-12));

    CriterionParams q = criterion_constants(0.1, 1.0, 0.5, 1.0, 0.25);
    CHECK(q.gamma == doctest::Approx(std::min(0.1 / 16.0, -0.1 * std::log(1.0 - 0.5 * 0.0625) / 8.0))
                         .epsilon(1e-14));
    CHECK(q.gamma == doctest::Approx(3.9686e-4).epsilon(1e-3));

    // gamma <= delta/16 always
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    for (int t = 0; t < 200; ++t) {
        double delta = unit(rng);
        CriterionParams r = criterion_constants(delta, 0.1 + unit(rng), unit(rng), 0.1 + 2.0 * unit(rng));
        CHECK(r.gamma <= delta / 16.0 + 1e-15);
        CHECK(r.rho > 0.0);
        CHECK(r.rho < 0.5);
    }

    CHECK_THROWS_AS(criterion_constants(0.0, 1, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(criterion_constants(0.1, -1, 0.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(criterion_constants(0.1, 1, 1.5, 1), std::invalid_argument);
    CHECK_THROWS_AS(criterion_constants(0.1, 1, 0.5, 0), std::invalid_argument);
}

TEST_CASE("good time density: eigenvalue direction fails, generic direction passes") {
    SubstitutionSequence fib = preset_sequence("fib", 0);

    // golden roof with omega = 1: the cocycle image converges to the lattice
    EKSettings settings;
    settings.roof_hp = golden_roof_hp(1024);
    DensityReport eig = good_time_density(fib, RoofVector({kPhi, 1.0}), {1.0}, 0.05, 300, 2.0, settings);
    CHECK(eig.rows[0].density < 0.05);

    // pinned generic sample
    DensityReport gen = good_time_density(fib, RoofVector({0.9337, 0.7219}), {1.2931}, 0.05, 300, 2.0);
    CHECK(gen.rows[0].density >= 0.2);

    // density monotone nonincreasing in rho
    DensityReport lo = good_time_density(fib, RoofVector({0.9337, 0.7219}), {1.2931}, 0.02, 300, 2.0);
    CHECK(lo.rows[0].count >= gen.rows[0].count);

    // omega grid validation
    CHECK_THROWS_AS(good_time_density(fib, RoofVector({1.0, 1.0}), {5.0}, 0.05, 50, 2.0),
                    std::invalid_argument);
}

TEST_CASE("covering count: no branching, exact products, budget") {
    SubstitutionSequence fib = preset_sequence("fib", 0);

    CoveringCount none = ek_covering_count(fib, 12, 0.0, 2.0);
    CHECK(none.psi.empty());
    CHECK(none.count == none.k0_count);

    CoveringCount some = ek_covering_count(fib, 20, 0.1, 2.0);
    CHECK(static_cast<double>(some.psi.size()) < 0.1 * 20.0);
    CHECK(some.count == some.k0_count * some.branch_width_product);
    CHECK(some.count <= some.m_bound_product);
    CHECK(some.log_rate > 0.0);

    CHECK_THROWS_AS(ek_covering_count(fib, 20, 0.5, 2.0, 100), std::runtime_error);
}

TEST_CASE("lattice constant") {
    // standard basis: C = 1, no violations
    LatticeConstant id = lattice_constant({{1, 0}, {0, 1}}, 11);
    CHECK(id.c == doctest::Approx(1.0));
    CHECK(id.violations == 0);

    // columns of [[2,1],[1,1]]: coefficients from the exact inverse, C = 3
    LatticeConstant two = lattice_constant({{2, 1}, {1, 1}}, 12);
    CHECK(two.c_right == doctest::Approx(3.0));
    CHECK(two.c_left == doctest::Approx(3.0));
    CHECK(two.c == doctest::Approx(3.0));
    CHECK(two.violations == 0);
    // a_{ij} recover unit vectors exactly
    for (int i = 0; i < 2; ++i) {
        mpz_class e0 = two.coefficients.at(i, 0) * 2 + two.coefficients.at(i, 1) * 1;
        mpz_class e1 = two.coefficients.at(i, 0) * 1 + two.coefficients.at(i, 1) * 1;
        CHECK(e0 == (i == 0 ? 1 : 0));
        CHECK(e1 == (i == 0 ? 0 : 1));
    }

    // not a full lattice
    CHECK_THROWS_AS(lattice_constant({{2, 0}, {0, 2}}, 13), std::invalid_argument);
}
