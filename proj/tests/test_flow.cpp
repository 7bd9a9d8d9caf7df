#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "sadic/birkhoff.hpp"
#include "sadic/cyl_function.hpp"
#include "sadic/flow.hpp"

using namespace sadic;

namespace {
const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;

SAdicSystem fib_system() { return SAdicSystem(preset_sequence("fib", 0)); }
} // namespace

TEST_CASE("invariant measure of the fibonacci system") {
    SAdicSystem sys = fib_system();
    std::vector<double> mu = sys.letter_measures();
    CHECK(mu[0] == doctest::Approx(1.0 / kPhi).epsilon(1e-10));
    CHECK(mu[1] == doctest::Approx(1.0 / (kPhi * kPhi)).epsilon(1e-10));
    CHECK(mu[0] + mu[1] == doctest::Approx(1.0).epsilon(1e-12));
    for (double v : mu) CHECK(v > 0.0);

    // depth doubled: change below 1e-10 for periodic positive blocks
    std::vector<double> coarse = sys.measure_vector(0, 40);
    std::vector<double> fine = sys.measure_vector(0, 80);
    for (int a = 0; a < 2; ++a) CHECK(std::abs(coarse[a] - fine[a]) < 1e-10);

    // recursion residual across levels
    CHECK(sys.measure_recursion_residual(8) < 1e-9);
}

TEST_CASE("measure vector requires a primitivity witness") {
    // swap-like images: the incidence pattern alternates between diagonal
    // and antidiagonal and never becomes positive
    SubstitutionSequence seq = SubstitutionSequence::periodic({Substitution::parse("22,11")});
    SAdicSystem sys(std::move(seq));
    CHECK_THROWS_AS(static_cast<void>(sys.measure_vector(0, 60)), std::runtime_error);
}

TEST_CASE("towers: heights are column sums and floor letters read the words") {
    SAdicSystem sys = fib_system();
    KRTower t1 = sys.tower(1);
    CHECK(t1.heights[0] == 2);
    CHECK(t1.heights[1] == 1);

    KRTower t5 = sys.tower(5);
    std::vector<mpz_class> sums = sys.composite_matrix(5).column_sums();
    CHECK(t5.heights == sums);
    // F_7 = 13, F_6 = 8
    CHECK(t5.heights[0] == 13);
    CHECK(t5.heights[1] == 8);

    const Word& w = sys.level_word(5, 0);
    for (std::size_t k = 0; k < w.size(); ++k) CHECK(t5.floor_letter(0, k) == w[k]);
    CHECK_THROWS_AS(t5.floor_letter(0, w.size()), std::out_of_range);
}

TEST_CASE("long symbol streams reproduce letter frequencies") {
    SAdicSystem sys = fib_system();
    LetterStream stream = LetterStream::generate(sys, 0, 10000);
    REQUIRE(stream.letters.size() >= 10000);
    std::vector<double> freq(2, 0.0);
    for (std::size_t i = 0; i < 10000; ++i) freq[stream.letters[i]] += 1.0;
    for (auto& fval : freq) fval /= 10000.0;
    std::vector<double> mu = sys.letter_measures();
    CHECK(std::abs(freq[0] - mu[0]) < 0.02);
    CHECK(std::abs(freq[1] - mu[1]) < 0.02);
}

TEST_CASE("roof normalization") {
    SAdicSystem sys = fib_system();
    RoofVector unit({1.0, 1.0});
    RoofVector normalized = sys.normalize_roof(unit);
    CHECK(normalized.normalized);
    // sum mu_a * 1 = 1 already, so (1,1) is fixed
    CHECK(normalized.s[0] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(normalized.s[1] == doctest::Approx(1.0).epsilon(1e-10));

    RoofVector doubled = sys.normalize_roof(RoofVector({2.0, 2.0}));
    CHECK(doubled.s[0] == doctest::Approx(1.0).epsilon(1e-10));

    RoofVector golden = sys.normalize_roof(RoofVector({kPhi, 1.0}));
    std::vector<double> mu = sys.letter_measures();
    double denom = mu[0] * kPhi + mu[1];
    CHECK(golden.s[0] == doctest::Approx(kPhi / denom).epsilon(1e-10));
    CHECK(golden.s[1] == doctest::Approx(1.0 / denom).epsilon(1e-10));

    CHECK_THROWS_AS(RoofVector({1.0, 0.0}), std::invalid_argument);
}

TEST_CASE("twisted integrals: constants, decay bound, additivity") {
    SAdicSystem sys = fib_system();
    RoofVector roof = sys.normalize_roof(RoofVector({kPhi, 1.0}));
    FlowTables tables = FlowTables::build(sys, roof, 0);
    CylFunction one = CylFunction::constant(0, 2, 1.0);

    LetterStream stream = LetterStream::generate(sys, 0, 4000);

    // f == 1, omega = 0: S_R = R
    {
        FlowCursor cursor{&stream, 0, 0.0};
        std::complex<double> s = twisted_birkhoff(cursor, tables, one, 0.0, 500.0);
        CHECK(s.real() == doctest::Approx(500.0).epsilon(1e-12));
        CHECK(std::abs(s.imag()) < 1e-12);
    }

    // f == 1, omega != 0: closed form (1 - e^{-2 pi i omega R}) / (2 pi i omega)
    {
        const double omega = 0.7, big_r = 321.0;
        FlowCursor cursor{&stream, 0, 0.0};
        std::complex<double> s = twisted_birkhoff(cursor, tables, one, omega, big_r);
        const std::complex<double> i2pw(0.0, 2.0 * std::numbers::pi * omega);
        std::complex<double> expect = (1.0 - std::exp(-i2pw * big_r)) / i2pw;
        CHECK(std::abs(s - expect) < 1e-10);
        CHECK(std::abs(s) <= 1.0 / (std::numbers::pi * omega) + 1e-12);
    }

    // additivity with phase: S_{R1+R2}(y) = S_{R1}(y) + e^{-2 pi i omega R1} S_{R2}(h_{R1} y)
    {
        const double omega = 1.3, r1 = 157.25, r2 = 411.5;
        CylFunction f(0, {CylFunction::Profile{{0.5}, {1.0, -0.25}}, CylFunction::Profile{{}, {0.75}}});
        FlowCursor whole{&stream, 0, 0.0};
        std::complex<double> total = twisted_birkhoff(whole, tables, f, omega, r1 + r2);
        FlowCursor split{&stream, 0, 0.0};
        std::complex<double> first = twisted_birkhoff(split, tables, f, omega, r1);
        std::complex<double> second = twisted_birkhoff(split, tables, f, omega, r2);
        std::complex<double> glued =
            first + std::polar(1.0, -2.0 * std::numbers::pi * omega * r1) * second;
        CHECK(std::abs(total - glued) < 1e-10 * (1.0 + std::abs(total)));
    }

    // budget error
    {
        FlowCursor cursor{&stream, 0, 0.0};
        CHECK_THROWS_AS(twisted_birkhoff(cursor, tables, one, 0.0, 1e9), std::runtime_error);
    }
}

TEST_CASE("integration at a deeper function level") {
    SAdicSystem sys = fib_system();
    RoofVector roof = sys.normalize_roof(RoofVector({1.0, 1.0}));
    const int level = 3;
    FlowTables tables = FlowTables::build(sys, roof, level);
    // level-3 blocks have durations s^(3) = (S^[3])^t s
    std::vector<double> s3 = sys.level_roof(roof, level);
    CHECK(tables.block_time[0] == doctest::Approx(s3[0]));

    // indicator of letter-1 blocks at level 3, omega = 0: integral counts
    // time spent in those blocks
    CylFunction ind = CylFunction::indicator(level, 2, 0);
    LetterStream stream = LetterStream::generate(sys, level, 500);
    FlowCursor cursor{&stream, 0, 0.0};
    const double big_r = 200.0;
    std::complex<double> s = twisted_birkhoff(cursor, tables, ind, 0.0, big_r);
    // direct accounting oracle
    double expect = 0.0, t = 0.0;
    for (std::size_t i = 0; t < big_r; ++i) {
        Letter b = stream.letters[i];
        double seg = std::min(tables.block_time[b], big_r - t);
        if (b == 0) expect += seg;
        t += seg;
    }
    CHECK(s.real() == doctest::Approx(expect).epsilon(1e-10));
}

TEST_CASE("stratified starts land on distinct floors with valid offsets") {
    SAdicSystem sys = fib_system();
    RoofVector roof = sys.normalize_roof(RoofVector({kPhi, 1.0}));
    FlowTables tables = FlowTables::build(sys, roof, 2);
    LetterStream stream = LetterStream::generate(sys, 2, 3000);
    auto starts = stratified_starts(stream, tables, sys, 16, stream.letters.size() - 100);
    CHECK(starts.size() == 16);
    for (const FlowCursor& c : starts) {
        REQUIRE(c.block < stream.letters.size());
        Letter b = stream.letters[c.block];
        CHECK(c.t_in_block >= 0.0);
        CHECK(c.t_in_block < tables.block_time[b]);
    }
    // spread over the stream
    CHECK(starts.front().block < starts.back().block);
}

TEST_CASE("weakly lipschitz seminorm") {
    SAdicSystem sys = fib_system();

    // cylindrical function of level l sampled at level l: zero oscillation
    {
        const int level = 3;
        KRTower t = sys.tower(level);
        TowerFunction f;
        f.level = level;
        f.values.resize(2);
        for (int a = 0; a < 2; ++a) {
            std::size_t h = t.heights[a].get_ui();
            f.values[a].assign(h, a == 0 ? 0.6 : -0.2); // depends only on the level-3 letter... per floor
            for (std::size_t k = 0; k < h; ++k) f.values[a][k] = 0.1 * static_cast<double>(k) + (a ? 1.0 : 0.0);
        }
        WeaklyLipschitzReport rep = weakly_lipschitz_norm(f, sys, level);
        CHECK(rep.oscillation_constant == 0.0);
        CHECK(rep.norm == doctest::Approx(rep.sup));
        CHECK(rep.approx_error == 0.0);
    }

    // variation of exactly mu(zeta^[l][a]) across each level-l cylinder: C = 1
    {
        const int level = 2, sample_level = 3;
        std::vector<double> mu = sys.measure_vector(level);
        KRTower deep = sys.tower(sample_level);
        std::vector<mpz_class> shallow_heights = sys.composite_matrix(level).column_sums();
        TowerFunction f;
        f.level = sample_level;
        f.values.resize(2);
        for (int b = 0; b < 2; ++b) {
            Word blocks = sys.expand(static_cast<Letter>(b), sample_level, level);
            // the same (letter, floor) slot differs by exactly mu(cylinder)
            // between the two deeper towers
            for (Letter a : blocks) {
                std::size_t h = shallow_heights[a].get_ui();
                double v = b == 1 ? mu[a] : 0.0;
                for (std::size_t k = 0; k < h; ++k) f.values[b].push_back(v);
            }
        }
        WeaklyLipschitzReport rep = weakly_lipschitz_norm(f, sys, level);
        CHECK(rep.oscillation_constant == doctest::Approx(1.0).epsilon(1e-9));
        // approximation error bound of the cylindrical approximation holds
        CHECK(rep.approx_error <= rep.approx_bound + 1e-12);
    }
}

TEST_CASE("tower function size validation") {
    SAdicSystem sys = fib_system();
    TowerFunction bad;
    bad.level = 2;
    bad.values = {{1.0}, {0.0}}; // wrong floor counts
    CHECK_THROWS_AS(weakly_lipschitz_norm(bad, sys, 1), std::invalid_argument);
}
