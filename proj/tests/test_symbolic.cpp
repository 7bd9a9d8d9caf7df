#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "sadic/int_matrix.hpp"
#include "sadic/substitution.hpp"
#include "sadic/words.hpp"
#include "support/oracles.hpp"

using namespace sadic;

TEST_CASE("substitution matrix counts symbols") {
    Substitution fib = Substitution::parse("12,1");
    IntMatrix expect = IntMatrix::from_rows({{1, 1}, {1, 0}});
    CHECK(fib.matrix() == expect);

    Substitution s = Substitution::parse("121,12");
    CHECK(s.matrix() == IntMatrix::from_rows({{2, 1}, {1, 1}}));
}

TEST_CASE("class membership is enforced at construction") {
    CHECK_THROWS_AS(Substitution::parse("1,2"), std::invalid_argument);      // no long image
    CHECK_THROWS_AS(Substitution::parse("11,11"), std::invalid_argument);    // letter 2 missing
    CHECK_NOTHROW(Substitution::unchecked(Alphabet(2), {{Letter(1)}, {Letter(0)}})); // permutation, opt-out
}

TEST_CASE("composition expands words and multiplies matrices") {
    Substitution fib = Substitution::parse("12,1");
    Substitution sq = compose(fib, fib);
    CHECK(format_word(sq.image(0)) == "121");
    CHECK(format_word(sq.image(1)) == "12");
    CHECK(sq.matrix() == IntMatrix::from_rows({{2, 1}, {1, 1}}));

    // letter-permuted images when composing with a permutation substitution
    Substitution swap = Substitution::unchecked(Alphabet(2), {{Letter(1)}, {Letter(0)}});
    Substitution perm = compose(fib, swap);
    CHECK(format_word(perm.image(0)) == "1");
    CHECK(format_word(perm.image(1)) == "12");
}

TEST_CASE("matrix of composition equals matrix product on random pairs") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 100; ++trial) {
        int m = 2 + static_cast<int>(rng() % 4);
        Substitution a = testing::random_substitution(rng, m);
        Substitution b = testing::random_substitution(rng, m);
        Substitution c = compose(a, b);
        CHECK(testing::brute_force_matrix(c) == a.matrix() * b.matrix());
        CHECK(c.matrix() == a.matrix() * b.matrix());
    }
}

TEST_CASE("population vectors") {
    Alphabet ab(2);
    CHECK(population_vector(parse_word("121", ab), ab) == PopulationVector{2, 1});
    CHECK(population_vector(Word{}, ab) == PopulationVector{0, 0});

    // l(zeta(v)) == S_zeta * l(v)
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        int m = 2 + static_cast<int>(rng() % 3);
        Substitution s = testing::random_substitution(rng, m);
        Word v = testing::random_word(rng, m, 0, 12);
        PopulationVector lv = population_vector(v, s.alphabet());
        CHECK(population_vector(s.apply(v), s.alphabet()) == s.matrix().apply(lv));
    }
}

TEST_CASE("tiling length") {
    Alphabet ab(2);
    CHECK(tiling_length(parse_word("12", ab), {1.0, 1.0}) == doctest::Approx(2.0).epsilon(1e-15));

    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    // |121|_{(phi,1)} = 2 phi + 1 = phi^3
    CHECK(tiling_length(parse_word("121", ab), {phi, 1.0}) == doctest::Approx(phi * phi * phi).epsilon(1e-14));

    CHECK_THROWS_AS(tiling_length(parse_word("1", ab), {1.0, -1.0}), std::invalid_argument);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        Word u = testing::random_word(rng, 2, 0, 8);
        Word v = testing::random_word(rng, 2, 0, 8);
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        std::vector<double> roof = {0.25 + (rng() % 100) / 50.0, 0.25 + (rng() % 100) / 50.0};
        CHECK(tiling_length(uv, roof) ==
              doctest::Approx(tiling_length(u, roof) + tiling_length(v, roof)).epsilon(1e-13));
        double alpha = 0.5 + (rng() % 100) / 25.0;
        std::vector<double> scaled = {alpha * roof[0], alpha * roof[1]};
        CHECK(tiling_length(uv, scaled) == doctest::Approx(alpha * tiling_length(uv, roof)).epsilon(1e-13));
    }
}

TEST_CASE("good return words by per-image criterion") {
    Substitution fib = Substitution::parse("12,1");
    Substitution cube = compose(compose(fib, fib), fib); // 1->12112, 2->121
    CHECK(format_word(cube.image(0)) == "12112");
    CHECK(format_word(cube.image(1)) == "121");

    auto grws = good_return_words(cube, 3);
    Alphabet ab(2);
    CHECK(grws.count(parse_word("12", ab)) == 1);

    // every returned v: vc occurs in every image
    for (const Word& v : grws) {
        Word vc = v;
        vc.push_back(v.front());
        for (int a = 0; a < 2; ++a) {
            const Word& img = cube.image(static_cast<Letter>(a));
            CHECK(std::search(img.begin(), img.end(), vc.begin(), vc.end()) != img.end());
        }
    }

    // Fibonacci itself has an image of length 1: no room for any vc
    CHECK(good_return_words(fib, 5).empty());
}

TEST_CASE("lattice generation via elementary divisors") {
    CHECK(generates_lattice({{1, 0}, {0, 1}}));
    CHECK_FALSE(generates_lattice({{2, 0}, {0, 2}}));
    CHECK_FALSE(generates_lattice({{1, 0}})); // too few vectors

    // columns of random unimodular matrices generate; oracle = |det| == 1
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 40; ++trial) {
        int m = 2 + static_cast<int>(rng() % 3);
        // random product of elementary matrices
        IntMatrix u = IntMatrix::identity(m);
        for (int k = 0; k < 6; ++k) {
            int i = static_cast<int>(rng() % m), j = static_cast<int>(rng() % m);
            if (i == j) continue;
            IntMatrix e = IntMatrix::identity(m);
            e.at(i, j) = static_cast<long>(rng() % 3) - 1;
            u = u * e;
        }
        mpz_class d = u.determinant();
        REQUIRE((d == 1 || d == -1));
        std::vector<PopulationVector> cols;
        for (int j = 0; j < m; ++j) cols.push_back(u.column(j));
        CHECK(generates_lattice(cols));

        // invariance under integer row operations: adding one vector to another
        if (cols.size() >= 2) {
            auto modified = cols;
            for (std::size_t i = 0; i < modified[0].size(); ++i) modified[0][i] += modified[1][i];
            CHECK(generates_lattice(modified));
        }
    }
}

TEST_CASE("integer solve") {
    // columns of [[2,1],[1,1]] : e1 = 1*c1 - 1*c2, e2 = -1*c1 + 2*c2
    std::vector<PopulationVector> cols = {{2, 1}, {1, 1}};
    auto x1 = solve_integer(cols, {1, 0});
    REQUIRE(x1.has_value());
    CHECK((*x1)[0] * 2 + (*x1)[1] * 1 == 1);
    CHECK((*x1)[0] * 1 + (*x1)[1] * 1 == 0);

    auto none = solve_integer({{2, 0}, {0, 2}}, {1, 0});
    CHECK_FALSE(none.has_value());
}

TEST_CASE("simple words") {
    CHECK(is_simple_word(std::string("ba")));
    CHECK_FALSE(is_simple_word(std::string("aba")));
    CHECK(is_simple_word(std::string("bbaa")));
    CHECK(is_simple_word(std::string("a")));
    CHECK_FALSE(is_simple_word(std::string("aa")));

    // simple => occurrences cannot overlap (brute-force scan)
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Word q = testing::random_word(rng, 2, 2, 6);
        Word text = testing::random_word(rng, 2, 0, 30);
        // splice q in twice at random positions
        std::size_t p1 = rng() % (text.size() + 1);
        text.insert(text.begin() + p1, q.begin(), q.end());
        std::size_t p2 = rng() % (text.size() + 1);
        text.insert(text.begin() + p2, q.begin(), q.end());
        if (!is_simple_word(q)) continue;
        std::vector<std::size_t> hits;
        for (std::size_t i = 0; i + q.size() <= text.size(); ++i)
            if (std::equal(q.begin(), q.end(), text.begin() + i)) hits.push_back(i);
        for (std::size_t k = 1; k < hits.size(); ++k) CHECK(hits[k] - hits[k - 1] >= q.size());
    }
}

TEST_CASE("exact determinants and unimodular inverse") {
    IntMatrix a = IntMatrix::from_rows({{1, 1}, {1, 0}});
    CHECK(a.determinant() == -1);
    IntMatrix inv = a.inverse_unimodular();
    CHECK(a * inv == IntMatrix::identity(2));

    IntMatrix big = a.pow(80); // way beyond 64-bit
    CHECK(big.determinant() == 1);
    CHECK(big * big.inverse_unimodular() == IntMatrix::identity(2));

    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        int m = 2 + static_cast<int>(rng() % 4);
        IntMatrix r(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) r.at(i, j) = static_cast<long>(rng() % 7) - 3;
        // Laplace-expansion oracle for the determinant
        std::function<mpz_class(const IntMatrix&)> laplace = [&](const IntMatrix& mat) -> mpz_class {
            int n = mat.rows();
            if (n == 1) return mat.at(0, 0);
            mpz_class acc = 0;
            for (int j = 0; j < n; ++j) {
                IntMatrix minor(n - 1, n - 1);
                for (int r2 = 1; r2 < n; ++r2)
                    for (int c2 = 0, cc = 0; c2 < n; ++c2) {
                        if (c2 == j) continue;
                        minor.at(r2 - 1, cc++) = mat.at(r2, c2);
                    }
                mpz_class term = mat.at(0, j) * laplace(minor);
                acc += (j % 2 == 0) ? term : mpz_class(-term);
            }
            return acc;
        };
        CHECK(r.determinant() == laplace(r));
    }
}
