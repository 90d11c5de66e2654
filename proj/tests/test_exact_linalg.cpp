#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieforge/errors.hpp"
#include "lieforge/linalg.hpp"

#include <random>

using namespace lieforge;

namespace {

SparseRationalMatrix dense(std::vector<std::vector<int>> rows) {
    std::vector<std::vector<Rational>> q;
    for (auto& r : rows) {
        q.emplace_back();
        for (int x : r) q.back().emplace_back(x);
    }
    return SparseRationalMatrix::from_dense(q);
}

// Textbook dense Gauss-Jordan over mpq; independent of the sparse engine.
std::size_t oracle_rank(const SparseRationalMatrix& m) {
    std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& [c, x] : m.row(r).entries) a[r][c] = x;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < m.cols() && rank < a.size(); ++c) {
        std::size_t piv = rank;
        while (piv < a.size() && a[piv][c] == 0) ++piv;
        if (piv == a.size()) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == rank || a[r][c] == 0) continue;
            Rational f = a[r][c] / a[rank][c];
            for (std::size_t k = c; k < m.cols(); ++k) a[r][k] -= f * a[rank][k];
        }
        ++rank;
    }
    return rank;
}

SparseRationalMatrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double density,
                                   bool fractions) {
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> val(-5, 5), den(1, 7);
    SparseRationalMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            if (u(rng) < density) {
                Rational x(val(rng), fractions ? den(rng) : 1);
                x.canonicalize();
                m.set(r, c, x);
            }
    return m;
}

// Low-rank product of two random factors.
SparseRationalMatrix random_low_rank(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::size_t k) {
    return random_matrix(rng, rows, k, 0.7, true) * random_matrix(rng, k, cols, 0.7, true);
}

void check_nullspace(const SparseRationalMatrix& m, const NullspaceBasis& ns) {
    CHECK(ns.dimension == ns.vectors.size());
    CHECK(rank(m) + ns.dimension == m.cols());
    for (const auto& v : ns.vectors) CHECK(m.apply(v).empty());
    EchelonSpan span(m.cols());
    for (const auto& v : ns.vectors) CHECK(span.insert(v));
}

}  // namespace

TEST_CASE("rational text form") {
    CHECK(format_rational(parse_rational("6/4")) == "3/2");
    CHECK(format_rational(parse_rational("-3")) == "-3/1");
    CHECK(format_rational(parse_rational("0/5")) == "0/1");
    CHECK(parse_rational("+1/60") == Rational(1, 60));
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
}

TEST_CASE("rank on small hand cases") {
    CHECK(rank(SparseRationalMatrix::identity(2)) == 2);
    CHECK(rank(SparseRationalMatrix(3, 5)) == 0);
    CHECK(rank(dense({{1, 2}, {2, 4}, {3, 6}})) == 1);
    CHECK(rank(dense({{0, 0, 3}, {0, 2, 0}, {1, 0, 0}})) == 3);
}

TEST_CASE("nullspace on small hand cases") {
    CHECK(nullspace(SparseRationalMatrix::identity(3)).dimension == 0);

    auto z = nullspace(SparseRationalMatrix(2, 4));
    REQUIRE(z.dimension == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(z.vectors[i] == SparseVector::unit(i));

    // x0 + x1 = 0: free columns 1 and 2 give (-1,1,0) and (0,0,1).
    auto ns = nullspace(dense({{1, 1, 0}}));
    REQUIRE(ns.dimension == 2);
    CHECK(ns.vectors[0].to_dense(3) == std::vector<Rational>{-1, 1, 0});
    CHECK(ns.vectors[1].to_dense(3) == std::vector<Rational>{0, 0, 1});
}

TEST_CASE("nullspace is canonical regardless of row order") {
    std::mt19937_64 rng(7);
    auto m = random_low_rank(rng, 9, 12, 4);
    std::vector<SparseVector> rev;
    for (std::size_t r = m.rows(); r-- > 0;) rev.push_back(scaled(m.row(r), Rational(r + 2, 3)));
    auto m2 = SparseRationalMatrix::from_rows(m.cols(), rev);
    CHECK(nullspace(m).vectors == nullspace(m2).vectors);
    CHECK(row_echelon_basis(m) == row_echelon_basis(m2));
}

TEST_CASE("solve") {
    auto x = solve(SparseRationalMatrix::identity(3), {1, Rational(2, 3), -4});
    REQUIRE(x);
    CHECK(*x == std::vector<Rational>{1, Rational(2, 3), -4});

    auto m = dense({{1, 1}});
    auto y = solve(m, {2});
    REQUIRE(y);
    CHECK(m.apply(*y) == std::vector<Rational>{2});
    CHECK(*y == std::vector<Rational>{2, 0});

    CHECK_FALSE(solve(dense({{1}, {1}}), {0, 1}));
    CHECK_THROWS_AS(solve(dense({{1}, {1}}), {0}), DimensionMismatch);
}

TEST_CASE("random matrices agree with the dense oracle") {
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 60; ++t) {
        std::size_t rows = 1 + rng() % 14, cols = 1 + rng() % 14;
        auto m = (t % 2) ? random_matrix(rng, rows, cols, 0.3, t % 3 == 0)
                         : random_low_rank(rng, rows, cols, 1 + rng() % 5);
        CHECK(rank(m) == oracle_rank(m));
        check_nullspace(m, nullspace(m));
        CHECK(nullspace_certified(m).basis.vectors == nullspace(m).vectors);

        std::vector<Rational> b(rows);
        for (auto& x : b) x = Rational(static_cast<long>(rng() % 7) - 3);
        auto sol = solve(m, b);
        // Consistency oracle: rank of [M | b] equals rank of M.
        std::vector<SparseVector> aug;
        for (std::size_t r = 0; r < rows; ++r) {
            SparseVector v = m.row(r);
            if (b[r] != 0) v.entries.emplace_back(cols, b[r]);
            aug.push_back(v);
        }
        bool consistent = oracle_rank(SparseRationalMatrix::from_rows(cols + 1, aug)) == oracle_rank(m);
        CHECK(static_cast<bool>(sol) == consistent);
        if (sol) CHECK(m.apply(*sol) == b);
    }
}

TEST_CASE("modular rank never exceeds the exact rank and matches on a random corpus") {
    std::mt19937_64 rng(99);
    CHECK(rank_modular(SparseRationalMatrix::identity(4), 1).rank == 4);
    CHECK(rank_modular(SparseRationalMatrix::identity(4), 1).method == "modular");
    int agree = 0;
    for (int t = 0; t < 120; ++t) {
        std::size_t rows = 1 + rng() % 20, cols = 1 + rng() % 20;
        auto m = (t % 2) ? random_matrix(rng, rows, cols, 0.25, true) : random_low_rank(rng, rows, cols, 1 + rng() % 6);
        auto exact = rank(m);
        auto mod = rank_modular(m, 2);
        CHECK(mod.rank <= exact);
        CHECK(mod.primes.size() == 2);
        agree += mod.rank == exact;
    }
    CHECK(agree == 120);

    auto big = random_matrix(rng, 50, 50, 1.0, true);
    CHECK(rank_modular(big, 2).rank == rank(big));
    CHECK_THROWS_AS(rank_modular(big, 0), InvalidParameters);
}

TEST_CASE("block splitting keeps independent pieces independent") {
    // Two 2x2 blocks on columns {0,3} and {1,2}, plus an untouched column 4.
    SparseRationalMatrix m(4, 5);
    m.set(0, 0, 1);
    m.set(0, 3, 2);
    m.set(1, 0, 2);
    m.set(1, 3, 4);
    m.set(2, 1, 1);
    m.set(3, 2, 5);
    CHECK(rank(m) == 3);
    auto ns = nullspace(m);
    REQUIRE(ns.dimension == 2);
    CHECK(ns.vectors[0].to_dense(5) == std::vector<Rational>{-2, 0, 0, 1, 0});
    CHECK(ns.vectors[1] == SparseVector::unit(4));
}

TEST_CASE("echelon span") {
    EchelonSpan s(3);
    CHECK(s.insert(SparseVector::from_dense({1, 1, 0})));
    CHECK(s.insert(SparseVector::from_dense({0, 1, 1})));
    CHECK_FALSE(s.insert(SparseVector::from_dense({1, 2, 1})));
    CHECK(s.contains(SparseVector::from_dense({2, 0, -2})));
    CHECK(s.dimension() == 2);
    auto basis = s.canonical_basis();
    CHECK(basis[0].to_dense(3) == std::vector<Rational>{1, 0, -1});
    CHECK(basis[1].to_dense(3) == std::vector<Rational>{0, 1, 1});
}
