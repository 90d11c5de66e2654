#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieforge/constructors.hpp"
#include "lieforge/lie_algebra.hpp"
#include "lieforge/serialize.hpp"

#include <random>

using namespace lieforge;

namespace {

LieAlgebra abelian(std::size_t n) {
    std::vector<BasisLabel> labels;
    for (std::size_t i = 0; i < n; ++i) labels.push_back(make_label("a", std::nullopt, static_cast<int>(i) + 1));
    return LieAlgebra(StructureTable(n), labels);
}

// H_3 with x, y in layer 1 and c in layer 2.
LieAlgebra heisenberg3() {
    StructureTable t(3);
    t.set(0, 1, SparseVector::unit(2));
    return LieAlgebra(t, {make_label("x", 1, 1), make_label("y", 1, 1), make_label("c", 2, 1)});
}

SparseVector random_vector(std::mt19937_64& rng, std::size_t n) {
    std::vector<Rational> v(n);
    for (auto& x : v) x = Rational(static_cast<long>(rng() % 7) - 3, 1 + static_cast<long>(rng() % 3));
    for (auto& x : v) x.canonicalize();
    return SparseVector::from_dense(v);
}

}  // namespace

TEST_CASE("labels round-trip through text") {
    auto l = make_label("x", 4, 2, 3);
    CHECK(l.to_string() == "x:4:2:3");
    CHECK(BasisLabel::parse("x:4:2:3") == l);
    CHECK(BasisLabel::parse("sl2-e::1:") == make_label("sl2-e", std::nullopt, 1));
    CHECK_THROWS_AS(BasisLabel::parse("x:1"), InvalidInput);
    CHECK_THROWS_AS(BasisLabel::parse("x:a:1:"), InvalidInput);
}

TEST_CASE("table antisymmetry") {
    StructureTable t(3);
    t.set(2, 0, SparseVector::unit(1));
    CHECK(t.bracket(0, 2) == scaled(SparseVector::unit(1), -1));
    CHECK(t.bracket(2, 0) == SparseVector::unit(1));
    CHECK(t.bracket(1, 1).empty());
    CHECK_THROWS(t.set(1, 1, SparseVector::unit(0)));
}

TEST_CASE("bracket and jacobiator") {
    auto sl2 = sl2_algebra();
    auto e = SparseVector::unit(0), h = SparseVector::unit(1), f = SparseVector::unit(2);
    CHECK(bracket(sl2, h, e) == scaled(e, 2));
    CHECK(bracket(sl2, e, f) == h);
    CHECK(bracket(sl2, e, e).empty());
    CHECK(jacobiator(sl2, e, h, f).empty());
    CHECK(jacobiator(sl2, e, e, f).empty());

    // [x1,x2] = x3, [x1,x3] = x1: J(x1,x2,x3) = [x1,[x2,x3]] + [x2,[x3,x1]] + [x3,[x1,x2]]
    // = 0 + [x2,-x1] + [x3,x3] = x3.
    StructureTable t(3);
    t.set(0, 1, SparseVector::unit(2));
    t.set(0, 2, SparseVector::unit(0));
    LieAlgebra bad(t, {make_label("a", std::nullopt, 1), make_label("a", std::nullopt, 2), make_label("a", std::nullopt, 3)});
    CHECK(jacobiator(bad, SparseVector::unit(0), SparseVector::unit(1), SparseVector::unit(2)) == SparseVector::unit(2));
    auto rep = verify_jacobi(bad);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.failures.size() == 1);
    CHECK(rep.failures[0].residual == SparseVector::unit(2));
    CHECK_THROWS_AS(require_jacobi(bad, "test"), JacobiFailure);
}

TEST_CASE("jacobiator alternates on random vectors") {
    auto a = build_sl2_gn({5, 1, 1});
    std::mt19937_64 rng(3);
    for (int t = 0; t < 5; ++t) {
        auto x = random_vector(rng, a.dim()), y = random_vector(rng, a.dim()), z = random_vector(rng, a.dim());
        CHECK(jacobiator(a, x, y, z).empty());
        CHECK(bracket(a, x, y) == scaled(bracket(a, y, x), -1));
    }
}

TEST_CASE("center, series and predicates") {
    auto sl2 = sl2_algebra();
    CHECK(center(sl2).dim() == 0);
    auto p = predicates(sl2);
    CHECK(p.is_perfect);
    CHECK_FALSE(p.is_nilpotent);

    auto ab = abelian(4);
    auto s = derived_and_central_series(ab);
    CHECK(s.derived.size() == 2);
    CHECK(s.derived.back().dim() == 0);
    auto pa = predicates(ab);
    CHECK_FALSE(pa.is_perfect);
    CHECK(pa.is_nilpotent);
    CHECK_FALSE(pa.is_centerless);

    auto gn = build_gn({5, 1, 1});
    auto lc = derived_and_central_series(gn).lower_central;
    CHECK(lc.back().dim() == 0);
    CHECK(lc.size() <= 7);  // reaches 0 within n+1 = 6 steps
}

TEST_CASE("direct sum and semidirect product") {
    auto h = heisenberg3();
    auto zero = LieAlgebra(StructureTable(0), {});
    CHECK(direct_sum(h, zero) == h);
    auto hh = direct_sum(h, h);
    CHECK(hh.dim() == 6);
    CHECK(verify_jacobi(hh).ok);
    CHECK(hh.labels()[3].copy == 2);

    // Zero action reproduces the direct sum entry for entry.
    std::vector<SparseRationalMatrix> zero_action(3, SparseRationalMatrix(3, 3));
    auto sd = semidirect_product(h, h, zero_action);
    CHECK(sd.table() == hh.table());

    // A non-derivation is rejected.
    std::vector<SparseRationalMatrix> bad(3, SparseRationalMatrix(3, 3));
    bad[0].set(0, 0, 1);
    CHECK_THROWS_AS(semidirect_product(h, h, bad), ActionNotDerivation);
}

TEST_CASE("levi split must be a subalgebra plus an ideal") {
    auto a = build_sl2_gn({5, 1, 1});
    REQUIRE(a.levi());
    CHECK(a.levi()->semisimple.size() + a.levi()->nilradical.size() == a.dim());
    REQUIRE(a.sl2_triple());
    for (std::size_t i : a.levi()->nilradical)
        for (std::size_t s : a.levi()->semisimple)
            for (const auto& [k, x] : a.table().bracket(s, i).entries)
                CHECK(std::find(a.levi()->nilradical.begin(), a.levi()->nilradical.end(), k) !=
                      a.levi()->nilradical.end());
}

TEST_CASE("quasi-cyclic check") {
    CHECK(quasi_cyclic_check(heisenberg3()).ok);
    CHECK(quasi_cyclic_check(build_model_nilradical(5)).ok);
    CHECK(quasi_cyclic_check(build_three_gen_nilradical(5)).ok);
    // The a,b products lower the level, so GN is not graded by its labels.
    CHECK_FALSE(quasi_cyclic_check(build_gn({5, 1, 1})).ok);

    // x,y in layer 1 but c placed in layer 3: layer 2 is empty, no grading is attached.
    StructureTable t(3);
    t.set(0, 1, SparseVector::unit(2));
    LieAlgebra skip(t, {make_label("x", 1, 1), make_label("y", 1, 1), make_label("c", 3, 1)});
    CHECK_FALSE(skip.grading());
    CHECK_FALSE(quasi_cyclic_check(skip).ok);
}

TEST_CASE("serialization is canonical") {
    auto h = heisenberg3();
    auto text = write_algebra(h);
    CHECK(text == "{\"dim\":3,\"labels\":[\"x:1:1:\",\"y:1:1:\",\"c:2:1:\"],\"brackets\":[[0,1,[[2,\"1/1\"]]]]}\n");
    CHECK(read_algebra(text) == h);
    for (const auto& a : {build_sl2_gn({5, Rational(1, 60), Rational(1, 60)}), build_sl2_heisenberg(2)}) {
        auto s = write_algebra(a);
        CHECK(write_algebra(read_algebra(s)) == s);
    }
    CHECK_THROWS_AS(read_algebra("{\"dim\":1}"), InvalidInput);
    CHECK_THROWS_AS(read_algebra("{\"dim\":2,\"labels\":[\"a::1:\",\"a::2:\"],\"brackets\":[[1,0,[]]]}\n"), InvalidInput);
    CHECK_THROWS_AS(
        read_algebra("{\"dim\":2,\"labels\":[\"a::1:\",\"a::2:\"],\"brackets\":[[0,1,[[1,\"2/4\"]]]]}\n"), InvalidInput);
    CHECK_THROWS_AS(read_algebra("not json"), InvalidInput);
}
