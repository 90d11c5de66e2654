#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieforge/constructors.hpp"

using namespace lieforge;

namespace {

SparseVector at(const LieAlgebra& a, const BasisLabel& l) { return SparseVector::unit(a.index_of(l)); }
SparseVector br(const LieAlgebra& a, const BasisLabel& x, const BasisLabel& y) { return bracket(a, at(a, x), at(a, y)); }
BasisLabel lab(const std::string& ns, int level, int index, std::optional<int> copy = std::nullopt) {
    return make_label(ns, level, index, copy);
}

std::size_t layer_dim(const LieAlgebra& a, std::size_t k) { return (*a.grading())[k - 1].size(); }

std::size_t binom(int n, int k) {
    std::size_t b = 1;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

}  // namespace

TEST_CASE("model nilradical") {
    for (int n : {5, 7, 9}) {
        auto a = build_model_nilradical(n);
        std::size_t expect = 8;
        for (int k = 3; k <= n; ++k) expect += 2 * (k + 1);
        CHECK(a.dim() == expect);
        CHECK(verify_jacobi(a).ok);
        CHECK(quasi_cyclic_check(a).ok);
    }
    CHECK(build_model_nilradical(5).dim() == 38);
    CHECK_THROWS_AS(build_model_nilradical(6), EvenN);
    CHECK_THROWS_AS(build_model_nilradical(3), InvalidParameters);
    for (int n : {6, 8}) CHECK_FALSE(verify_jacobi(model_nilradical_table(n)).ok);
    auto a = build_model_nilradical(5);
    CHECK(br(a, lab("x", 1, 1), lab("x", 1, 2)) == at(a, lab("c", 2, 1)));
    CHECK(br(a, lab("z", 2, 1), lab("x", 3, 2)) == scaled(at(a, lab("y", 5, 2)), -1));
}

TEST_CASE("three-generator nilradical") {
    for (int n : {5, 7}) {
        auto a = build_three_gen_nilradical(n);
        CHECK(verify_jacobi(a).ok);
        CHECK(quasi_cyclic_check(a).ok);
    }
    auto a = build_three_gen_nilradical(5);
    CHECK(layer_dim(a, 1) == 6);
    CHECK(layer_dim(a, 2) == 7);
    CHECK(br(a, lab("z", 2, 1), lab("y", 3, 1)) == scaled(at(a, lab("m", 5, 1)), -1));
    CHECK(br(a, lab("x", 1, 2), lab("y", 4, 3)) == scaled(at(a, lab("m", 5, 4)), -1));
    CHECK_THROWS_AS(build_three_gen_nilradical(8), EvenN);
}

TEST_CASE("GN(a,b)") {
    for (Rational a : {Rational(1), Rational(1, 60), Rational(2)}) {
        auto g = build_gn({5, a, a});
        CHECK(g.dim() == 38);
        CHECK(verify_jacobi(g).ok);
        CHECK(br(g, lab("x", 1, 1), lab("y", 5, 2)) == scaled(at(g, lab("y", 4, 1)), a));
        CHECK(br(g, lab("z", 2, 1), lab("x", 4, 2)) == scaled(at(g, lab("y", 4, 1)), a + a));
    }
    // Unequal parameters break Jacobi on (x_1, y_2, x^4_i).
    CHECK_THROWS_AS(build_gn({5, 2, 3}), JacobiFailure);
    CHECK_THROWS_AS(build_gn({6, 1, 1}), EvenN);
    CHECK(verify_jacobi(build_gn({7, Rational(1, 60), Rational(1, 60)})).ok);
}

TEST_CASE("sl2 ⋉ GN") {
    auto a = build_sl2_gn({5, 1, 1});
    CHECK(a.dim() == 41);
    auto z = center(a);
    REQUIRE(z.dim() == 1);
    CHECK(z.basis[0] == at(a, lab("c", 2, 1)));
    CHECK(predicates(a).is_perfect);
    CHECK(br(a, lab("x", 1, 1), lab("x", 1, 2)) == at(a, lab("c", 2, 1)));
    // The ladder matrices are derivations of the nilradical.
    auto nil = build_gn({5, 1, 1});
    auto act = ladder_action(nil);
    CHECK(verify_sl2_relations(act));
    for (const auto& [name, m] : act.generators) CHECK(is_derivation(nil, m));

    for (int n : {5, 7}) {
        auto d = decompose_module(build_sl2_gn({n, 1, 1}), build_sl2_gn({n, 1, 1}).levi()->nilradical);
        std::map<int, std::size_t> expect{{0, 1}, {1, 2}, {2, 1}};
        for (int k = 3; k <= n; ++k) expect[k] = 2;
        CHECK(d.multiplicities == expect);
    }
}

TEST_CASE("direct sums and towers") {
    auto single = build_direct_sum_family({{5, 1, 1}});
    CHECK(single == build_sl2_gn({5, 1, 1}));

    auto two = build_direct_sum_family({{5, 1, 1}, {5, 1, 1}});
    CHECK(two.dim() == 79);
    CHECK(center(two).dim() == 2);
    CHECK(verify_jacobi(two).ok);

    // Zero cross action gives back the direct sum entry for entry.
    auto g1 = build_direct_sum_nilradical({{5, 1, 1}, {5, 1, 1}});
    auto n1 = build_gn({5, 1, 1});
    std::vector<SparseRationalMatrix> zero(38, SparseRationalMatrix(38, 38));
    CHECK(semidirect_product(n1, n1, zero, BasisOrder::ActedFirst).table() == g1.table());

    auto right = build_tower({{{5, 1, 1}, {5, 1, 1}}, {TowerSide::Right}});
    CHECK(right.dim() == 79);
    CHECK(verify_jacobi(right).ok);
    // x_1 of the first copy against x_2 of the second lands on c of the first.
    CHECK(br(right, lab("x", 1, 1, 1), lab("x", 1, 2, 2)) == at(right, lab("c", 2, 1, 1)));
    CHECK(br(right, lab("y", 1, 1, 1), lab("y", 1, 2, 2)) == at(right, lab("c", 2, 1, 1)));

    auto left = build_tower({{{5, 1, 1}, {5, 1, 1}}, {TowerSide::Left}});
    CHECK(left.dim() == 79);
    CHECK(verify_jacobi(left).ok);
    CHECK(br(left, lab("x", 1, 1, 1), lab("x", 1, 2, 2)) == at(left, lab("c", 2, 1, 2)));

    auto three = build_tower({{{5, 1, 1}, {5, 1, 1}, {5, 1, 1}}, {TowerSide::Right, TowerSide::Right}});
    CHECK(three.dim() == 117);
    CHECK(verify_jacobi(three).ok);

    CHECK_THROWS_AS(build_tower({{{5, 1, 1}}, {}}), InvalidParameters);
    CHECK_THROWS_AS(build_tower({{{5, 1, 1}, {7, 1, 1}}, {TowerSide::Left}}), InvalidParameters);
}

TEST_CASE("homomorphism extension") {
    // Generators x_1, x_2, y_1, y_2 of GN map to their own ad operators: the
    // extension has to be the full adjoint representation.
    auto g = build_gn({5, 1, 1});
    std::vector<std::size_t> gens;
    std::vector<SparseRationalMatrix> images;
    for (const auto& l : {lab("x", 1, 1), lab("x", 1, 2), lab("y", 1, 1), lab("y", 1, 2)}) {
        gens.push_back(g.index_of(l));
        images.push_back(ad_matrix(g, at(g, l)));
    }
    auto ext = extend_to_homomorphism(g, gens, images);
    for (std::size_t i = 0; i < g.dim(); ++i) CHECK(ext[i] == ad_matrix(g, SparseVector::unit(i)));
    CHECK_THROWS_AS(extend_to_homomorphism(g, {gens[0]}, {images[0]}), VerificationFailure);
}

TEST_CASE("sl_m quasi-cyclic algebras") {
    auto a = build_slm_quasicyclic(3, 5);
    CHECK(a.dim() == 112);
    CHECK(a.levi()->nilradical.size() == 104);
    CHECK(verify_jacobi(a).ok);
    CHECK(quasi_cyclic_check(a).ok);
    // Layer dimensions: Sym^k sizes, doubled where both chains exist.
    CHECK(layer_dim(a, 1) == 2 * binom(3, 1));
    CHECK(layer_dim(a, 2) == binom(4, 2));
    for (int k = 3; k <= 5; ++k) CHECK(layer_dim(a, k) == 2 * binom(k + 2, k));
    // Monomials of degree 1 are e1, e2, e3; degree 2 in descending lex: e1^2, e1e2, ...
    CHECK(br(a, lab("x", 1, 1), lab("y", 1, 2)) == at(a, lab("z", 2, 2)));
    // e1^2 * e1^3 = e1^5 with sign (-1)^{2-1}.
    CHECK(br(a, lab("z", 2, 1), lab("x", 3, 1)) == scaled(at(a, lab("y", 5, 1)), -1));

    auto s3 = slm_algebra(3);
    CHECK(s3.dim() == 8);
    CHECK(verify_jacobi(s3).ok);
    CHECK(predicates(s3).is_perfect);
    CHECK(center(s3).dim() == 0);

    auto m2 = build_slm_quasicyclic(2, 5);
    CHECK(m2.dim() == 3 + 37);
    CHECK(verify_jacobi(m2).ok);
}

TEST_CASE("sl2 ⋉ Heisenberg") {
    auto h3 = build_sl2_heisenberg(1);
    CHECK(h3.dim() == 6);
    for (int n : {1, 2, 3}) {
        auto a = build_sl2_heisenberg(n);
        CHECK(verify_jacobi(a).ok);
        CHECK(center(a).dim() == 1);
        CHECK(decompose_module(a, a.levi()->nilradical).multiplicities ==
              std::map<int, std::size_t>{{0, 1}, {2 * n - 1, 1}});
        // The extreme pair brackets to the central vector with coefficient 1.
        CHECK(br(a, make_label("u", std::nullopt, 1), make_label("u", std::nullopt, 2 * n)) ==
              at(a, make_label("c", std::nullopt, 1)));
    }
}

TEST_CASE("transvectant algebras") {
    auto abel = build_transvectant_algebra({4}, {});
    CHECK(abel.dim() == 8);
    auto nil = abel.levi()->nilradical;
    for (std::size_t i : nil)
        for (std::size_t j : nil) CHECK(abel.table().bracket(i, j).empty());

    auto a35 = preset("angelopoulos_35");
    CHECK(a35.dim() == 35);
    PresetParams p;
    p.m = 4;
    p.n = 5;
    p.r = {0, 2};
    CHECK(preset_spec("example_4_2a", p).weights == std::vector<int>{4, 6, 8, 12, 10});
    CHECK(preset("example_4_2a", p).dim() == 48);

    std::vector<int> w{4, 6, 8, 10};
    CHECK(component(w, 1, 1, 2).r == 1);
    CHECK_THROWS_AS(component(w, 1, 1, 4), InvalidParameters);  // even order on a self-bracket
    CHECK_THROWS_AS(component({1, 1, 5}, 1, 2, 3), InvalidParameters);  // outside Clebsch-Gordan
    CHECK_THROWS_AS(component({1, 2, 2}, 1, 2, 3), InvalidParameters);  // parity
}

TEST_CASE("coefficient solver") {
    // V1 x V1 -> V0 (c), V0 x V1' -> V1'', V1 x V1' -> V0', V1 x V0' -> V1''.
    // In two dimensions det(b,c)a + det(c,a)b + det(a,b)c = 0, so the Jacobiator on
    // (x, x', w) is -(k2 k4 + k1 k3) det(x,x') w'' and all ones fails.
    std::vector<int> w{1, 0, 1, 1, 0};
    std::vector<BracketComponentSpec> comps{component(w, 1, 1, 2), component(w, 2, 3, 4), component(w, 1, 3, 5),
                                            component(w, 1, 5, 4)};
    CHECK_THROWS_AS(build_transvectant_algebra(w, comps), JacobiFailure);
    auto sol = solve_bracket_coefficients(w, comps);
    REQUIRE(sol.feasible);
    CHECK(sol.method == "grid");
    const auto& c = sol.coefficients;
    CHECK(c[0] * c[1] + c[2] * c[3] == 0);
    for (std::size_t i = 0; i < comps.size(); ++i) comps[i].coefficient = c[i];
    CHECK(verify_jacobi(build_transvectant_algebra(w, comps)).ok);

    for (const auto& name : {"example_4_4", "angelopoulos_35"}) {
        auto spec = preset_spec(name);
        CHECK(solve_bracket_coefficients(spec.weights, spec.components).method == "all-ones");
    }
}

TEST_CASE("Angelopoulos conditions") {
    PresetParams p;
    p.m = 4;
    p.n = 4;
    p.r = {0};
    CHECK(check_angelopoulos_conditions(preset_spec("example_4_2a", p).weights).ok);
    CHECK(check_angelopoulos_conditions(preset_spec("example_4_2b", p).weights).ok);
    CHECK(preset_spec("example_4_2b", p).weights == std::vector<int>{6, 10, 8, 14});
    auto bad = check_angelopoulos_conditions({2, 2, 2, 2});
    CHECK_FALSE(bad.ok);
    CHECK(bad.lines.front().rfind("FAIL", 0) == 0);
    CHECK_THROWS_AS(check_angelopoulos_conditions({2, 4, 6}), InvalidParameters);
}

TEST_CASE("transvectant presets") {
    struct Row {
        std::string name;
        PresetParams params;
        std::size_t dim;
        bool perfect, centerless;
    };
    PresetParams t45_7;
    t45_7.n = 7;
    t45_7.r = {4};
    std::vector<Row> rows{{"example_4_4", {}, 53, false, true},
                          {"theorem_4_5", {}, 33, false, true},
                          {"theorem_4_5", t45_7, 42, false, true},
                          {"example_4_7", {}, 29, false, true},
                          {"theorem_4_7", {}, 31, true, false},
                          {"angelopoulos_35", {}, 35, true, true}};
    for (const auto& r : rows) {
        CAPTURE(r.name);
        auto a = preset(r.name, r.params);
        CHECK(a.dim() == r.dim);
        CHECK(verify_jacobi(a).ok);
        auto pr = predicates(a);
        CHECK(pr.is_perfect == r.perfect);
        CHECK(pr.is_centerless == r.centerless);
    }
    CHECK(center(preset("theorem_4_7")).dim() == 1);
    CHECK_THROWS_AS(preset("nope"), InvalidParameters);
    PresetParams bad;
    bad.n = 5;
    bad.r = {1, 1};
    CHECK_THROWS_AS(preset("example_4_2a", bad), InvalidParameters);
}
