#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lieforge/constructors.hpp"
#include "lieforge/sl2_rep.hpp"

#include <algorithm>
#include <random>

using namespace lieforge;

namespace {

// Peels V_w off the top of a weight multiset until it is empty.
std::map<int, std::size_t> peel(std::vector<int> weights) {
    std::map<int, std::size_t> out;
    std::multiset<int> left(weights.begin(), weights.end());
    while (!left.empty()) {
        int top = *left.rbegin();
        REQUIRE(top >= 0);
        for (int w = top; w >= -top; w -= 2) {
            auto it = left.find(w);
            REQUIRE(it != left.end());
            left.erase(it);
        }
        ++out[top];
    }
    return out;
}

std::vector<int> weights_of(int l) {
    std::vector<int> w;
    for (int x = l; x >= -l; x -= 2) w.push_back(x);
    return w;
}

// Weights of wedge^k by enumerating index subsets.
std::vector<int> wedge_weights(int k, const std::vector<int>& w) {
    std::vector<int> out;
    const int n = static_cast<int>(w.size());
    std::vector<int> idx(k);
    auto rec = [&](auto&& self, int pos, int start, int sum) -> void {
        if (pos == k) {
            out.push_back(sum);
            return;
        }
        for (int i = start; i < n; ++i) self(self, pos + 1, i + 1, sum + w[i]);
    };
    rec(rec, 0, 0, 0);
    return out;
}

PolyElement random_poly(std::mt19937_64& rng, int degree) {
    std::vector<Rational> c(degree + 1);
    for (auto& x : c) x = Rational(static_cast<long>(rng() % 9) - 4);
    return PolyElement(c);
}

}  // namespace

TEST_CASE("standard irreducible modules") {
    auto v0 = standard_irreducible(0);
    CHECK(is_zero(v0.get("e")));
    CHECK(is_zero(v0.get("h")));
    auto v2 = standard_irreducible(2);
    CHECK(v2.get("h").at(0, 0) == 2);
    CHECK(v2.get("h").at(1, 1) == 0);
    CHECK(v2.get("h").at(2, 2) == -2);
    auto v1 = standard_irreducible(1);
    CHECK(commutator(v1.get("e"), v1.get("f")) == v1.get("h"));
    for (int l = 0; l <= 8; ++l) CHECK(verify_sl2_relations(standard_irreducible(l)));
}

TEST_CASE("poisson bracket and transvectants") {
    auto s = sl2_polynomials();
    CHECK(poisson_bracket(s.h, s.e) == PolyElement::monomial(2, 0));  // p^2
    CHECK(poisson_bracket(s.e, s.f) == s.h);
    auto p2 = PolyElement::monomial(2, 0), q2 = PolyElement::monomial(2, 2);
    CHECK(poisson_bracket(p2, q2) == PolyElement::monomial(2, 1, 4));  // 4pq
    CHECK(poisson_bracket(p2, p2).is_zero());
    CHECK(transvectant(2, p2, q2) == PolyElement::monomial(0, 0, 4));
    CHECK(transvectant(1, s.h, s.e) == p2);
    auto u = PolyElement::monomial(3, 1, 2), v = PolyElement::monomial(2, 2, -1);
    CHECK(transvectant(0, u, v) == product(u, v));

    std::mt19937_64 rng(5);
    for (int r = 0; r <= 6; ++r)
        for (int t = 0; t < 4; ++t) {
            auto a = random_poly(rng, r + static_cast<int>(rng() % 4));
            auto b = random_poly(rng, r + static_cast<int>(rng() % 4));
            auto ab = transvectant(r, a, b), ba = transvectant(r, b, a);
            CHECK(ab == Rational(r % 2 ? -1 : 1) * ba);
        }
}

TEST_CASE("transvectants are sl2-equivariant") {
    auto s = sl2_polynomials();
    std::mt19937_64 rng(11);
    for (int t = 0; t < 3; ++t) {
        int r = t;
        auto u = random_poly(rng, 3 + t), v = random_poly(rng, 2 + t);
        auto g = Rational(static_cast<long>(rng() % 5) - 2) * s.e + Rational(1 + t) * s.h + Rational(-1) * s.f;
        CHECK(equivariance_check(r, u, v, g));
    }
    CHECK(equivariance_check(1, random_poly(rng, 3), random_poly(rng, 3), PolyElement::zero(2)));
    CHECK(equivariance_check(2, PolyElement::zero(3), random_poly(rng, 3), s.e));
    for (int d = 0; d <= 6; ++d) CHECK(verify_sl2_relations(polynomial_module(d)));
}

TEST_CASE("Clebsch-Gordan and wedge powers") {
    CHECK(clebsch_gordan(1, 1).multiplicities == std::map<int, std::size_t>{{0, 1}, {2, 1}});
    CHECK(clebsch_gordan(6, 6).multiplicities ==
          std::map<int, std::size_t>{{0, 1}, {2, 1}, {4, 1}, {6, 1}, {8, 1}, {10, 1}, {12, 1}});
    CHECK(clebsch_gordan(5, 0).multiplicities == std::map<int, std::size_t>{{5, 1}});
    CHECK(wedge_multiplicities(2, {{5, 1}}).multiplicities == std::map<int, std::size_t>{{0, 1}, {4, 1}, {8, 1}});
    CHECK(wedge_multiplicities(2, {{6, 1}}).multiplicities == std::map<int, std::size_t>{{2, 1}, {6, 1}, {10, 1}});
    CHECK(wedge_multiplicities(3, {{6, 1}}).multiplicities.count(14) == 0);
}

TEST_CASE("formulas agree with brute-force weight counting up to weight 14") {
    for (int n = 0; n <= 14; ++n) {
        for (int m = 0; m <= 14; ++m) {
            std::vector<int> w;
            for (int a : weights_of(n))
                for (int b : weights_of(m)) w.push_back(a + b);
            auto cg = clebsch_gordan(n, m);
            CHECK(cg.multiplicities == peel(w));
            CHECK(cg.total_dim() == static_cast<std::size_t>((n + 1) * (m + 1)));
        }
        auto w2 = wedge_weights(2, weights_of(n));
        CHECK(wedge2_closed_form(n).multiplicities == peel(w2));
        CHECK(wedge_multiplicities(2, {{n, 1}}).multiplicities == peel(w2));
        CHECK(wedge_multiplicities(2, {{n, 1}}).total_dim() == static_cast<std::size_t>(n * (n + 1) / 2));
        CHECK(wedge_multiplicities(3, {{n, 1}}).multiplicities == peel(wedge_weights(3, weights_of(n))));
    }
    // A mixed sum with repeated summands.
    std::vector<int> w;
    for (int l : {1, 1, 2, 3})
        for (int x : weights_of(l)) w.push_back(x);
    CHECK(wedge_multiplicities(2, {{1, 2}, {2, 1}, {3, 1}}).multiplicities == peel(wedge_weights(2, w)));
    CHECK(wedge_multiplicities(3, {{1, 2}, {2, 1}, {3, 1}}).multiplicities == peel(wedge_weights(3, w)));
}

TEST_CASE("decomposing algebras") {
    auto a = build_sl2_gn({5, 1, 1});
    auto nil = decompose_module(a, a.levi()->nilradical);
    CHECK(nil.multiplicities == std::map<int, std::size_t>{{0, 1}, {1, 2}, {2, 1}, {3, 2}, {4, 2}, {5, 2}});
    auto act = restricted_action(a, a.levi()->nilradical);
    for (const auto& [l, v] : nil.highest_weight_vectors) {
        CHECK(act.get("e").apply(v).empty());
        CHECK(act.get("h").apply(v) == scaled(v, l));
    }
    CHECK(nil.highest_weight_vectors.size() == 10);

    auto sl2 = sl2_algebra();
    CHECK(decompose_module(sl2, {0, 1, 2}).multiplicities == std::map<int, std::size_t>{{2, 1}});

    auto h5 = build_sl2_heisenberg(2);
    CHECK(decompose_module(h5, h5.levi()->nilradical).multiplicities == std::map<int, std::size_t>{{0, 1}, {3, 1}});

    // A non-semisimple h is reported.
    SparseRationalMatrix z(2, 2), hj(2, 2);
    hj.set(0, 1, 1);
    CHECK_THROWS(decompose_action({2, {{"e", z}, {"h", hj}, {"f", z}}}));
}

TEST_CASE("Schur pairing counts") {
    auto a = build_sl2_gn({5, 1, 1});
    auto nil = decompose_module(a, a.levi()->nilradical);
    auto full = nil;
    full.multiplicities[2] += 1;
    CHECK(equivariant_hom_dimension(nil, full) == 19);
    CHECK(equivariant_hom_dimension(wedge_multiplicities(2, nil.multiplicities), full) == 196);
    CHECK(equivariant_hom_dimension(clebsch_gordan(2, 0), clebsch_gordan(3, 0)) == 0);
}

TEST_CASE("sl_m symmetric powers") {
    auto nat = slm_module_action(3, 1);
    CHECK(verify_slm_relations(nat, 3));
    // Basis e1, e2, e3.
    CHECK(nat.get("H_1").at(0, 0) == 1);
    CHECK(nat.get("H_1").at(1, 1) == -1);
    CHECK(nat.get("H_2").at(1, 1) == 1);
    CHECK(nat.get("H_2").at(2, 2) == -1);
    CHECK(nat.get("E_12").at(0, 1) == 1);
    CHECK(nat.get("E_13").at(0, 2) == 1);
    CHECK(nat.get("E_21").at(1, 0) == 1);
    CHECK(nat.get("E_23").at(1, 2) == 1);
    CHECK(nat.get("E_32").at(2, 1) == 1);
    CHECK(nat.get("E_31").at(2, 0) == 1);

    for (int m = 2; m <= 4; ++m)
        for (int k = 1; k <= 4; ++k) {
            auto act = slm_module_action(m, k);
            CHECK(verify_slm_relations(act, m));
            // C(m+k-1, k)
            std::size_t binom = 1;
            for (int i = 1; i <= k; ++i) binom = binom * (m + k - i) / i;
            CHECK(act.dim == binom);
        }
    for (int l = 1; l <= 6; ++l) {
        auto act = slm_module_action(2, l);
        auto std_act = standard_irreducible(l);
        std::vector<Rational> a, b;
        for (std::size_t i = 0; i < act.dim; ++i) {
            a.push_back(act.get("H_1").at(i, i));
            b.push_back(std_act.get("h").at(i, i));
        }
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        CHECK(a == b);
    }
    CHECK(slm_monomials(3, 2) == std::vector<std::vector<int>>{{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}});
}
