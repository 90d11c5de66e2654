#pragma once

#include "lieforge/lie_algebra.hpp"

#include <array>
#include <map>
#include <string>
#include <vector>

namespace lieforge {

// Homogeneous polynomial in p, q: coeffs[i] multiplies p^{d-i} q^i.
struct PolyElement {
    std::vector<Rational> coeffs;

    PolyElement() : coeffs(1) {}
    explicit PolyElement(std::vector<Rational> c) : coeffs(std::move(c)) {}
    static PolyElement zero(int degree) { return PolyElement(std::vector<Rational>(degree + 1)); }
    // coefficient * p^{d-i} q^i
    static PolyElement monomial(int degree, int i, const Rational& coefficient = 1);

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_zero() const;

    friend bool operator==(const PolyElement&, const PolyElement&) = default;
};

PolyElement operator+(const PolyElement& a, const PolyElement& b);
PolyElement operator*(const Rational& s, const PolyElement& a);

// d/dp^a d/dq^b
PolyElement partial(const PolyElement& u, int dp, int dq);
PolyElement product(const PolyElement& u, const PolyElement& v);

// dp u * dq v - dq u * dp v
PolyElement poisson_bracket(const PolyElement& u, const PolyElement& v);
// P_r(u,v) = sum_k (-1)^k C(r,k) dp^{r-k} dq^k u * dp^k dq^{r-k} v. Degree deg u + deg v - 2r;
// if that is negative the result is the degree-0 zero polynomial.
PolyElement transvectant(int r, const PolyElement& u, const PolyElement& v);

// Images of e, h, f in degree-2 polynomials: p^2/2, -pq, -q^2/2.
struct Sl2Polynomials {
    PolyElement e, h, f;
};
Sl2Polynomials sl2_polynomials();

// {s, P_r(u,v)} == P_r({s,u}, v) + P_r(u, {s,v})
bool equivariance_check(int r, const PolyElement& u, const PolyElement& v, const PolyElement& s);

// Named square matrices acting on a coordinate space (column j = image of basis vector j).
struct ModuleAction {
    std::size_t dim = 0;
    std::vector<std::pair<std::string, SparseRationalMatrix>> generators;

    const SparseRationalMatrix& get(const std::string& name) const;
    bool has(const std::string& name) const;
};

// V_lambda with [h,v_i]=(lambda+2-2i)v_i, [e,v_i]=(i-1)v_{i-1}, [f,v_i]=(lambda+1-i)v_{i+1}.
ModuleAction standard_irreducible(int lambda);
// Degree-d polynomials with s acting by u -> {s, u}.
ModuleAction polynomial_module(int degree);
// Sym^k of the natural sl_m module; E_ij acts as e_i d/de_j on monomials in
// descending lexicographic order of exponent vectors. Generators are named
// H_i (= E_ii - E_{i+1,i+1}) and E_ij for i != j.
ModuleAction slm_module_action(int m, int k);
// Exponent vectors of the Sym^k basis in the order used above.
std::vector<std::vector<int>> slm_monomials(int m, int k);

bool verify_sl2_relations(const ModuleAction& a);
bool verify_slm_relations(const ModuleAction& a, int m);

struct DecompositionReport {
    std::map<int, std::size_t> multiplicities;                   // highest weight -> multiplicity
    std::vector<std::pair<int, SparseVector>> highest_weight_vectors;  // empty for formula-based reports
    std::size_t total_dim() const;
};

// Multiplicities from a list of h-eigenvalues (with repetition).
DecompositionReport decompose_weights(const std::vector<int>& weights);
// V_n (x) V_m = V_{n+m} + V_{n+m-2} + ... + V_{|n-m|}.
DecompositionReport clebsch_gordan(int n, int m);
// wedge^2 V_n = sum over k >= 1 of V_{2n+2-4k}.
DecompositionReport wedge2_closed_form(int n);
// wedge^k of the module sum_lambda m_lambda V_lambda, by counting weights of k-subsets.
DecompositionReport wedge_multiplicities(int k, const std::map<int, std::size_t>& module);
// Weights of the module sum_lambda m_lambda V_lambda.
std::vector<int> module_weights(const std::map<int, std::size_t>& module);

// Decomposition of a module given by matrices; highest-weight vectors included.
DecompositionReport decompose_action(const ModuleAction& a);
// Action of the sl2 triple of `a` on the span of `target` basis vectors.
ModuleAction restricted_action(const LieAlgebra& a, const std::vector<std::size_t>& target);
DecompositionReport decompose_module(const LieAlgebra& a, const std::vector<std::size_t>& target);

std::size_t equivariant_hom_dimension(const DecompositionReport& a, const DecompositionReport& b);

}  // namespace lieforge
