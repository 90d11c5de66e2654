#pragma once

#include "lieforge/lie_algebra.hpp"
#include "lieforge/sl2_rep.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lieforge {

struct GNParams {
    int n = 5;
    Rational a = 1, b = 1;
};

// 3-dim sl2 with labels sl2-e, sl2-h, sl2-f.
LieAlgebra sl2_algebra();

// Model quasi-cyclic nilradical on two generator pairs x, y with central c.
// Layers: U^1 = {x_1,x_2,y_1,y_2}, U^2 = {c, z_1..z_3}, U^k = {x^k, y^k} for k >= 3.
LieAlgebra build_model_nilradical(int n);
// Same product list without the odd-n check or the Jacobi gate. Only for
// demonstrating the failure at even n.
LieAlgebra model_nilradical_table(int n);

// Three generator pairs x, y, m; U^2 = {c, z_1..z_3, d_1..d_3}.
LieAlgebra build_three_gen_nilradical(int n);

// Model nilradical plus the a/b-dependent products into y^{n-1}.
LieAlgebra build_gn(const GNParams& p);
LieAlgebra build_sl2_gn(const GNParams& p);

// sl2 ⋉ N where sl2 acts on every labeled block by the ladder rule: a block
// (ns, level k) spans V_k, except the namespace "c" which is trivial.
ModuleAction ladder_action(const LieAlgebra& nilradical);
LieAlgebra sl2_extension(const LieAlgebra& nilradical);

LieAlgebra build_direct_sum_nilradical(const std::vector<GNParams>& params);
LieAlgebra build_direct_sum_family(const std::vector<GNParams>& params);

// Left: N_t ⋉ (rest), N_t acts on the rest. Right: N_t ⋊ (rest), the rest acts on N_t.
enum class TowerSide { Left, Right };

struct TowerSpec {
    std::vector<GNParams> components;
    std::vector<TowerSide> sides;  // sides[t] joins component t with everything to its right
};

// Extends a map on generators to a homomorphism by closing under brackets.
// Each generated element is assigned the commutator of its parents' images;
// throws VerificationFailure if the generators do not span.
std::vector<SparseRationalMatrix> extend_to_homomorphism(const LieAlgebra& source,
                                                         const std::vector<std::size_t>& generators,
                                                         const std::vector<SparseRationalMatrix>& images);

LieAlgebra build_tower_nilradical(const TowerSpec& spec);
LieAlgebra build_tower(const TowerSpec& spec);

// sl_m ⋉ N with N built from symmetric powers: V_1 and W_1 = Sym^1, U^2 = Sym^2,
// V_k and W_k = Sym^k for 3 <= k <= n. Products are multiplication of monomials.
LieAlgebra build_slm_quasicyclic(int m, int n);
LieAlgebra slm_algebra(int m);

// sl2 ⋉ H_{2n+1}; the pairing of the two extreme basis vectors of V_{2n-1} is 1.
LieAlgebra build_sl2_heisenberg(int n);

// [L_i, L_j] gets coefficient * P_r into L_k (module indices 1-based).
struct BracketComponentSpec {
    int i = 0, j = 0, k = 0;
    int r = 0;
    Rational coefficient = 1;
};

// Fills in r = (lambda_i + lambda_j - lambda_k)/2; throws InvalidParameters if that
// is not a non-negative integer, breaks Clebsch-Gordan, or is even with i == j.
BracketComponentSpec component(const std::vector<int>& weights, int i, int j, int k, Rational coefficient = 1);
void validate_component(const std::vector<int>& weights, const BracketComponentSpec& c);

// sl2 ⋉ (L_1 + ... + L_s), L_i = degree-lambda_i polynomials with the Poisson action.
LieAlgebra build_transvectant_algebra(const std::vector<int>& weights,
                                      const std::vector<BracketComponentSpec>& components);

struct CoefficientSolution {
    bool feasible = false;
    std::vector<Rational> coefficients;
    std::string method;  // "all-ones", "grid", or "infeasible"
    std::size_t assignments_tried = 0;
};

// Jacobi of the parametric bracket is a quadratic form in the coefficients.
// Tries all ones, then a grid over {±1, ±1/2, ±2, ±1/3, ±3} on the coefficients
// that appear quadratically, solving linearly for the rest.
CoefficientSolution solve_bracket_coefficients(const std::vector<int>& weights,
                                               const std::vector<BracketComponentSpec>& components);

struct ConditionReport {
    bool ok = false;
    std::vector<std::string> lines;  // one per checked fact, prefixed "ok" or "FAIL"
};

ConditionReport check_angelopoulos_conditions(const std::vector<int>& weights);

struct PresetParams {
    std::optional<int> m;
    std::optional<int> n;
    std::vector<int> r;
};

struct TransvectantSpec {
    std::vector<int> weights;
    std::vector<BracketComponentSpec> components;
};

std::vector<std::string> preset_names();
TransvectantSpec preset_spec(const std::string& name, const PresetParams& params = {});
LieAlgebra preset(const std::string& name, const PresetParams& params = {});

}  // namespace lieforge
