#pragma once

#include "lieforge/lie_algebra.hpp"
#include "lieforge/sl2_rep.hpp"

#include <map>
#include <memory>
#include <json.hpp>
#include <string>
#include <vector>

namespace lieforge {

enum class LinalgMethod { Exact, Modular };

// --- derivations -----------------------------------------------------------

// Unknown D_{k,l} (coefficient of b_k in D b_l) sits at column k*dim + l.
SparseVector matrix_to_vector(const SparseRationalMatrix& m);
SparseRationalMatrix vector_to_matrix(const SparseVector& v, std::size_t dim);

// Rows: the components of D[b_i,b_j] - [D b_i, b_j] - [b_i, D b_j] for i < j.
SparseRationalMatrix leibniz_system(const LieAlgebra& a);

struct DerivationReport {
    std::size_t dim_der = 0;
    std::size_t dim_inner = 0;
    std::size_t dim_outer = 0;
    std::vector<SparseRationalMatrix> outer_basis;  // echelon form modulo Inn
    bool is_complete = false;
    std::string method = "exact";
};

// Modular solves the Leibniz system by CRT and checks every basis vector
// exactly, so the reported dimension is exact either way.
DerivationReport derivation_algebra(const LieAlgebra& a, LinalgMethod method = LinalgMethod::Exact);

// Derivations of n that commute with every matrix of `action`.
std::vector<SparseRationalMatrix> commutant_derivations(const LieAlgebra& n, const ModuleAction& action,
                                                        LinalgMethod method = LinalgMethod::Exact);

bool completeness_check(const LieAlgebra& a, LinalgMethod method = LinalgMethod::Exact);

// --- cochains --------------------------------------------------------------

enum class CoefficientModule { Adjoint, Trivial };

// Alternating cochain stored on increasing tuples of algebra indices.
struct Cochain {
    int degree = 0;
    std::map<std::vector<std::size_t>, SparseVector> values;
};

// C^k(source, M) where `source` is a set of basis indices closed under the
// bracket and M is either the whole algebra under ad or the 1-dim trivial
// module. Coordinates: tuple_rank(T) * module_dim + m, tuples ranked in
// colexicographic order of their positions inside `source`.
class CochainSpace {
public:
    CochainSpace(std::shared_ptr<const LieAlgebra> a, std::vector<std::size_t> source, int degree,
                 CoefficientModule module = CoefficientModule::Adjoint);

    const LieAlgebra& algebra() const { return *a_; }
    const std::vector<std::size_t>& source() const { return source_; }
    int degree() const { return degree_; }
    CoefficientModule module() const { return module_; }
    std::size_t module_dim() const;
    std::size_t tuple_count() const { return tuples_; }
    std::size_t dim() const { return tuples_ * module_dim(); }
    CochainSpace next() const;

    // Positions inside source(), strictly increasing.
    std::size_t tuple_rank(const std::vector<std::size_t>& positions) const;
    std::vector<std::size_t> tuple_at(std::size_t rank) const;

    SparseVector from_cochain(const Cochain& c) const;
    Cochain to_cochain(const SparseVector& v) const;

    // The coboundary into next().
    SparseVector differential(const SparseVector& f) const;
    SparseRationalMatrix differential_matrix() const;

    // (s.f)(z..) = s.f(z..) - sum_t f(.., [s,z_t], ..) for s normalizing the source.
    SparseVector act(std::size_t s, const SparseVector& f) const;

    // h-weight of each coordinate when ad h is diagonal in the basis.
    std::optional<std::vector<int>> weights() const;

private:
    std::shared_ptr<const LieAlgebra> a_;
    std::vector<std::size_t> source_;
    std::vector<std::ptrdiff_t> position_;  // algebra index -> position in source, or -1
    int degree_;
    CoefficientModule module_;
    std::size_t tuples_;
    // For each source position l: (a, b, c) with a < b positions and [b_a, b_b] = c b_l + ...
    std::vector<std::vector<std::tuple<std::size_t, std::size_t, Rational>>> preimages_;
};

std::shared_ptr<const LieAlgebra> share(const LieAlgebra& a);

SparseRationalMatrix ce_differential(const LieAlgebra& a, int k, CoefficientModule module = CoefficientModule::Adjoint);

// Upper bound on dim C^{k+1} for cohomology_full; read from
// LIEFORGE_MAX_FULL_COCHAIN, default 250000.
std::size_t max_full_cochain();

struct CohomologyReport {
    int degree = 0;
    std::size_t dim_c = 0, dim_z = 0, dim_b = 0, dim_h = 0;
    std::string method;                                  // "full" or "invariant"
    std::map<int, std::size_t> invariant_cochain_dims;   // invariant method only
};

// H^k(a, M) on the whole complex. Throws SizeExceeded past max_full_cochain().
CohomologyReport cohomology_full(const LieAlgebra& a, int k, CoefficientModule module = CoefficientModule::Adjoint);

struct InvariantCochains {
    CochainSpace space;
    std::vector<SparseVector> basis;
    std::size_t schur_count = 0;
};

// Basis of C^k(N, L)^S for L = S ⋉ N with S = sl2, from the nullspace of the
// e and f actions. Throws VerificationFailure if the result is not h-invariant
// or its dimension differs from the multiplicity count.
InvariantCochains invariant_cochain_basis(const LieAlgebra& a, int k);

// H^k(L, L) = H^k(N, L)^S computed on invariant cochains.
CohomologyReport cohomology_invariant(const LieAlgebra& a, int k);

// --- the cocycle Psi and deformations ---------------------------------------

struct PsiCocycle {
    Cochain psi;
    bool invariant = false;
    bool closed = false;
    bool exact = false;
};

// Psi(x_1, y_2) = c, Psi(x_2, y_1) = -c on the first GN component. Throws
// NotACocycle if Psi fails invariance or closedness.
PsiCocycle build_psi_cocycle(const LieAlgebra& a);

// Cyclic sum of psi(psi(x,y),z) over basis triples, psi extended by zero.
bool maurer_cartan_check(const Cochain& psi, const LieAlgebra& a);

// [x,y]_t = [x,y] + t psi(x,y); Jacobi-gated.
LieAlgebra deform_bracket(const LieAlgebra& a, const Cochain& psi, const Rational& t);

// --- reports ---------------------------------------------------------------

nlohmann::json to_json(const DerivationReport& r);
// Cohomology ranks are always exact; "arithmetic" records that next to "method".
nlohmann::json to_json(const CohomologyReport& r);

}  // namespace lieforge
