#pragma once

#include "lieforge/errors.hpp"
#include "lieforge/linalg.hpp"

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lieforge {

// "ns:level:index:copy" with empty fields for absent optionals.
struct BasisLabel {
    std::string ns;
    std::optional<int> level;
    int index = 0;
    std::optional<int> copy;

    std::string to_string() const;
    static BasisLabel parse(std::string_view text);

    auto operator<=>(const BasisLabel&) const = default;
    bool operator==(const BasisLabel&) const = default;
};

BasisLabel make_label(std::string ns, std::optional<int> level, int index, std::optional<int> copy = std::nullopt);

// Brackets of basis vectors. Only i<j is stored; the rest follows from antisymmetry.
class StructureTable {
public:
    explicit StructureTable(std::size_t dim = 0);

    std::size_t dim() const { return dim_; }

    // [b_i, b_j] := v. For i > j the negation is stored. i == j requires v == 0.
    void set(std::size_t i, std::size_t j, SparseVector v);
    // [b_i, b_j] += v.
    void add(std::size_t i, std::size_t j, const SparseVector& v);

    // Stored value for i < j.
    const SparseVector& upper(std::size_t i, std::size_t j) const { return upper_[i * dim_ + j]; }
    // Signed lookup: returns the stored vector and the sign to apply.
    std::pair<const SparseVector*, int> lookup(std::size_t i, std::size_t j) const;
    SparseVector bracket(std::size_t i, std::size_t j) const;

    bool operator==(const StructureTable& other) const = default;

private:
    void check(std::size_t i, std::size_t j) const;

    std::size_t dim_;
    std::vector<SparseVector> upper_;  // dim*dim slots, only i<j used
};

struct LeviSplit {
    std::vector<std::size_t> semisimple;
    std::vector<std::size_t> nilradical;
    bool operator==(const LeviSplit&) const = default;
};

struct Sl2Triple {
    std::size_t e, h, f;
};

// A structure table with labels. The Levi split and the grading are read off
// the labels: namespaces starting with "sl" form the semisimple part, and if
// every other label carries a level, the levels give the layers U^1..U^n.
class LieAlgebra {
public:
    LieAlgebra() = default;
    LieAlgebra(StructureTable table, std::vector<BasisLabel> labels);

    std::size_t dim() const { return table_.dim(); }
    const StructureTable& table() const { return table_; }
    const std::vector<BasisLabel>& labels() const { return labels_; }
    const std::optional<LeviSplit>& levi() const { return levi_; }
    const std::optional<std::vector<std::vector<std::size_t>>>& grading() const { return grading_; }

    std::optional<std::size_t> find(const BasisLabel& label) const;
    std::size_t index_of(const BasisLabel& label) const;  // throws InvalidInput if absent
    std::optional<Sl2Triple> sl2_triple() const;
    // Indices treated as the nilradical: the Levi nilradical, or everything when no split is present.
    std::vector<std::size_t> nilradical_indices() const;

    bool operator==(const LieAlgebra& other) const {
        return table_ == other.table_ && labels_ == other.labels_;
    }

private:
    StructureTable table_;
    std::vector<BasisLabel> labels_;
    std::optional<LeviSplit> levi_;
    std::optional<std::vector<std::vector<std::size_t>>> grading_;
};

struct JacobiViolation {
    std::size_t i, j, k;
    SparseVector residual;
};

class JacobiFailure : public VerificationFailure {
public:
    JacobiFailure(std::string what, std::vector<JacobiViolation> failures)
        : VerificationFailure(std::move(what)), failures_(std::move(failures)) {}
    const std::vector<JacobiViolation>& failures() const { return failures_; }

private:
    std::vector<JacobiViolation> failures_;
};

struct JacobiReport {
    bool ok = true;
    std::vector<JacobiViolation> failures;
};

SparseVector bracket(const LieAlgebra& a, const SparseVector& x, const SparseVector& y);
std::vector<Rational> bracket(const LieAlgebra& a, const std::vector<Rational>& x, const std::vector<Rational>& y);
SparseVector jacobiator(const LieAlgebra& a, const SparseVector& x, const SparseVector& y, const SparseVector& z);

JacobiReport verify_jacobi(const StructureTable& t);
JacobiReport verify_jacobi(const LieAlgebra& a);
// Throws JacobiFailure naming the first few offending triples.
void require_jacobi(const LieAlgebra& a, std::string_view what);

// Matrix of ad_x (column j = [x, b_j]).
SparseRationalMatrix ad_matrix(const LieAlgebra& a, const SparseVector& x);

struct Subspace {
    std::size_t ambient = 0;
    std::vector<SparseVector> basis;  // reduced echelon, leading 1
    std::size_t dim() const { return basis.size(); }
    bool operator==(const Subspace&) const = default;
};

Subspace span_of(std::size_t ambient, const std::vector<SparseVector>& vectors);
bool contains(const Subspace& s, const SparseVector& v);

Subspace center(const LieAlgebra& a);
// Span of [u, v] for u in U, v in V.
Subspace bracket_span(const LieAlgebra& a, const Subspace& u, const Subspace& v);
Subspace whole_space(std::size_t dim);

struct Series {
    std::vector<Subspace> derived;        // L, [L,L], ... until it stops shrinking
    std::vector<Subspace> lower_central;  // L, [L,L], [L,[L,L]], ... until it stops shrinking
};
Series derived_and_central_series(const LieAlgebra& a);

struct Predicates {
    bool is_perfect = false;
    bool is_nilpotent = false;
    bool is_centerless = false;
};
Predicates predicates(const LieAlgebra& a);

// Block-diagonal sum. If label sets collide, the right-hand copies are retagged.
LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b);

enum class BasisOrder { ActingFirst, ActedFirst };

// acting ⋉ acted, where action[i] is the derivation of `acted` by which basis
// element i of `acting` acts (column j = image of b_j). Each matrix is checked
// to be a derivation and the result is gated by verify_jacobi.
LieAlgebra semidirect_product(const LieAlgebra& acting, const LieAlgebra& acted,
                              const std::vector<SparseRationalMatrix>& action,
                              BasisOrder order = BasisOrder::ActingFirst);

bool is_derivation(const LieAlgebra& a, const SparseRationalMatrix& d);

struct QuasiCyclicResult {
    bool ok = false;
    std::optional<std::size_t> failing_layer;  // 1-based
    std::string detail;
};

// Checks that the layers form a grading and span(U^k) = [U^{k-1}, U^1] for k >= 2.
QuasiCyclicResult quasi_cyclic_check(const LieAlgebra& a);

}  // namespace lieforge
