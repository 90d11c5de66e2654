#pragma once

#include "lieforge/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lieforge {

// Sorted (index, value) pairs with no stored zeros.
struct SparseVector {
    std::vector<std::pair<std::size_t, Rational>> entries;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
    Rational at(std::size_t index) const;

    static SparseVector unit(std::size_t index);
    static SparseVector from_dense(const std::vector<Rational>& dense);
    std::vector<Rational> to_dense(std::size_t length) const;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

// this += scale * other
void add_scaled(SparseVector& target, const SparseVector& other, const Rational& scale);
SparseVector scaled(const SparseVector& v, const Rational& scale);
SparseVector operator+(const SparseVector& a, const SparseVector& b);
SparseVector operator-(const SparseVector& a, const SparseVector& b);

// Collects unsorted contributions and emits a canonical SparseVector.
class SparseAccumulator {
public:
    void add(std::size_t index, const Rational& value);
    void add(const SparseVector& v, const Rational& scale);
    bool empty() const { return values_.empty(); }
    SparseVector take();

private:
    std::map<std::size_t, Rational> values_;
};

// Row-major sparse matrix. Rows are SparseVectors with column indices < cols().
class SparseRationalMatrix {
public:
    SparseRationalMatrix() = default;
    SparseRationalMatrix(std::size_t rows, std::size_t cols);

    static SparseRationalMatrix from_rows(std::size_t cols, std::vector<SparseVector> rows);
    static SparseRationalMatrix from_columns(std::size_t rows, const std::vector<SparseVector>& cols);
    static SparseRationalMatrix from_dense(const std::vector<std::vector<Rational>>& dense);
    static SparseRationalMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }
    std::size_t nonzeros() const;

    const SparseVector& row(std::size_t r) const { return rows_[r]; }
    Rational at(std::size_t r, std::size_t c) const { return rows_[r].at(c); }
    void set(std::size_t r, std::size_t c, const Rational& value);
    void set_row(std::size_t r, SparseVector v);

    SparseRationalMatrix transpose() const;
    std::vector<SparseVector> columns() const;
    SparseVector column(std::size_t c) const;

    SparseVector apply(const SparseVector& x) const;
    std::vector<Rational> apply(const std::vector<Rational>& x) const;

    friend bool operator==(const SparseRationalMatrix&, const SparseRationalMatrix&) = default;

private:
    std::size_t cols_ = 0;
    std::vector<SparseVector> rows_;
};

SparseRationalMatrix operator*(const SparseRationalMatrix& a, const SparseRationalMatrix& b);
SparseRationalMatrix operator+(const SparseRationalMatrix& a, const SparseRationalMatrix& b);
SparseRationalMatrix operator-(const SparseRationalMatrix& a, const SparseRationalMatrix& b);
SparseRationalMatrix operator*(const Rational& s, const SparseRationalMatrix& a);
SparseRationalMatrix commutator(const SparseRationalMatrix& a, const SparseRationalMatrix& b);
bool is_zero(const SparseRationalMatrix& m);

struct NullspaceBasis {
    std::size_t dimension = 0;
    std::vector<SparseVector> vectors;  // one per free column, ordered by that column
};

// Exact rank over Q via fraction-free integer elimination on each connected
// block of the row/column incidence graph.
std::size_t rank(const SparseRationalMatrix& m);

// Canonical basis read off the reduced row echelon form: the vector for free
// column f has a 1 in slot f and zeros in every other free slot.
NullspaceBasis nullspace(const SparseRationalMatrix& m);

// Reduced row echelon form of the row space, rows normalized to leading 1,
// ordered by pivot column.
std::vector<SparseVector> row_echelon_basis(const SparseRationalMatrix& m);

// One exact solution of m·x = b (free variables set to 0), or nullopt.
// Throws DimensionMismatch if b has the wrong length.
std::optional<std::vector<Rational>> solve(const SparseRationalMatrix& m, const std::vector<Rational>& b);

struct ModularRank {
    std::size_t rank = 0;
    std::vector<std::uint64_t> primes;
    std::string method = "modular";
};

// Rank modulo `confidence` distinct primes near 2^62 that divide no denominator.
// The maximum over primes is returned; it never exceeds the rational rank.
ModularRank rank_modular(const SparseRationalMatrix& m, std::size_t confidence);

struct CertifiedNullspace {
    NullspaceBasis basis;
    std::size_t primes_used = 0;
    bool exact_fallback = false;  // true if some block had to be eliminated over Q
};

// Nullspace via multi-modular elimination, CRT and rational reconstruction.
// Every reconstructed vector is checked against m exactly; since the vectors are
// independent and their count equals the modular nullity (an upper bound), the
// dimension is certified. Blocks that fail to reconstruct fall back to exact
// elimination. The result coincides with nullspace(m).
CertifiedNullspace nullspace_certified(const SparseRationalMatrix& m);

// Incremental echelon basis of a subspace of Q^n. Used for spans, membership
// tests and quotient computations where the vectors arrive one at a time.
class EchelonSpan {
public:
    explicit EchelonSpan(std::size_t ambient);

    std::size_t ambient() const { return ambient_; }
    std::size_t dimension() const { return rows_.size(); }

    // Adds v; returns false if v was already in the span.
    bool insert(const SparseVector& v);
    bool contains(const SparseVector& v) const;
    // v minus its projection along the pivots; zero iff v is in the span.
    SparseVector reduce(const SparseVector& v) const;
    // Reduced echelon basis, leading entries 1, ordered by pivot column.
    std::vector<SparseVector> canonical_basis() const;

private:
    std::size_t ambient_;
    std::vector<SparseVector> rows_;            // leading entry 1, kept fully reduced
    std::map<std::size_t, std::size_t> pivot_;  // pivot column -> row
};

}  // namespace lieforge
