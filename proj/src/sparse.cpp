#include "lieforge/errors.hpp"
#include "lieforge/linalg.hpp"

#include <algorithm>

namespace lieforge {

Rational SparseVector::at(std::size_t index) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), index,
                               [](const auto& e, std::size_t i) { return e.first < i; });
    if (it != entries.end() && it->first == index) return it->second;
    return 0;
}

SparseVector SparseVector::unit(std::size_t index) {
    SparseVector v;
    v.entries.emplace_back(index, Rational(1));
    return v;
}

SparseVector SparseVector::from_dense(const std::vector<Rational>& dense) {
    SparseVector v;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i] != 0) v.entries.emplace_back(i, dense[i]);
    return v;
}

std::vector<Rational> SparseVector::to_dense(std::size_t length) const {
    std::vector<Rational> out(length);
    for (const auto& [i, x] : entries) {
        if (i >= length) throw DimensionMismatch("sparse index out of range");
        out[i] = x;
    }
    return out;
}

void add_scaled(SparseVector& target, const SparseVector& other, const Rational& scale) {
    if (scale == 0 || other.empty()) return;
    std::vector<std::pair<std::size_t, Rational>> out;
    out.reserve(target.size() + other.size());
    auto a = target.entries.begin(), ae = target.entries.end();
    auto b = other.entries.begin(), be = other.entries.end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
            out.push_back(std::move(*a++));
        } else if (a == ae || b->first < a->first) {
            out.emplace_back(b->first, b->second * scale);
            ++b;
        } else {
            Rational s = a->second + b->second * scale;
            if (s != 0) out.emplace_back(a->first, std::move(s));
            ++a;
            ++b;
        }
    }
    target.entries = std::move(out);
}

SparseVector scaled(const SparseVector& v, const Rational& scale) {
    SparseVector out;
    if (scale == 0) return out;
    out.entries.reserve(v.size());
    for (const auto& [i, x] : v.entries) out.entries.emplace_back(i, x * scale);
    return out;
}

SparseVector operator+(const SparseVector& a, const SparseVector& b) {
    SparseVector out = a;
    add_scaled(out, b, 1);
    return out;
}

SparseVector operator-(const SparseVector& a, const SparseVector& b) {
    SparseVector out = a;
    add_scaled(out, b, -1);
    return out;
}

void SparseAccumulator::add(std::size_t index, const Rational& value) {
    if (value == 0) return;
    auto [it, inserted] = values_.try_emplace(index, value);
    if (!inserted) {
        it->second += value;
        if (it->second == 0) values_.erase(it);
    }
}

void SparseAccumulator::add(const SparseVector& v, const Rational& scale) {
    if (scale == 0) return;
    for (const auto& [i, x] : v.entries) add(i, x * scale);
}

SparseVector SparseAccumulator::take() {
    SparseVector out;
    out.entries.reserve(values_.size());
    for (auto& [i, x] : values_) out.entries.emplace_back(i, std::move(x));
    values_.clear();
    return out;
}

SparseRationalMatrix::SparseRationalMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

SparseRationalMatrix SparseRationalMatrix::from_rows(std::size_t cols, std::vector<SparseVector> rows) {
    SparseRationalMatrix m;
    m.cols_ = cols;
    for (const auto& r : rows)
        if (!r.empty() && r.entries.back().first >= cols) throw DimensionMismatch("row entry beyond column count");
    m.rows_ = std::move(rows);
    return m;
}

SparseRationalMatrix SparseRationalMatrix::from_columns(std::size_t rows, const std::vector<SparseVector>& cols) {
    std::vector<SparseVector> out(rows);
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [r, x] : cols[c].entries) {
            if (r >= rows) throw DimensionMismatch("column entry beyond row count");
            out[r].entries.emplace_back(c, x);
        }
    return from_rows(cols.size(), std::move(out));
}

SparseRationalMatrix SparseRationalMatrix::from_dense(const std::vector<std::vector<Rational>>& dense) {
    std::size_t cols = dense.empty() ? 0 : dense.front().size();
    std::vector<SparseVector> rows;
    for (const auto& r : dense) {
        if (r.size() != cols) throw DimensionMismatch("ragged dense matrix");
        rows.push_back(SparseVector::from_dense(r));
    }
    return from_rows(cols, std::move(rows));
}

SparseRationalMatrix SparseRationalMatrix::identity(std::size_t n) {
    SparseRationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i] = SparseVector::unit(i);
    return m;
}

std::size_t SparseRationalMatrix::nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
}

void SparseRationalMatrix::set(std::size_t r, std::size_t c, const Rational& value) {
    if (r >= rows() || c >= cols_) throw DimensionMismatch("matrix index out of range");
    auto& e = rows_[r].entries;
    auto it = std::lower_bound(e.begin(), e.end(), c, [](const auto& x, std::size_t i) { return x.first < i; });
    if (it != e.end() && it->first == c) {
        if (value == 0)
            e.erase(it);
        else
            it->second = value;
    } else if (value != 0) {
        e.insert(it, {c, value});
    }
}

void SparseRationalMatrix::set_row(std::size_t r, SparseVector v) {
    if (r >= rows()) throw DimensionMismatch("row index out of range");
    if (!v.empty() && v.entries.back().first >= cols_) throw DimensionMismatch("row entry beyond column count");
    rows_[r] = std::move(v);
}

SparseRationalMatrix SparseRationalMatrix::transpose() const {
    return from_columns(cols_, rows_);
}

std::vector<SparseVector> SparseRationalMatrix::columns() const {
    std::vector<SparseVector> out(cols_);
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (const auto& [c, x] : rows_[r].entries) out[c].entries.emplace_back(r, x);
    return out;
}

SparseVector SparseRationalMatrix::column(std::size_t c) const {
    SparseVector out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        Rational x = rows_[r].at(c);
        if (x != 0) out.entries.emplace_back(r, std::move(x));
    }
    return out;
}

SparseVector SparseRationalMatrix::apply(const SparseVector& x) const {
    if (!x.empty() && x.entries.back().first >= cols_) throw DimensionMismatch("vector longer than column count");
    SparseVector out;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        Rational s = 0;
        auto a = rows_[r].entries.begin(), ae = rows_[r].entries.end();
        auto b = x.entries.begin(), be = x.entries.end();
        while (a != ae && b != be) {
            if (a->first < b->first)
                ++a;
            else if (b->first < a->first)
                ++b;
            else {
                s += a->second * b->second;
                ++a;
                ++b;
            }
        }
        if (s != 0) out.entries.emplace_back(r, std::move(s));
    }
    return out;
}

std::vector<Rational> SparseRationalMatrix::apply(const std::vector<Rational>& x) const {
    if (x.size() != cols_) throw DimensionMismatch("vector length != column count");
    std::vector<Rational> out(rows_.size());
    for (std::size_t r = 0; r < rows_.size(); ++r)
        for (const auto& [c, v] : rows_[r].entries) out[r] += v * x[c];
    return out;
}

SparseRationalMatrix operator*(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    if (a.cols() != b.rows()) throw DimensionMismatch("matrix product shape mismatch");
    std::vector<SparseVector> rows(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        SparseAccumulator acc;
        for (const auto& [k, x] : a.row(r).entries) acc.add(b.row(k), x);
        rows[r] = acc.take();
    }
    return SparseRationalMatrix::from_rows(b.cols(), std::move(rows));
}

SparseRationalMatrix operator+(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix sum shape mismatch");
    std::vector<SparseVector> rows(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) rows[r] = a.row(r) + b.row(r);
    return SparseRationalMatrix::from_rows(a.cols(), std::move(rows));
}

SparseRationalMatrix operator-(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    return a + Rational(-1) * b;
}

SparseRationalMatrix operator*(const Rational& s, const SparseRationalMatrix& a) {
    std::vector<SparseVector> rows(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) rows[r] = scaled(a.row(r), s);
    return SparseRationalMatrix::from_rows(a.cols(), std::move(rows));
}

SparseRationalMatrix commutator(const SparseRationalMatrix& a, const SparseRationalMatrix& b) {
    return a * b - b * a;
}

bool is_zero(const SparseRationalMatrix& m) {
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (!m.row(r).empty()) return false;
    return true;
}

}  // namespace lieforge
