// Exact elimination over Q. Rows are cleared of denominators and reduced with
// fraction-free integer updates (r <- a*r - b*p, then divide out the content),
// so intermediate entries stay integral and small.

#include "blocks.hpp"
#include "lieforge/errors.hpp"
#include "lieforge/linalg.hpp"

#include <algorithm>

namespace lieforge {

namespace {

using IntRow = std::vector<std::pair<std::uint32_t, Integer>>;

void make_primitive(IntRow& r) {
    if (r.empty()) return;
    Integer g = 0;
    for (const auto& e : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1) break;
    }
    if (g != 1)
        for (auto& e : r) mpz_divexact(e.second.get_mpz_t(), e.second.get_mpz_t(), g.get_mpz_t());
    if (sgn(r.front().second) < 0)
        for (auto& e : r) e.second = -e.second;
}

IntRow to_integer_row(const SparseVector& v, const std::vector<std::uint32_t>& local) {
    Integer l = 1;
    for (const auto& e : v.entries) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), e.second.get_den_mpz_t());
    IntRow r;
    r.reserve(v.size());
    for (const auto& [c, x] : v.entries) {
        Integer k = l / x.get_den();
        r.emplace_back(local.empty() ? static_cast<std::uint32_t>(c) : local[c], x.get_num() * k);
    }
    make_primitive(r);
    return r;
}

// Cancel r[pos] against the leading entry of p (same column).
void eliminate(IntRow& r, std::size_t pos, const IntRow& p) {
    const Integer& pc = p.front().second;
    Integer a, b;
    if (pc == 1) {
        a = 1;
        b = r[pos].second;
    } else {
        Integer g = gcd(r[pos].second, pc);
        a = pc / g;
        b = r[pos].second / g;
    }
    const bool scale = a != 1;
    IntRow out;
    out.reserve(r.size() + p.size());
    for (std::size_t i = 0; i < pos; ++i) {
        if (scale) r[i].second *= a;
        out.push_back(std::move(r[i]));
    }
    std::size_t i = pos + 1, j = 1;
    Integer t;
    while (i < r.size() || j < p.size()) {
        if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
            if (scale) r[i].second *= a;
            out.push_back(std::move(r[i++]));
        } else if (i == r.size() || p[j].first < r[i].first) {
            t = p[j].second * b;
            out.emplace_back(p[j].first, -t);
            ++j;
        } else {
            if (scale)
                t = r[i].second * a - p[j].second * b;
            else
                t = r[i].second - p[j].second * b;
            if (t != 0) out.emplace_back(r[i].first, t);
            ++i;
            ++j;
        }
    }
    r = std::move(out);
    if (scale) make_primitive(r);
}

class IntegerEchelon {
public:
    explicit IntegerEchelon(std::size_t cols) : pivot_(cols, -1) {}

    bool insert(IntRow r) {
        while (!r.empty()) {
            long p = pivot_[r.front().first];
            if (p < 0) {
                make_primitive(r);
                pivot_[r.front().first] = static_cast<long>(rows_.size());
                rows_.push_back(std::move(r));
                return true;
            }
            eliminate(r, 0, rows_[p]);
        }
        return false;
    }

    std::size_t rank() const { return rows_.size(); }

    // Reduce every entry sitting in a pivot column other than `skip_self`.
    void reduce_tail(IntRow& r, std::size_t start) const {
        std::size_t pos = start;
        while (pos < r.size()) {
            long p = pivot_[r[pos].first];
            if (p >= 0)
                eliminate(r, pos, rows_[p]);
            else
                ++pos;
        }
    }

    // Reduced echelon rows with leading 1, sorted by pivot column.
    std::vector<std::pair<std::uint32_t, SparseVector>> rref() {
        std::vector<std::size_t> order(rows_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return rows_[a].front().first > rows_[b].front().first; });
        for (std::size_t idx : order) reduce_tail(rows_[idx], 1);
        std::vector<std::pair<std::uint32_t, SparseVector>> out;
        out.reserve(rows_.size());
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const IntRow& r = rows_[*it];
            SparseVector v;
            v.entries.reserve(r.size());
            const Integer& lead = r.front().second;
            for (const auto& [c, x] : r) {
                Rational q(x, lead);
                q.canonicalize();
                v.entries.emplace_back(c, std::move(q));
            }
            out.emplace_back(r.front().first, std::move(v));
        }
        return out;
    }

private:
    std::vector<long> pivot_;
    std::vector<IntRow> rows_;
};

struct BlockRref {
    std::vector<std::pair<std::uint32_t, SparseVector>> rows;  // local pivot col, local row
};

BlockRref block_rref(const SparseRationalMatrix& m, const detail::Block& b, const std::vector<std::uint32_t>& local) {
    IntegerEchelon e(b.cols.size());
    for (std::size_t r : b.rows) e.insert(to_integer_row(m.row(r), local));
    return {e.rref()};
}

SparseVector globalize(const SparseVector& v, const std::vector<std::size_t>& cols) {
    SparseVector out;
    out.entries.reserve(v.size());
    for (const auto& [c, x] : v.entries) out.entries.emplace_back(cols[c], x);
    return out;
}

// Nullspace vectors of one block from its RREF, keyed by global free column.
void block_nullspace(const BlockRref& rr, const detail::Block& b,
                     std::vector<std::pair<std::size_t, SparseVector>>& out) {
    const std::size_t n = b.cols.size();
    std::vector<char> is_pivot(n, 0);
    for (const auto& [c, row] : rr.rows) is_pivot[c] = 1;
    std::vector<SparseVector> vecs(n);
    for (const auto& [c, row] : rr.rows)
        for (std::size_t k = 1; k < row.entries.size(); ++k) {
            const auto& [f, x] = row.entries[k];
            vecs[f].entries.emplace_back(b.cols[c], -x);
        }
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        SparseVector v = std::move(vecs[f]);
        v.entries.emplace_back(b.cols[f], Rational(1));
        std::sort(v.entries.begin(), v.entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        out.emplace_back(b.cols[f], std::move(v));
    }
}

}  // namespace

std::size_t rank(const SparseRationalMatrix& m) {
    auto split = detail::split_blocks(m);
    std::size_t total = 0;
    for (const auto& b : split.blocks) {
        IntegerEchelon e(b.cols.size());
        for (std::size_t r : b.rows) e.insert(to_integer_row(m.row(r), split.local));
        total += e.rank();
    }
    return total;
}

NullspaceBasis nullspace(const SparseRationalMatrix& m) {
    auto split = detail::split_blocks(m);
    std::vector<std::pair<std::size_t, SparseVector>> keyed;
    for (std::size_t c : split.untouched_cols) keyed.emplace_back(c, SparseVector::unit(c));
    for (const auto& b : split.blocks) block_nullspace(block_rref(m, b, split.local), b, keyed);
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    NullspaceBasis out;
    out.dimension = keyed.size();
    for (auto& [c, v] : keyed) out.vectors.push_back(std::move(v));
    return out;
}

std::vector<SparseVector> row_echelon_basis(const SparseRationalMatrix& m) {
    auto split = detail::split_blocks(m);
    std::vector<std::pair<std::size_t, SparseVector>> keyed;
    for (const auto& b : split.blocks)
        for (auto& [c, row] : block_rref(m, b, split.local).rows) keyed.emplace_back(b.cols[c], globalize(row, b.cols));
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<SparseVector> out;
    out.reserve(keyed.size());
    for (auto& [c, v] : keyed) out.push_back(std::move(v));
    return out;
}

std::optional<std::vector<Rational>> solve(const SparseRationalMatrix& m, const std::vector<Rational>& b) {
    if (b.size() != m.rows()) throw DimensionMismatch("right-hand side length != row count");
    const std::size_t n = m.cols();
    std::vector<SparseVector> rows;
    rows.reserve(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        SparseVector v = m.row(r);
        if (b[r] != 0) v.entries.emplace_back(n, b[r]);
        rows.push_back(std::move(v));
    }
    auto aug = SparseRationalMatrix::from_rows(n + 1, std::move(rows));
    std::vector<Rational> x(n);
    for (const auto& row : row_echelon_basis(aug)) {
        std::size_t pivot = row.entries.front().first;
        if (pivot == n) return std::nullopt;
        if (row.entries.back().first == n) x[pivot] = row.entries.back().second;
    }
    return x;
}

EchelonSpan::EchelonSpan(std::size_t ambient) : ambient_(ambient) {}

SparseVector EchelonSpan::reduce(const SparseVector& v) const {
    if (!v.empty() && v.entries.back().first >= ambient_) throw DimensionMismatch("vector outside ambient space");
    SparseVector r = v;
    std::size_t pos = 0;
    while (pos < r.entries.size()) {
        auto it = pivot_.find(r.entries[pos].first);
        if (it == pivot_.end()) {
            ++pos;
            continue;
        }
        Rational coef = r.entries[pos].second;
        add_scaled(r, rows_[it->second], -coef);
    }
    return r;
}

bool EchelonSpan::contains(const SparseVector& v) const { return reduce(v).empty(); }

bool EchelonSpan::insert(const SparseVector& v) {
    SparseVector r = reduce(v);
    if (r.empty()) return false;
    Rational lead = r.entries.front().second;
    r = scaled(r, 1 / lead);
    std::size_t col = r.entries.front().first;
    for (auto& row : rows_) {
        Rational c = row.at(col);
        if (c != 0) add_scaled(row, r, -c);
    }
    pivot_.emplace(col, rows_.size());
    rows_.push_back(std::move(r));
    return true;
}

std::vector<SparseVector> EchelonSpan::canonical_basis() const {
    std::vector<SparseVector> out;
    out.reserve(rows_.size());
    for (const auto& [c, r] : pivot_) out.push_back(rows_[r]);
    return out;
}

}  // namespace lieforge
