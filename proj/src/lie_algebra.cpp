#include "lieforge/lie_algebra.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace lieforge {

namespace {

std::optional<int> parse_optional_int(std::string_view s, std::string_view whole) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw InvalidInput("bad integer field in label '" + std::string(whole) + "'");
    return v;
}

bool is_semisimple_ns(const std::string& ns) { return ns.rfind("sl", 0) == 0; }

}  // namespace

std::string BasisLabel::to_string() const {
    std::string s = ns + ":";
    if (level) s += std::to_string(*level);
    s += ":" + std::to_string(index) + ":";
    if (copy) s += std::to_string(*copy);
    return s;
}

BasisLabel BasisLabel::parse(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i)
        if (i == text.size() || text[i] == ':') {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    if (parts.size() != 4 || parts[0].empty() || parts[2].empty())
        throw InvalidInput("label must look like ns:level:index:copy, got '" + std::string(text) + "'");
    BasisLabel l;
    l.ns = std::string(parts[0]);
    l.level = parse_optional_int(parts[1], text);
    l.index = *parse_optional_int(parts[2], text);
    l.copy = parse_optional_int(parts[3], text);
    return l;
}

BasisLabel make_label(std::string ns, std::optional<int> level, int index, std::optional<int> copy) {
    return BasisLabel{std::move(ns), level, index, copy};
}

StructureTable::StructureTable(std::size_t dim) : dim_(dim), upper_(dim * dim) {}

void StructureTable::check(std::size_t i, std::size_t j) const {
    if (i >= dim_ || j >= dim_) throw DimensionMismatch("bracket index out of range");
}

void StructureTable::set(std::size_t i, std::size_t j, SparseVector v) {
    check(i, j);
    if (!v.empty() && v.entries.back().first >= dim_) throw DimensionMismatch("bracket target out of range");
    if (i == j) {
        if (!v.empty()) throw InvalidInput("nonzero [x, x] requested");
        return;
    }
    if (i > j) {
        std::swap(i, j);
        v = scaled(v, -1);
    }
    upper_[i * dim_ + j] = std::move(v);
}

void StructureTable::add(std::size_t i, std::size_t j, const SparseVector& v) {
    check(i, j);
    if (!v.empty() && v.entries.back().first >= dim_) throw DimensionMismatch("bracket target out of range");
    if (i == j) {
        if (!v.empty()) throw InvalidInput("nonzero [x, x] requested");
        return;
    }
    if (i < j)
        add_scaled(upper_[i * dim_ + j], v, 1);
    else
        add_scaled(upper_[j * dim_ + i], v, -1);
}

std::pair<const SparseVector*, int> StructureTable::lookup(std::size_t i, std::size_t j) const {
    if (i < j) return {&upper_[i * dim_ + j], 1};
    if (j < i) return {&upper_[j * dim_ + i], -1};
    static const SparseVector zero;
    return {&zero, 1};
}

SparseVector StructureTable::bracket(std::size_t i, std::size_t j) const {
    check(i, j);
    auto [v, s] = lookup(i, j);
    return s > 0 ? *v : scaled(*v, -1);
}

LieAlgebra::LieAlgebra(StructureTable table, std::vector<BasisLabel> labels)
    : table_(std::move(table)), labels_(std::move(labels)) {
    if (labels_.size() != table_.dim()) throw DimensionMismatch("label count differs from dimension");
    std::set<BasisLabel> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) throw InvalidInput("duplicate basis labels");

    LeviSplit split;
    for (std::size_t i = 0; i < labels_.size(); ++i)
        (is_semisimple_ns(labels_[i].ns) ? split.semisimple : split.nilradical).push_back(i);
    if (!split.semisimple.empty()) levi_ = split;

    auto n = nilradical_indices();
    std::map<int, std::vector<std::size_t>> layers;
    bool graded = !n.empty();
    for (std::size_t i : n) {
        if (!labels_[i].level || *labels_[i].level < 1) {
            graded = false;
            break;
        }
        layers[*labels_[i].level].push_back(i);
    }
    if (graded && layers.rbegin()->first == static_cast<int>(layers.size())) {
        std::vector<std::vector<std::size_t>> g;
        for (auto& [k, v] : layers) g.push_back(std::move(v));
        grading_ = std::move(g);
    }

    if (levi_) {
        // The semisimple span must be a subalgebra and the rest an ideal.
        std::vector<char> in_n(dim(), 0);
        for (std::size_t i : levi_->nilradical) in_n[i] = 1;
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = i + 1; j < dim(); ++j) {
                const auto& v = table_.upper(i, j);
                bool both_s = !in_n[i] && !in_n[j];
                for (const auto& [k, x] : v.entries)
                    if (in_n[k] == both_s)
                        throw InvalidInput(both_s ? "semisimple labels do not span a subalgebra"
                                                  : "nilradical labels do not span an ideal");
            }
    }
}

std::optional<std::size_t> LieAlgebra::find(const BasisLabel& label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) return i;
    return std::nullopt;
}

std::size_t LieAlgebra::index_of(const BasisLabel& label) const {
    auto i = find(label);
    if (!i) throw InvalidInput("no basis label " + label.to_string());
    return *i;
}

std::optional<Sl2Triple> LieAlgebra::sl2_triple() const {
    if (!levi_ || levi_->semisimple.size() != 3) return std::nullopt;
    auto e = find(make_label("sl2-e", std::nullopt, 1));
    auto h = find(make_label("sl2-h", std::nullopt, 1));
    auto f = find(make_label("sl2-f", std::nullopt, 1));
    if (!e || !h || !f) return std::nullopt;
    return Sl2Triple{*e, *h, *f};
}

std::vector<std::size_t> LieAlgebra::nilradical_indices() const {
    if (levi_) return levi_->nilradical;
    std::vector<std::size_t> all(dim());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return all;
}

SparseVector bracket(const LieAlgebra& a, const SparseVector& x, const SparseVector& y) {
    const auto& t = a.table();
    SparseAccumulator acc;
    for (const auto& [i, xi] : x.entries)
        for (const auto& [j, yj] : y.entries) {
            if (i >= t.dim() || j >= t.dim()) throw DimensionMismatch("vector longer than algebra dimension");
            auto [v, s] = t.lookup(i, j);
            if (!v->empty()) acc.add(*v, xi * yj * s);
        }
    return acc.take();
}

std::vector<Rational> bracket(const LieAlgebra& a, const std::vector<Rational>& x, const std::vector<Rational>& y) {
    if (x.size() != a.dim() || y.size() != a.dim()) throw DimensionMismatch("bracket arguments must have length dim");
    return bracket(a, SparseVector::from_dense(x), SparseVector::from_dense(y)).to_dense(a.dim());
}

SparseVector jacobiator(const LieAlgebra& a, const SparseVector& x, const SparseVector& y, const SparseVector& z) {
    SparseVector out = bracket(a, x, bracket(a, y, z));
    add_scaled(out, bracket(a, y, bracket(a, z, x)), 1);
    add_scaled(out, bracket(a, z, bracket(a, x, y)), 1);
    return out;
}

JacobiReport verify_jacobi(const StructureTable& t) {
    const std::size_t n = t.dim();
    JacobiReport report;
    std::vector<Rational> acc(n);
    std::vector<std::size_t> touched;
    std::vector<char> mark(n, 0);
    auto add_term = [&](std::size_t p, const SparseVector& inner, int sign) {
        for (const auto& [l, c] : inner.entries) {
            auto [v, s] = t.lookup(p, l);
            for (const auto& [k, x] : v->entries) {
                if (!mark[k]) {
                    mark[k] = 1;
                    touched.push_back(k);
                }
                if (s * sign > 0)
                    acc[k] += c * x;
                else
                    acc[k] -= c * x;
            }
        }
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                // J = [i,[j,k]] + [j,[k,i]] + [k,[i,j]] with [k,i] = -[i,k].
                add_term(i, t.upper(j, k), 1);
                add_term(j, t.upper(i, k), -1);
                add_term(k, t.upper(i, j), 1);
                if (touched.empty()) continue;
                std::sort(touched.begin(), touched.end());
                SparseVector r;
                for (std::size_t q : touched) {
                    if (acc[q] != 0) r.entries.emplace_back(q, acc[q]);
                    acc[q] = 0;
                    mark[q] = 0;
                }
                touched.clear();
                if (!r.empty()) report.failures.push_back({i, j, k, std::move(r)});
            }
    report.ok = report.failures.empty();
    return report;
}

JacobiReport verify_jacobi(const LieAlgebra& a) { return verify_jacobi(a.table()); }

void require_jacobi(const LieAlgebra& a, std::string_view what) {
    auto r = verify_jacobi(a);
    if (r.ok) return;
    std::ostringstream msg;
    msg << what << ": Jacobi identity fails on " << r.failures.size() << " basis triple(s)";
    for (std::size_t q = 0; q < std::min<std::size_t>(3, r.failures.size()); ++q) {
        const auto& f = r.failures[q];
        msg << (q ? ", " : ": ") << "(" << a.labels()[f.i].to_string() << ", " << a.labels()[f.j].to_string() << ", "
            << a.labels()[f.k].to_string() << ")";
    }
    throw JacobiFailure(msg.str(), std::move(r.failures));
}

SparseRationalMatrix ad_matrix(const LieAlgebra& a, const SparseVector& x) {
    std::vector<SparseVector> cols(a.dim());
    for (std::size_t j = 0; j < a.dim(); ++j) cols[j] = bracket(a, x, SparseVector::unit(j));
    return SparseRationalMatrix::from_columns(a.dim(), cols);
}

Subspace span_of(std::size_t ambient, const std::vector<SparseVector>& vectors) {
    EchelonSpan s(ambient);
    for (const auto& v : vectors) s.insert(v);
    return {ambient, s.canonical_basis()};
}

bool contains(const Subspace& s, const SparseVector& v) {
    EchelonSpan e(s.ambient);
    for (const auto& b : s.basis) e.insert(b);
    return e.contains(v);
}

Subspace whole_space(std::size_t dim) {
    Subspace s{dim, {}};
    for (std::size_t i = 0; i < dim; ++i) s.basis.push_back(SparseVector::unit(i));
    return s;
}

Subspace center(const LieAlgebra& a) {
    // x is central iff sum_i x_i [b_i, b_j] = 0 for every j: one row per (j, k).
    const std::size_t n = a.dim();
    std::vector<SparseAccumulator> rows(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            auto [v, s] = a.table().lookup(i, j);
            for (const auto& [k, c] : v->entries) rows[j * n + k].add(i, c * s);
        }
    std::vector<SparseVector> eqs;
    for (auto& r : rows)
        if (!r.empty()) eqs.push_back(r.take());
    auto ns = nullspace(SparseRationalMatrix::from_rows(n, std::move(eqs)));
    return span_of(n, ns.vectors);
}

Subspace bracket_span(const LieAlgebra& a, const Subspace& u, const Subspace& v) {
    EchelonSpan s(a.dim());
    for (const auto& x : u.basis)
        for (const auto& y : v.basis) {
            auto z = bracket(a, x, y);
            if (!z.empty()) s.insert(z);
            if (s.dimension() == a.dim()) break;
        }
    return {a.dim(), s.canonical_basis()};
}

Series derived_and_central_series(const LieAlgebra& a) {
    Series out;
    Subspace all = whole_space(a.dim());
    out.derived.push_back(all);
    while (true) {
        Subspace next = bracket_span(a, out.derived.back(), out.derived.back());
        if (next.dim() == out.derived.back().dim()) break;
        out.derived.push_back(std::move(next));
        if (out.derived.back().dim() == 0) break;
    }
    out.lower_central.push_back(all);
    while (true) {
        Subspace next = bracket_span(a, all, out.lower_central.back());
        if (next.dim() == out.lower_central.back().dim()) break;
        out.lower_central.push_back(std::move(next));
        if (out.lower_central.back().dim() == 0) break;
    }
    return out;
}

Predicates predicates(const LieAlgebra& a) {
    Predicates p;
    Subspace all = whole_space(a.dim());
    p.is_perfect = bracket_span(a, all, all).dim() == a.dim();
    auto series = derived_and_central_series(a);
    p.is_nilpotent = series.lower_central.back().dim() == 0;
    p.is_centerless = center(a).dim() == 0;
    return p;
}

namespace {

// Labels of b shifted so they cannot collide with those of a.
std::pair<std::vector<BasisLabel>, std::vector<BasisLabel>> disjoint_labels(const std::vector<BasisLabel>& a,
                                                                            const std::vector<BasisLabel>& b) {
    std::set<BasisLabel> sa(a.begin(), a.end());
    bool clash = std::any_of(b.begin(), b.end(), [&](const BasisLabel& l) { return sa.count(l) > 0; });
    if (!clash) return {a, b};
    std::vector<BasisLabel> la = a, lb = b;
    int top = 0;
    for (auto& l : la) {
        if (!l.copy && !is_semisimple_ns(l.ns)) l.copy = 1;
        if (l.copy) top = std::max(top, *l.copy);
    }
    for (auto& l : lb)
        if (!is_semisimple_ns(l.ns)) l.copy = top + l.copy.value_or(1);
    std::set<BasisLabel> all(la.begin(), la.end());
    for (const auto& l : lb)
        if (!all.insert(l).second) throw InvalidInput("cannot make labels disjoint: " + l.to_string());
    return {la, lb};
}

SparseVector shifted(const SparseVector& v, std::size_t offset) {
    SparseVector out;
    out.entries.reserve(v.size());
    for (const auto& [i, x] : v.entries) out.entries.emplace_back(i + offset, x);
    return out;
}

}  // namespace

LieAlgebra direct_sum(const LieAlgebra& a, const LieAlgebra& b) {
    const std::size_t na = a.dim(), nb = b.dim();
    StructureTable t(na + nb);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = i + 1; j < na; ++j) t.set(i, j, a.table().upper(i, j));
    for (std::size_t i = 0; i < nb; ++i)
        for (std::size_t j = i + 1; j < nb; ++j) t.set(na + i, na + j, shifted(b.table().upper(i, j), na));
    auto [la, lb] = disjoint_labels(a.labels(), b.labels());
    la.insert(la.end(), lb.begin(), lb.end());
    return LieAlgebra(std::move(t), std::move(la));
}

bool is_derivation(const LieAlgebra& a, const SparseRationalMatrix& d) {
    if (d.rows() != a.dim() || d.cols() != a.dim()) throw DimensionMismatch("derivation matrix has wrong shape");
    auto cols = d.columns();
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = i + 1; j < a.dim(); ++j) {
            SparseVector lhs = d.apply(a.table().upper(i, j));
            SparseVector rhs = bracket(a, cols[i], SparseVector::unit(j));
            add_scaled(rhs, bracket(a, SparseVector::unit(i), cols[j]), 1);
            if (lhs != rhs) return false;
        }
    return true;
}

LieAlgebra semidirect_product(const LieAlgebra& acting, const LieAlgebra& acted,
                              const std::vector<SparseRationalMatrix>& action, BasisOrder order) {
    if (action.size() != acting.dim()) throw DimensionMismatch("need one action matrix per acting basis vector");
    for (std::size_t g = 0; g < action.size(); ++g)
        if (!is_derivation(acted, action[g]))
            throw ActionNotDerivation("action of " + acting.labels()[g].to_string() + " is not a derivation");

    const std::size_t ng = acting.dim(), nh = acted.dim();
    const std::size_t og = order == BasisOrder::ActingFirst ? 0 : nh;
    const std::size_t oh = order == BasisOrder::ActingFirst ? ng : 0;
    StructureTable t(ng + nh);
    for (std::size_t i = 0; i < ng; ++i)
        for (std::size_t j = i + 1; j < ng; ++j) t.set(og + i, og + j, shifted(acting.table().upper(i, j), og));
    for (std::size_t i = 0; i < nh; ++i)
        for (std::size_t j = i + 1; j < nh; ++j) t.set(oh + i, oh + j, shifted(acted.table().upper(i, j), oh));
    for (std::size_t g = 0; g < ng; ++g) {
        auto cols = action[g].columns();
        for (std::size_t j = 0; j < nh; ++j) t.set(og + g, oh + j, shifted(cols[j], oh));
    }
    auto [lg, lh] = disjoint_labels(acting.labels(), acted.labels());
    std::vector<BasisLabel> labels;
    if (order == BasisOrder::ActingFirst) {
        labels = lg;
        labels.insert(labels.end(), lh.begin(), lh.end());
    } else {
        labels = lh;
        labels.insert(labels.end(), lg.begin(), lg.end());
    }
    LieAlgebra out(std::move(t), std::move(labels));
    require_jacobi(out, "semidirect product");
    return out;
}

QuasiCyclicResult quasi_cyclic_check(const LieAlgebra& a) {
    QuasiCyclicResult r;
    if (!a.grading()) {
        r.detail = "no grading attached";
        return r;
    }
    const auto& layers = *a.grading();
    auto layer_space = [&](std::size_t k) {
        std::vector<SparseVector> v;
        for (std::size_t i : layers[k]) v.push_back(SparseVector::unit(i));
        return span_of(a.dim(), v);
    };
    // The layers must be a grading: [U^i, U^j] inside U^{i+j}, or zero past the top.
    std::vector<std::size_t> layer_of(a.dim(), 0);
    for (std::size_t k = 0; k < layers.size(); ++k)
        for (std::size_t i : layers[k]) layer_of[i] = k + 1;
    for (std::size_t k = 0; k < layers.size(); ++k)
        for (std::size_t l = k; l < layers.size(); ++l)
            for (std::size_t i : layers[k])
                for (std::size_t j : layers[l]) {
                    if (i == j) continue;
                    for (const auto& [t, x] : a.table().bracket(i, j).entries)
                        if (layer_of[t] != k + l + 2) {
                            r.detail = "product of layers " + std::to_string(k + 1) + " and " + std::to_string(l + 1) +
                                       " leaves layer " + std::to_string(k + l + 2);
                            return r;
                        }
                }
    Subspace u1 = layer_space(0);
    for (std::size_t k = 1; k < layers.size(); ++k) {
        Subspace target = layer_space(k);
        Subspace got = bracket_span(a, layer_space(k - 1), u1);
        if (got != target) {
            r.failing_layer = k + 1;
            r.detail = "[U^" + std::to_string(k) + ", U^1] has dimension " + std::to_string(got.dim()) +
                       " but U^" + std::to_string(k + 1) + " has dimension " + std::to_string(target.dim());
            return r;
        }
    }
    r.ok = true;
    return r;
}

}  // namespace lieforge
