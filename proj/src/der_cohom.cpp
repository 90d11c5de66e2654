#include "lieforge/der_cohom.hpp"

#include <algorithm>
#include <cstdlib>

namespace lieforge {

namespace {

NullspaceBasis solve_nullspace(const SparseRationalMatrix& m, LinalgMethod method) {
    return method == LinalgMethod::Exact ? nullspace(m) : nullspace_certified(m).basis;
}

std::size_t choose(std::size_t n, std::size_t r) {
    if (r > n) return 0;
    std::size_t out = 1;
    for (std::size_t i = 1; i <= r; ++i) out = out * (n - r + i) / i;
    return out;
}

int parity_sign(std::size_t x) { return x % 2 ? -1 : 1; }

// Adds the Leibniz rows of `a` into `rows`, keyed by (pair, component).
void leibniz_rows(const LieAlgebra& a, std::vector<SparseVector>& out) {
    const std::size_t n = a.dim();
    const auto& t = a.table();
    auto u = [n](std::size_t k, std::size_t l) { return k * n + l; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            std::map<std::size_t, SparseAccumulator> rows;
            for (const auto& [l, c] : t.upper(i, j).entries)
                for (std::size_t k = 0; k < n; ++k) rows[k].add(u(k, l), c);
            for (std::size_t m = 0; m < n; ++m) {
                auto [mj, smj] = t.lookup(m, j);
                for (const auto& [k, c] : mj->entries) rows[k].add(u(m, i), -c * smj);
                auto [im, sim] = t.lookup(i, m);
                for (const auto& [k, c] : im->entries) rows[k].add(u(m, j), -c * sim);
            }
            for (auto& [k, acc] : rows)
                if (!acc.empty()) {
                    auto v = acc.take();
                    if (!v.empty()) out.push_back(std::move(v));
                }
        }
}

}  // namespace

SparseVector matrix_to_vector(const SparseRationalMatrix& m) {
    SparseVector v;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (const auto& [c, x] : m.row(r).entries) v.entries.emplace_back(r * m.cols() + c, x);
    return v;
}

SparseRationalMatrix vector_to_matrix(const SparseVector& v, std::size_t dim) {
    SparseRationalMatrix m(dim, dim);
    for (const auto& [idx, x] : v.entries) m.set(idx / dim, idx % dim, x);
    return m;
}

SparseRationalMatrix leibniz_system(const LieAlgebra& a) {
    std::vector<SparseVector> rows;
    leibniz_rows(a, rows);
    return SparseRationalMatrix::from_rows(a.dim() * a.dim(), std::move(rows));
}

DerivationReport derivation_algebra(const LieAlgebra& a, LinalgMethod method) {
    const std::size_t n = a.dim();
    auto der = solve_nullspace(leibniz_system(a), method);
    const std::size_t z = center(a).dim();

    EchelonSpan inner(n * n);
    for (std::size_t i = 0; i < n; ++i) inner.insert(matrix_to_vector(ad_matrix(a, SparseVector::unit(i))));
    if (inner.dimension() != n - z) throw VerificationFailure("inner derivations do not have dimension dim - dim center");

    EchelonSpan outer(n * n);
    for (const auto& d : der.vectors) {
        auto r = inner.reduce(d);
        if (!r.empty()) outer.insert(r);
    }
    DerivationReport rep;
    rep.dim_der = der.dimension;
    rep.dim_inner = n - z;
    if (rep.dim_der < rep.dim_inner) throw VerificationFailure("derivation space is smaller than the inner derivations");
    rep.dim_outer = rep.dim_der - rep.dim_inner;
    if (outer.dimension() != rep.dim_outer) throw VerificationFailure("inner derivations are not all in the computed Der");
    for (const auto& v : outer.canonical_basis()) rep.outer_basis.push_back(vector_to_matrix(v, n));
    rep.is_complete = rep.dim_outer == 0 && z == 0;
    rep.method = method == LinalgMethod::Exact ? "exact" : "modular";
    return rep;
}

std::vector<SparseRationalMatrix> commutant_derivations(const LieAlgebra& a, const ModuleAction& action,
                                                        LinalgMethod method) {
    const std::size_t n = a.dim();
    if (action.dim != n) throw DimensionMismatch("action dimension differs from the algebra");
    std::vector<SparseVector> rows;
    leibniz_rows(a, rows);
    auto u = [n](std::size_t k, std::size_t l) { return k * n + l; };
    for (const auto& [name, rho] : action.generators) {
        // (D rho - rho D)_{k,j}
        std::vector<SparseAccumulator> acc(n * n);
        for (std::size_t l = 0; l < n; ++l)
            for (const auto& [j, x] : rho.row(l).entries)
                for (std::size_t k = 0; k < n; ++k) acc[k * n + j].add(u(k, l), x);
        for (std::size_t k = 0; k < n; ++k)
            for (const auto& [l, x] : rho.row(k).entries)
                for (std::size_t j = 0; j < n; ++j) acc[k * n + j].add(u(l, j), -x);
        for (auto& r : acc)
            if (!r.empty()) {
                auto v = r.take();
                if (!v.empty()) rows.push_back(std::move(v));
            }
    }
    auto ns = solve_nullspace(SparseRationalMatrix::from_rows(n * n, std::move(rows)), method);
    std::vector<SparseRationalMatrix> out;
    for (const auto& v : ns.vectors) out.push_back(vector_to_matrix(v, n));
    return out;
}

bool completeness_check(const LieAlgebra& a, LinalgMethod method) { return derivation_algebra(a, method).is_complete; }

// --- cochains ----------------------------------------------------------------

std::shared_ptr<const LieAlgebra> share(const LieAlgebra& a) { return std::make_shared<const LieAlgebra>(a); }

CochainSpace::CochainSpace(std::shared_ptr<const LieAlgebra> a, std::vector<std::size_t> source, int degree,
                           CoefficientModule module)
    : a_(std::move(a)), source_(std::move(source)), degree_(degree), module_(module) {
    if (degree < 0) throw InvalidParameters("cochain degree must be non-negative");
    std::sort(source_.begin(), source_.end());
    source_.erase(std::unique(source_.begin(), source_.end()), source_.end());
    position_.assign(a_->dim(), -1);
    for (std::size_t p = 0; p < source_.size(); ++p) {
        if (source_[p] >= a_->dim()) throw InvalidInput("source index out of range");
        position_[source_[p]] = static_cast<std::ptrdiff_t>(p);
    }
    tuples_ = choose(source_.size(), static_cast<std::size_t>(degree));
    preimages_.resize(source_.size());
    for (std::size_t p = 0; p < source_.size(); ++p)
        for (std::size_t q = p + 1; q < source_.size(); ++q)
            for (const auto& [l, c] : a_->table().upper(source_[p], source_[q]).entries) {
                if (position_[l] < 0) throw InvalidInput("cochain source is not closed under the bracket");
                preimages_[position_[l]].emplace_back(p, q, c);
            }
}

std::size_t CochainSpace::module_dim() const { return module_ == CoefficientModule::Adjoint ? a_->dim() : 1; }

CochainSpace CochainSpace::next() const { return CochainSpace(a_, source_, degree_ + 1, module_); }

std::size_t CochainSpace::tuple_rank(const std::vector<std::size_t>& t) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < t.size(); ++i) r += choose(t[i], i + 1);
    return r;
}

std::vector<std::size_t> CochainSpace::tuple_at(std::size_t rank) const {
    std::vector<std::size_t> t(degree_);
    std::size_t top = source_.size();
    for (int i = degree_ - 1; i >= 0; --i) {
        std::size_t x = top - 1;
        while (choose(x, i + 1) > rank) --x;
        t[i] = x;
        rank -= choose(x, i + 1);
        top = x;
    }
    return t;
}

SparseVector CochainSpace::from_cochain(const Cochain& c) const {
    if (c.degree != degree_) throw DimensionMismatch("cochain degree mismatch");
    SparseAccumulator acc;
    const std::size_t md = module_dim();
    for (const auto& [tuple, v] : c.values) {
        if (tuple.size() != static_cast<std::size_t>(degree_)) throw InvalidInput("cochain tuple has the wrong length");
        std::vector<std::size_t> pos;
        for (std::size_t x : tuple) {
            if (x >= position_.size() || position_[x] < 0) throw InvalidInput("cochain argument outside the source");
            pos.push_back(static_cast<std::size_t>(position_[x]));
        }
        for (std::size_t i = 1; i < pos.size(); ++i)
            if (pos[i - 1] >= pos[i]) throw InvalidInput("cochain tuples must be strictly increasing");
        const std::size_t base = tuple_rank(pos) * md;
        for (const auto& [m, x] : v.entries) {
            if (m >= md) throw InvalidInput("cochain value outside the module");
            acc.add(base + m, x);
        }
    }
    return acc.take();
}

Cochain CochainSpace::to_cochain(const SparseVector& v) const {
    Cochain c;
    c.degree = degree_;
    const std::size_t md = module_dim();
    for (const auto& [idx, x] : v.entries) {
        auto pos = tuple_at(idx / md);
        std::vector<std::size_t> tuple;
        for (std::size_t p : pos) tuple.push_back(source_[p]);
        c.values[tuple].entries.emplace_back(idx % md, x);
    }
    return c;
}

SparseVector CochainSpace::differential(const SparseVector& f) const {
    const std::size_t md = module_dim();
    const bool adjoint = module_ == CoefficientModule::Adjoint;
    SparseAccumulator acc;
    std::vector<std::size_t> u;
    for (const auto& [idx, v] : f.entries) {
        const auto t = tuple_at(idx / md);
        const std::size_t m = idx % md;
        // x_i . f(.. x_i omitted ..)
        if (adjoint) {
            for (std::size_t x = 0; x < source_.size(); ++x) {
                if (std::binary_search(t.begin(), t.end(), x)) continue;
                auto [br, s] = a_->table().lookup(source_[x], m);
                if (br->empty()) continue;
                u = t;
                auto it = u.insert(std::upper_bound(u.begin(), u.end(), x), x);
                const std::size_t base = tuple_rank(u) * md;
                const Rational coef = v * (parity_sign(it - u.begin()) * s);
                for (const auto& [k, c] : br->entries) acc.add(base + k, coef * c);
            }
        }
        // f([x_i, x_j], ...) with the bracket landing on t[r]
        for (std::size_t r = 0; r < t.size(); ++r) {
            std::vector<std::size_t> rest = t;
            rest.erase(rest.begin() + r);
            for (const auto& [p, q, c] : preimages_[t[r]]) {
                if (std::binary_search(rest.begin(), rest.end(), p) || std::binary_search(rest.begin(), rest.end(), q))
                    continue;
                u = rest;
                u.insert(std::upper_bound(u.begin(), u.end(), p), p);
                u.insert(std::upper_bound(u.begin(), u.end(), q), q);
                const std::size_t pp = std::lower_bound(u.begin(), u.end(), p) - u.begin();
                const std::size_t qq = std::lower_bound(u.begin(), u.end(), q) - u.begin();
                acc.add(tuple_rank(u) * md + m, v * c * parity_sign(pp + qq + r));
            }
        }
    }
    return acc.take();
}

SparseRationalMatrix CochainSpace::differential_matrix() const {
    std::vector<SparseVector> cols(dim());
    for (std::size_t i = 0; i < dim(); ++i) cols[i] = differential(SparseVector::unit(i));
    return SparseRationalMatrix::from_columns(next().dim(), cols);
}

SparseVector CochainSpace::act(std::size_t s, const SparseVector& f) const {
    const std::size_t md = module_dim();
    // inv[l]: (z, c) with [b_s, b_z] = c b_l + ..., positions in source.
    std::vector<std::vector<std::pair<std::size_t, Rational>>> inv(source_.size());
    for (std::size_t z = 0; z < source_.size(); ++z) {
        auto [br, sg] = a_->table().lookup(s, source_[z]);
        for (const auto& [l, c] : br->entries) {
            if (position_[l] < 0) throw InvalidInput("acting element does not normalize the cochain source");
            inv[position_[l]].emplace_back(z, c * sg);
        }
    }
    SparseAccumulator acc;
    for (const auto& [idx, v] : f.entries) {
        const auto t = tuple_at(idx / md);
        const std::size_t m = idx % md;
        if (module_ == CoefficientModule::Adjoint) {
            auto [br, sg] = a_->table().lookup(s, m);
            for (const auto& [k, c] : br->entries) acc.add((idx / md) * md + k, v * c * sg);
        }
        for (std::size_t r = 0; r < t.size(); ++r) {
            const std::size_t l = t[r];
            for (const auto& [z, c] : inv[l]) {
                if (z != l && std::binary_search(t.begin(), t.end(), z)) continue;
                std::vector<std::size_t> zt = t;
                zt.erase(zt.begin() + r);
                auto it = zt.insert(std::upper_bound(zt.begin(), zt.end(), z), z);
                const std::size_t at = it - zt.begin();
                // Sorting (zt with l in slot `at`) back to t.
                std::size_t inversions = 0;
                for (std::size_t i = 0; i < zt.size(); ++i) {
                    if (i < at && zt[i] > l) ++inversions;
                    if (i > at && zt[i] < l) ++inversions;
                }
                acc.add(tuple_rank(zt) * md + m, -v * c * parity_sign(inversions));
            }
        }
    }
    return acc.take();
}

std::optional<std::vector<int>> CochainSpace::weights() const {
    auto triple = a_->sl2_triple();
    if (!triple) return std::nullopt;
    std::vector<int> w(a_->dim());
    for (std::size_t j = 0; j < a_->dim(); ++j) {
        auto v = a_->table().bracket(triple->h, j);
        if (v.empty()) continue;
        if (v.size() != 1 || v.entries[0].first != j || v.entries[0].second.get_den() != 1) return std::nullopt;
        w[j] = static_cast<int>(v.entries[0].second.get_num().get_si());
    }
    const std::size_t md = module_dim();
    std::vector<int> out(dim());
    for (std::size_t r = 0; r < tuples_; ++r) {
        int ws = 0;
        for (std::size_t p : tuple_at(r)) ws += w[source_[p]];
        for (std::size_t m = 0; m < md; ++m)
            out[r * md + m] = (module_ == CoefficientModule::Adjoint ? w[m] : 0) - ws;
    }
    return out;
}

SparseRationalMatrix ce_differential(const LieAlgebra& a, int k, CoefficientModule module) {
    std::vector<std::size_t> all(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) all[i] = i;
    return CochainSpace(share(a), all, k, module).differential_matrix();
}

std::size_t max_full_cochain() {
    if (const char* env = std::getenv("LIEFORGE_MAX_FULL_COCHAIN")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InvalidInput("LIEFORGE_MAX_FULL_COCHAIN is not a number");
        }
    }
    return 250000;
}

CohomologyReport cohomology_full(const LieAlgebra& a, int k, CoefficientModule module) {
    std::vector<std::size_t> all(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) all[i] = i;
    CochainSpace space(share(a), all, k, module);
    const std::size_t bound = max_full_cochain();
    if (space.next().dim() > bound)
        throw SizeExceeded("C^" + std::to_string(k + 1) + " has dimension " + std::to_string(space.next().dim()) +
                           ", above the limit " + std::to_string(bound));
    CohomologyReport rep;
    rep.degree = k;
    rep.method = "full";
    rep.dim_c = space.dim();
    rep.dim_z = space.dim() - rank(space.differential_matrix());
    rep.dim_b = k == 0 ? 0 : rank(CochainSpace(share(a), all, k - 1, module).differential_matrix());
    if (rep.dim_b > rep.dim_z) throw VerificationFailure("coboundaries exceed cocycles");
    rep.dim_h = rep.dim_z - rep.dim_b;
    return rep;
}

InvariantCochains invariant_cochain_basis(const LieAlgebra& a, int k) {
    auto triple = a.sl2_triple();
    if (!triple || !a.levi() || a.levi()->semisimple.size() != 3)
        throw InvalidInput("the invariant complex needs a levi split with semisimple part sl2");
    CochainSpace space(share(a), a.levi()->nilradical, k);
    const std::size_t n = space.dim();

    // Only weight-zero cochains can be killed by both e and f.
    std::vector<std::size_t> candidates;
    if (auto w = space.weights()) {
        for (std::size_t i = 0; i < n; ++i)
            if ((*w)[i] == 0) candidates.push_back(i);
    } else {
        candidates.resize(n);
        for (std::size_t i = 0; i < n; ++i) candidates[i] = i;
    }
    std::vector<SparseVector> cols;
    cols.reserve(candidates.size());
    for (std::size_t c : candidates) {
        auto col = space.act(triple->e, SparseVector::unit(c));
        for (const auto& [i, x] : space.act(triple->f, SparseVector::unit(c)).entries) col.entries.emplace_back(n + i, x);
        cols.push_back(std::move(col));
    }
    auto ns = nullspace(SparseRationalMatrix::from_columns(2 * n, cols));

    InvariantCochains out{space, {}, 0};
    for (const auto& v : ns.vectors) {
        SparseVector flat;
        for (const auto& [i, x] : v.entries) flat.entries.emplace_back(candidates[i], x);
        if (!space.act(triple->h, flat).empty()) throw VerificationFailure("invariant cochain is not h-invariant");
        out.basis.push_back(std::move(flat));
    }
    std::vector<std::size_t> all(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) all[i] = i;
    auto nil = decompose_module(a, a.levi()->nilradical);
    auto whole = decompose_module(a, all);
    out.schur_count = equivariant_hom_dimension(wedge_multiplicities(k, nil.multiplicities), whole);
    if (out.schur_count != out.basis.size())
        throw VerificationFailure("invariant cochains: nullspace gives " + std::to_string(out.basis.size()) +
                                  ", multiplicity count gives " + std::to_string(out.schur_count));
    return out;
}

namespace {

std::size_t rank_of(std::size_t ambient, const std::vector<SparseVector>& vs) {
    return rank(SparseRationalMatrix::from_rows(ambient, vs));
}

}  // namespace

CohomologyReport cohomology_invariant(const LieAlgebra& a, int k) {
    auto triple = a.sl2_triple();
    auto cur = invariant_cochain_basis(a, k);
    auto next = cur.space.next();
    std::vector<SparseVector> images;
    for (const auto& v : cur.basis) {
        auto d = cur.space.differential(v);
        if (!next.act(triple->e, d).empty() || !next.act(triple->f, d).empty())
            throw VerificationFailure("the differential does not preserve invariant cochains");
        images.push_back(std::move(d));
    }
    CohomologyReport rep;
    rep.degree = k;
    rep.method = "invariant";
    rep.dim_c = cur.basis.size();
    rep.invariant_cochain_dims[k] = cur.basis.size();
    rep.dim_z = cur.basis.size() - rank_of(next.dim(), images);
    if (k > 0) {
        auto prev = invariant_cochain_basis(a, k - 1);
        rep.invariant_cochain_dims[k - 1] = prev.basis.size();
        std::vector<SparseVector> bounds;
        for (const auto& v : prev.basis) {
            auto d = prev.space.differential(v);
            if (!cur.space.differential(d).empty()) throw VerificationFailure("d o d is not zero");
            bounds.push_back(std::move(d));
        }
        rep.dim_b = rank_of(cur.space.dim(), bounds);
    }
    if (rep.dim_b > rep.dim_z) throw VerificationFailure("coboundaries exceed cocycles");
    rep.dim_h = rep.dim_z - rep.dim_b;
    return rep;
}

// --- Psi ----------------------------------------------------------------------

namespace {

std::size_t first_component(const LieAlgebra& a, const std::string& ns, int level, int index) {
    if (auto i = a.find(make_label(ns, level, index, 1))) return *i;
    if (auto i = a.find(make_label(ns, level, index))) return *i;
    throw InvalidInput("algebra has no label " + make_label(ns, level, index).to_string());
}

void put(Cochain& c, std::size_t i, std::size_t j, std::size_t target, const Rational& x) {
    Rational s = i < j ? x : Rational(-x);
    c.values[{std::min(i, j), std::max(i, j)}] = scaled(SparseVector::unit(target), s);
}

}  // namespace

PsiCocycle build_psi_cocycle(const LieAlgebra& a) {
    auto triple = a.sl2_triple();
    if (!triple || !a.levi()) throw InvalidInput("Psi needs an algebra with an sl2 levi factor");
    const std::size_t x1 = first_component(a, "x", 1, 1), x2 = first_component(a, "x", 1, 2);
    const std::size_t y1 = first_component(a, "y", 1, 1), y2 = first_component(a, "y", 1, 2);
    const std::size_t c = first_component(a, "c", 2, 1);
    PsiCocycle out;
    out.psi.degree = 2;
    put(out.psi, x1, y2, c, 1);
    put(out.psi, x2, y1, c, -1);

    auto shared = share(a);
    CochainSpace two(shared, a.levi()->nilradical, 2);
    auto flat = two.from_cochain(out.psi);
    out.invariant = two.act(triple->e, flat).empty() && two.act(triple->f, flat).empty() &&
                    two.act(triple->h, flat).empty();
    out.closed = two.differential(flat).empty();
    if (!out.invariant || !out.closed) throw NotACocycle("Psi is not an invariant 2-cocycle");
    CochainSpace one(shared, a.levi()->nilradical, 1);
    out.exact = solve(one.differential_matrix(), flat.to_dense(two.dim())).has_value();
    return out;
}

bool maurer_cartan_check(const Cochain& psi, const LieAlgebra& a) {
    if (psi.degree != 2) throw InvalidInput("Maurer-Cartan check needs a 2-cochain");
    const std::size_t n = a.dim();
    auto value = [&](std::size_t i, std::size_t j) -> SparseVector {
        if (i == j) return {};
        auto it = psi.values.find({std::min(i, j), std::max(i, j)});
        if (it == psi.values.end()) return {};
        return i < j ? it->second : scaled(it->second, -1);
    };
    // Triple (a<b<c) -> cyclic sum; only pairs in the support of psi contribute.
    std::map<std::array<std::size_t, 3>, SparseAccumulator> sums;
    for (const auto& [t, v] : psi.values) {
        const std::size_t p = t[0], q = t[1];
        for (std::size_t z = 0; z < n; ++z) {
            if (z == p || z == q) continue;
            SparseAccumulator term;
            for (const auto& [l, x] : v.entries) term.add(value(l, z), x);
            auto w = term.take();
            if (w.empty()) continue;
            std::array<std::size_t, 3> key{p, q, z};
            std::sort(key.begin(), key.end());
            sums[key].add(w, (p < z && z < q) ? -1 : 1);
        }
    }
    for (auto& [k, acc] : sums)
        if (!acc.take().empty()) return false;
    return true;
}

LieAlgebra deform_bracket(const LieAlgebra& a, const Cochain& psi, const Rational& t) {
    if (psi.degree != 2) throw InvalidInput("deformation needs a 2-cochain");
    if (t == 0) return a;
    StructureTable table = a.table();
    for (const auto& [pair, v] : psi.values) table.add(pair[0], pair[1], scaled(v, t));
    LieAlgebra out(table, a.labels());
    require_jacobi(out, "deformed bracket");
    return out;
}

// --- reports --------------------------------------------------------------------

nlohmann::json to_json(const DerivationReport& r) {
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& m : r.outer_basis) {
        nlohmann::json entries = nlohmann::json::array();
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (const auto& [j, x] : m.row(i).entries) entries.push_back({i, j, format_rational(x)});
        basis.push_back(entries);
    }
    return {{"dim_der", r.dim_der},   {"dim_inner", r.dim_inner},     {"dim_outer", r.dim_outer},
            {"is_complete", r.is_complete}, {"method", r.method}, {"outer_basis", basis}};
}

nlohmann::json to_json(const CohomologyReport& r) {
    nlohmann::json j{{"degree", r.degree}, {"dim_C", r.dim_c}, {"dim_Z", r.dim_z},
                     {"dim_B", r.dim_b},   {"dim_H", r.dim_h}, {"method", r.method},
                     {"arithmetic", "exact"}};
    if (!r.invariant_cochain_dims.empty()) {
        nlohmann::json dims = nlohmann::json::object();
        for (const auto& [k, d] : r.invariant_cochain_dims) dims[std::to_string(k)] = d;
        j["invariant_cochain_dims"] = dims;
    }
    return j;
}

}  // namespace lieforge
