#include "lieforge/sl2_rep.hpp"

#include <algorithm>
#include <numeric>

namespace lieforge {

namespace {

Integer falling(int n, int k) {
    Integer r = 1;
    for (int i = 0; i < k; ++i) r *= n - i;
    return r;
}

Integer binomial(int n, int k) {
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

SparseRationalMatrix poly_operator(int degree, const PolyElement& s) {
    std::vector<SparseVector> cols;
    for (int j = 0; j <= degree; ++j) {
        auto img = poisson_bracket(s, PolyElement::monomial(degree, j));
        cols.push_back(SparseVector::from_dense(img.coeffs));
    }
    return SparseRationalMatrix::from_columns(degree + 1, cols);
}

}  // namespace

PolyElement PolyElement::monomial(int degree, int i, const Rational& coefficient) {
    PolyElement p = zero(degree);
    p.coeffs.at(i) = coefficient;
    return p;
}

bool PolyElement::is_zero() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Rational& x) { return x == 0; });
}

PolyElement operator+(const PolyElement& a, const PolyElement& b) {
    if (a.degree() != b.degree()) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        throw DimensionMismatch("adding polynomials of different degree");
    }
    PolyElement out = a;
    for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
    return out;
}

PolyElement operator*(const Rational& s, const PolyElement& a) {
    PolyElement out = a;
    for (auto& c : out.coeffs) c *= s;
    return out;
}

PolyElement partial(const PolyElement& u, int dp, int dq) {
    const int d = u.degree();
    const int nd = d - dp - dq;
    if (nd < 0) return PolyElement::zero(0);
    PolyElement out = PolyElement::zero(nd);
    for (int i = dq; i <= d - dp; ++i) {
        if (u.coeffs[i] == 0) continue;
        out.coeffs[i - dq] = u.coeffs[i] * Rational(falling(d - i, dp) * falling(i, dq));
    }
    return out;
}

PolyElement product(const PolyElement& u, const PolyElement& v) {
    PolyElement out = PolyElement::zero(u.degree() + v.degree());
    for (int i = 0; i <= u.degree(); ++i) {
        if (u.coeffs[i] == 0) continue;
        for (int j = 0; j <= v.degree(); ++j) out.coeffs[i + j] += u.coeffs[i] * v.coeffs[j];
    }
    return out;
}

PolyElement transvectant(int r, const PolyElement& u, const PolyElement& v) {
    const int nd = u.degree() + v.degree() - 2 * r;
    if (r < 0) throw InvalidParameters("transvectant order must be non-negative");
    if (nd < 0 || u.degree() < r || v.degree() < r) return PolyElement::zero(std::max(nd, 0));
    PolyElement out = PolyElement::zero(nd);
    for (int k = 0; k <= r; ++k) {
        Rational c(binomial(r, k));
        if (k % 2) c = -c;
        auto term = product(partial(u, r - k, k), partial(v, k, r - k));
        out = out + c * term;
    }
    return out;
}

PolyElement poisson_bracket(const PolyElement& u, const PolyElement& v) { return transvectant(1, u, v); }

Sl2Polynomials sl2_polynomials() {
    return {PolyElement::monomial(2, 0, Rational(1, 2)), PolyElement::monomial(2, 1, -1),
            PolyElement::monomial(2, 2, Rational(-1, 2))};
}

bool equivariance_check(int r, const PolyElement& u, const PolyElement& v, const PolyElement& s) {
    auto lhs = poisson_bracket(s, transvectant(r, u, v));
    auto rhs = transvectant(r, poisson_bracket(s, u), v) + transvectant(r, u, poisson_bracket(s, v));
    if (lhs.is_zero() && rhs.is_zero()) return true;
    return lhs == rhs;
}

const SparseRationalMatrix& ModuleAction::get(const std::string& name) const {
    for (const auto& [n, m] : generators)
        if (n == name) return m;
    throw InvalidInput("module action has no generator " + name);
}

bool ModuleAction::has(const std::string& name) const {
    return std::any_of(generators.begin(), generators.end(), [&](const auto& g) { return g.first == name; });
}

ModuleAction standard_irreducible(int lambda) {
    if (lambda < 0) throw InvalidParameters("highest weight must be non-negative");
    const std::size_t n = lambda + 1;
    SparseRationalMatrix e(n, n), h(n, n), f(n, n);
    for (int j = 0; j <= lambda; ++j) {
        h.set(j, j, lambda - 2 * j);
        if (j > 0) e.set(j - 1, j, j);
        if (j < lambda) f.set(j + 1, j, lambda - j);
    }
    return {n, {{"e", e}, {"h", h}, {"f", f}}};
}

ModuleAction polynomial_module(int degree) {
    auto s = sl2_polynomials();
    return {static_cast<std::size_t>(degree + 1),
            {{"e", poly_operator(degree, s.e)}, {"h", poly_operator(degree, s.h)}, {"f", poly_operator(degree, s.f)}}};
}

std::vector<std::vector<int>> slm_monomials(int m, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(m, 0);
    // Recursive fill in descending lex order: largest exponent of e_1 first.
    auto rec = [&](auto&& self, int pos, int left) -> void {
        if (pos == m - 1) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (int a = left; a >= 0; --a) {
            cur[pos] = a;
            self(self, pos + 1, left - a);
        }
    };
    rec(rec, 0, k);
    return out;
}

ModuleAction slm_module_action(int m, int k) {
    if (m < 2 || k < 0) throw InvalidParameters("need m >= 2 and k >= 0");
    auto mons = slm_monomials(m, k);
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t i = 0; i < mons.size(); ++i) index[mons[i]] = i;
    const std::size_t n = mons.size();
    auto polar = [&](int i, int j) {
        SparseRationalMatrix op(n, n);
        for (std::size_t c = 0; c < n; ++c) {
            auto a = mons[c];
            if (a[j] == 0) continue;
            Rational coef = a[j];
            --a[j];
            ++a[i];
            op.set(index.at(a), c, op.at(index.at(a), c) + coef);
        }
        return op;
    };
    ModuleAction act{n, {}};
    for (int i = 0; i < m - 1; ++i)
        act.generators.emplace_back("H_" + std::to_string(i + 1), polar(i, i) - polar(i + 1, i + 1));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (i != j) act.generators.emplace_back("E_" + std::to_string(i + 1) + std::to_string(j + 1), polar(i, j));
    return act;
}

bool verify_sl2_relations(const ModuleAction& a) {
    const auto &e = a.get("e"), &h = a.get("h"), &f = a.get("f");
    return commutator(h, e) == Rational(2) * e && commutator(h, f) == Rational(-2) * f && commutator(e, f) == h;
}

bool verify_slm_relations(const ModuleAction& a, int m) {
    const std::size_t n = a.dim;
    auto E = [&](int i, int j) -> const SparseRationalMatrix& {
        return a.get("E_" + std::to_string(i) + std::to_string(j));
    };
    auto H = [&](int i) -> const SparseRationalMatrix& { return a.get("H_" + std::to_string(i)); };
    auto pairing = [](int h, int i) { return (h == i ? 1 : 0) - (h + 1 == i ? 1 : 0); };
    SparseRationalMatrix zero(n, n);
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j) {
            if (i == j) continue;
            for (int hh = 1; hh < m; ++hh)
                if (commutator(H(hh), E(i, j)) != Rational(pairing(hh, i) - pairing(hh, j)) * E(i, j)) return false;
            for (int k = 1; k <= m; ++k)
                for (int l = 1; l <= m; ++l) {
                    if (k == l) continue;
                    SparseRationalMatrix expect = zero;
                    if (j == k && i != l) expect = expect + E(i, l);
                    if (l == i && k != j) expect = expect - E(k, j);
                    if (j == k && i == l) {
                        // [E_ij, E_ji] = E_ii - E_jj = sum of H between them, with sign.
                        int lo = std::min(i, j), hi = std::max(i, j);
                        for (int t = lo; t < hi; ++t) expect = expect + Rational(i < j ? 1 : -1) * H(t);
                    }
                    if (commutator(E(i, j), E(k, l)) != expect) return false;
                }
        }
    for (int x = 1; x < m; ++x)
        for (int y = 1; y < m; ++y)
            if (!is_zero(commutator(H(x), H(y)))) return false;
    return true;
}

std::size_t DecompositionReport::total_dim() const {
    std::size_t t = 0;
    for (const auto& [l, m] : multiplicities) t += m * (l + 1);
    return t;
}

DecompositionReport decompose_weights(const std::vector<int>& weights) {
    std::map<int, long> count;
    for (int w : weights) ++count[w];
    DecompositionReport r;
    for (const auto& [w, c] : count) {
        if (w < 0) continue;
        long above = count.count(w + 2) ? count.at(w + 2) : 0;
        long m = c - above;
        if (m < 0) throw InvalidInput("weight multiset is not that of an sl2-module");
        if (m > 0) r.multiplicities[w] = static_cast<std::size_t>(m);
    }
    if (r.total_dim() != weights.size()) throw InvalidInput("weight multiset is not that of an sl2-module");
    return r;
}

DecompositionReport clebsch_gordan(int n, int m) {
    if (n < m) std::swap(n, m);
    if (m < 0) throw InvalidParameters("highest weights must be non-negative");
    DecompositionReport r;
    for (int k = 0; k <= m; ++k) r.multiplicities[n + m - 2 * k] += 1;
    return r;
}

DecompositionReport wedge2_closed_form(int n) {
    if (n < 0) throw InvalidParameters("highest weight must be non-negative");
    DecompositionReport r;
    for (int k = 1; 2 * n + 2 - 4 * k >= 0; ++k) r.multiplicities[2 * n + 2 - 4 * k] += 1;
    return r;
}

std::vector<int> module_weights(const std::map<int, std::size_t>& module) {
    std::vector<int> w;
    for (const auto& [l, m] : module)
        for (std::size_t c = 0; c < m; ++c)
            for (int x = l; x >= -l; x -= 2) w.push_back(x);
    return w;
}

DecompositionReport wedge_multiplicities(int k, const std::map<int, std::size_t>& module) {
    if (k < 0) throw InvalidParameters("wedge degree must be non-negative");
    auto weights = module_weights(module);
    // counts[j][w]: number of j-element subsets with weight sum w.
    std::vector<std::map<int, Integer>> counts(k + 1);
    counts[0][0] = 1;
    for (int w : weights)
        for (int j = k; j >= 1; --j)
            for (const auto& [s, c] : counts[j - 1]) counts[j][s + w] += c;
    DecompositionReport r;
    Integer total = 0;
    for (const auto& [s, c] : counts[k]) {
        if (s < 0) continue;
        Integer above = counts[k].count(s + 2) ? counts[k].at(s + 2) : Integer(0);
        Integer m = c - above;
        if (m > 0) r.multiplicities[s] = m.get_ui();
    }
    return r;
}

DecompositionReport decompose_action(const ModuleAction& a) {
    if (!verify_sl2_relations(a)) throw InvalidInput("matrices do not satisfy the sl2 relations");
    const std::size_t n = a.dim;
    const auto &e = a.get("e"), &h = a.get("h");
    auto shifted_h = [&](int lambda) { return h - Rational(lambda) * SparseRationalMatrix::identity(n); };
    std::map<int, std::size_t> kernel;
    std::size_t found = 0;
    for (int l = -static_cast<int>(n); l <= static_cast<int>(n); ++l) {
        std::size_t k = n - rank(shifted_h(l));
        if (k) kernel[l] = k;
        found += k;
    }
    if (found != n) throw NonDiagonalizable("h does not act semisimply with integral weights");
    std::vector<int> weights;
    for (const auto& [l, k] : kernel) weights.insert(weights.end(), k, l);
    DecompositionReport r = decompose_weights(weights);
    for (const auto& [l, m] : r.multiplicities) {
        std::vector<SparseVector> rows;
        for (std::size_t i = 0; i < n; ++i) rows.push_back(e.row(i));
        auto hl = shifted_h(l);
        for (std::size_t i = 0; i < n; ++i) rows.push_back(hl.row(i));
        auto ns = nullspace(SparseRationalMatrix::from_rows(n, rows));
        if (ns.dimension != m) throw NonDiagonalizable("highest-weight space has the wrong dimension");
        for (auto& v : ns.vectors) r.highest_weight_vectors.emplace_back(l, std::move(v));
    }
    return r;
}

ModuleAction restricted_action(const LieAlgebra& a, const std::vector<std::size_t>& target) {
    auto triple = a.sl2_triple();
    if (!triple) throw InvalidInput("algebra has no identified sl2 triple");
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < target.size(); ++i) pos[target[i]] = i;
    auto restrict_op = [&](std::size_t s) {
        std::vector<SparseVector> cols;
        for (std::size_t t : target) {
            SparseVector img;
            for (const auto& [k, x] : a.table().bracket(s, t).entries) {
                auto it = pos.find(k);
                if (it == pos.end()) throw InvalidInput("target is not closed under the sl2 action");
                img.entries.emplace_back(it->second, x);
            }
            std::sort(img.entries.begin(), img.entries.end(),
                      [](const auto& x, const auto& y) { return x.first < y.first; });
            cols.push_back(std::move(img));
        }
        return SparseRationalMatrix::from_columns(target.size(), cols);
    };
    return {target.size(), {{"e", restrict_op(triple->e)}, {"h", restrict_op(triple->h)}, {"f", restrict_op(triple->f)}}};
}

DecompositionReport decompose_module(const LieAlgebra& a, const std::vector<std::size_t>& target) {
    return decompose_action(restricted_action(a, target));
}

std::size_t equivariant_hom_dimension(const DecompositionReport& a, const DecompositionReport& b) {
    std::size_t total = 0;
    for (const auto& [l, m] : a.multiplicities) {
        auto it = b.multiplicities.find(l);
        if (it != b.multiplicities.end()) total += m * it->second;
    }
    return total;
}

}  // namespace lieforge
