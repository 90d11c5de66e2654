#include "lieforge/constructors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace lieforge {

namespace {

using Terms = std::vector<std::pair<BasisLabel, Rational>>;

// Bracket table keyed by labels. set() refuses to overwrite a different value,
// which also catches inconsistent antisymmetric pairs from the index formulas.
class TableBuilder {
public:
    std::size_t add(const BasisLabel& l) {
        if (!index_.emplace(l, labels_.size()).second) throw std::logic_error("duplicate label " + l.to_string());
        labels_.push_back(l);
        return labels_.size() - 1;
    }
    std::size_t at(const BasisLabel& l) const {
        auto it = index_.find(l);
        if (it == index_.end()) throw std::logic_error("unknown label " + l.to_string());
        return it->second;
    }

    void set(const BasisLabel& a, const BasisLabel& b, const Terms& v) {
        auto [key, vec] = normalize(a, b, v);
        if (!key) return;
        auto [it, fresh] = br_.emplace(*key, vec);
        if (!fresh && it->second != vec)
            throw std::logic_error("conflicting products for " + a.to_string() + ", " + b.to_string());
    }
    void accumulate(const BasisLabel& a, const BasisLabel& b, const Terms& v) {
        auto [key, vec] = normalize(a, b, v);
        if (!key) return;
        add_scaled(br_[*key], vec, 1);
    }

    LieAlgebra finish() const {
        StructureTable t(labels_.size());
        for (const auto& [k, v] : br_) t.set(k.first, k.second, v);
        return LieAlgebra(std::move(t), labels_);
    }

private:
    std::pair<std::optional<std::pair<std::size_t, std::size_t>>, SparseVector> normalize(const BasisLabel& a,
                                                                                          const BasisLabel& b,
                                                                                          const Terms& v) const {
        std::size_t i = at(a), j = at(b);
        SparseAccumulator acc;
        for (const auto& [l, x] : v) acc.add(at(l), x);
        SparseVector vec = acc.take();
        if (i == j) {
            if (!vec.empty()) throw std::logic_error("nonzero self-bracket for " + a.to_string());
            return {std::nullopt, {}};
        }
        if (i > j) {
            std::swap(i, j);
            vec = scaled(vec, -1);
        }
        return {std::make_pair(i, j), vec};
    }

    std::vector<BasisLabel> labels_;
    std::map<BasisLabel, std::size_t> index_;
    std::map<std::pair<std::size_t, std::size_t>, SparseVector> br_;
};

BasisLabel L(const std::string& ns, int level, int index) { return make_label(ns, level, index); }
// Layer k of the x-chain; layer 2 is z.
BasisLabel X(int k, int i) { return k == 2 ? L("z", 2, i) : L("x", k, i); }
BasisLabel Y(int k, int i) { return L("y", k, i); }
const BasisLabel C = make_label("c", 2, 1);

void require_odd(int n) {
    if (n < 5) throw InvalidParameters("n must be odd and at least 5");
    if (n % 2 == 0) throw EvenN(n);
}

void add_model_labels(TableBuilder& t, int n, bool third_pair) {
    const std::vector<std::string> gens = third_pair ? std::vector<std::string>{"x", "y", "m"}
                                                     : std::vector<std::string>{"x", "y"};
    for (const auto& g : gens)
        for (int i = 1; i <= 2; ++i) t.add(L(g, 1, i));
    t.add(C);
    for (int i = 1; i <= 3; ++i) t.add(L("z", 2, i));
    if (third_pair)
        for (int i = 1; i <= 3; ++i) t.add(L("d", 2, i));
    for (int k = 3; k <= n; ++k)
        for (const auto& g : gens)
            for (int i = 1; i <= k + 1; ++i) t.add(L(g, k, i));
}

// Products shared by the two-pair and three-pair nilradicals.
void add_model_products(TableBuilder& t, int n) {
    t.set(X(1, 1), X(1, 2), {{C, 1}});
    t.set(Y(1, 1), Y(1, 2), {{C, 1}});
    for (int j = 1; j <= 2; ++j) {
        for (int i = 1; i <= 2; ++i) t.set(X(1, j), Y(1, i), {{X(2, i + j - 1), 1}});
        for (int i = 1; i <= 3; ++i) {
            t.set(X(1, j), X(2, i), {{X(3, i + j - 1), 1}});
            t.set(Y(1, j), X(2, i), {{Y(3, i + j - 1), 1}});
        }
        for (int k = 4; k <= n - 1; ++k)
            for (int i = 1; i <= k; ++i) {
                t.set(X(1, j), X(k - 1, i), {{X(k, i + j - 1), 1}});
                t.set(Y(1, j), Y(k - 1, i), {{Y(k, i + j - 1), 1}});
            }
        for (int i = 1; i <= n; ++i) {
            t.set(X(1, j), X(n - 1, i), {{X(n, i + j - 1), 1}});
            t.set(Y(1, j), X(n - 1, i), {{Y(n, i + j - 1), 1}});
        }
    }
    for (int j = 1; j <= 3; ++j)
        for (int i = 1; i <= n - 1; ++i) t.set(X(2, j), X(n - 2, i), {{Y(n, i + j - 1), -1}});
    for (int p = 3; p <= (n - 1) / 2; ++p) {
        const int sign = p % 2 == 1 ? 1 : -1;
        for (int j = 1; j <= p + 1; ++j)
            for (int i = 1; i <= n - p + 1; ++i) t.set(X(p, j), X(n - p, i), {{Y(n, i + j - 1), sign}});
    }
}

TableBuilder model_builder(int n) {
    TableBuilder t;
    add_model_labels(t, n, false);
    add_model_products(t, n);
    return t;
}

// Rewrites every non-semisimple label with the given copy tag.
LieAlgebra with_copy(const LieAlgebra& a, int copy) {
    auto labels = a.labels();
    for (auto& l : labels)
        if (l.ns.rfind("sl", 0) != 0) l.copy = copy;
    return LieAlgebra(a.table(), std::move(labels));
}

std::vector<std::size_t> indices_where(const LieAlgebra& a, const std::function<bool(const BasisLabel&)>& pred) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < a.dim(); ++i)
        if (pred(a.labels()[i])) out.push_back(i);
    return out;
}

bool is_generator(const BasisLabel& l) { return (l.ns == "x" || l.ns == "y") && l.level == 1; }

std::vector<SparseRationalMatrix> to_action_list(const ModuleAction& act, const std::vector<std::string>& order) {
    std::vector<SparseRationalMatrix> out;
    for (const auto& name : order) out.push_back(act.get(name));
    return out;
}

}  // namespace

LieAlgebra sl2_algebra() {
    TableBuilder t;
    BasisLabel e = make_label("sl2-e", std::nullopt, 1), h = make_label("sl2-h", std::nullopt, 1),
               f = make_label("sl2-f", std::nullopt, 1);
    t.add(e);
    t.add(h);
    t.add(f);
    t.set(h, e, {{e, 2}});
    t.set(h, f, {{f, -2}});
    t.set(e, f, {{h, 1}});
    return t.finish();
}

LieAlgebra model_nilradical_table(int n) {
    if (n < 5) throw InvalidParameters("n must be at least 5");
    return model_builder(n).finish();
}

LieAlgebra build_model_nilradical(int n) {
    require_odd(n);
    auto a = model_builder(n).finish();
    require_jacobi(a, "model nilradical");
    return a;
}

LieAlgebra build_three_gen_nilradical(int n) {
    require_odd(n);
    TableBuilder t;
    add_model_labels(t, n, true);
    add_model_products(t, n);
    auto M = [](int k, int i) { return L("m", k, i); };
    auto D = [](int i) { return L("d", 2, i); };
    t.set(M(1, 1), M(1, 2), {{C, 1}});
    for (int j = 1; j <= 2; ++j) {
        for (int i = 1; i <= 2; ++i) t.set(Y(1, i), M(1, j), {{D(i + j - 1), 1}});
        for (int i = 1; i <= 3; ++i) {
            t.set(Y(1, j), D(i), {{Y(3, i + j - 1), 1}});
            t.set(M(1, j), D(i), {{M(3, i + j - 1), 1}});
        }
        for (int k = 4; k <= n - 1; ++k)
            for (int i = 1; i <= k; ++i) t.set(M(1, j), M(k - 1, i), {{M(k, i + j - 1), 1}});
        // The m^n layer is fed from the y-chain.
        for (int i = 1; i <= n; ++i) {
            t.set(X(1, j), Y(n - 1, i), {{M(n, i + j - 1), -1}});
            t.set(M(1, j), Y(n - 1, i), {{M(n, i + j - 1), 1}});
        }
    }
    for (int j = 1; j <= 3; ++j)
        for (int i = 1; i <= n - 1; ++i) {
            t.set(X(2, j), Y(n - 2, i), {{M(n, i + j - 1), -1}});
            t.set(D(j), Y(n - 2, i), {{M(n, i + j - 1), -1}});
        }
    for (int p = 3; p <= (n - 1) / 2; ++p) {
        const int sign = p % 2 == 1 ? 1 : -1;
        for (int j = 1; j <= p + 1; ++j)
            for (int i = 1; i <= n - p + 1; ++i) t.set(Y(p, j), Y(n - p, i), {{M(n, i + j - 1), sign}});
    }
    auto a = t.finish();
    require_jacobi(a, "three-generator nilradical");
    return a;
}

LieAlgebra build_gn(const GNParams& p) {
    const int n = p.n;
    require_odd(n);
    TableBuilder t = model_builder(n);
    // Target y^{n-1}_idx; outside 1..n the coefficient has to vanish.
    auto target = [&](int idx, const Rational& coef) -> Terms {
        if (idx < 1 || idx > n) {
            if (coef != 0) throw std::logic_error("nonzero coefficient on a missing basis vector");
            return {};
        }
        if (coef == 0) return {};
        return {{Y(n - 1, idx), coef}};
    };
    for (int j = 1; j <= 2; ++j)
        for (int i = 1; i <= n + 1; ++i) {
            Rational u = (i - 1) - (j - 1) * n;
            t.set(X(1, j), Y(n, i), target(i + j - 2, p.a * u));
            t.set(Y(1, j), X(n, i), target(i + j - 2, -p.b * u));
        }
    for (int q = 2; q <= (n - 1) / 2 + 1; ++q) {
        const Rational scale = Rational((q - 1) * p.a + p.b) / q;
        const int sign = q % 2 == 0 ? 1 : -1;
        for (int j = 1; j <= q + 1; ++j)
            for (int i = 1; i <= n - q + 2; ++i) {
                Rational v = sign * ((i - 1) * q - (j - 1) * (n - q + 1));
                t.set(X(q, j), X(n - q + 1, i), target(i + j - 2, scale * v));
            }
    }
    auto a = t.finish();
    require_jacobi(a, "GN nilradical");
    return a;
}

ModuleAction ladder_action(const LieAlgebra& nil) {
    const std::size_t n = nil.dim();
    SparseRationalMatrix e(n, n), h(n, n), f(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        const auto& l = nil.labels()[c];
        if (l.ns == "c") continue;
        if (!l.level) throw InvalidInput("ladder action needs a level on " + l.to_string());
        const int k = *l.level, i = l.index;
        h.set(c, c, k + 2 - 2 * i);
        if (i > 1) {
            BasisLabel up = l;
            up.index = i - 1;
            e.set(nil.index_of(up), c, i - 1);
        }
        if (i < k + 1) {
            BasisLabel down = l;
            down.index = i + 1;
            f.set(nil.index_of(down), c, k + 1 - i);
        }
    }
    return {n, {{"e", e}, {"h", h}, {"f", f}}};
}

LieAlgebra sl2_extension(const LieAlgebra& nil) {
    return semidirect_product(sl2_algebra(), nil, to_action_list(ladder_action(nil), {"e", "h", "f"}));
}

LieAlgebra build_sl2_gn(const GNParams& p) { return sl2_extension(build_gn(p)); }

LieAlgebra build_direct_sum_nilradical(const std::vector<GNParams>& params) {
    if (params.empty()) throw InvalidParameters("need at least one summand");
    for (const auto& p : params)
        if (p.n != params.front().n) throw InvalidParameters("all summands need the same n");
    if (params.size() == 1) return build_gn(params.front());
    LieAlgebra out = with_copy(build_gn(params[0]), 1);
    for (std::size_t s = 1; s < params.size(); ++s)
        out = direct_sum(out, with_copy(build_gn(params[s]), static_cast<int>(s) + 1));
    return out;
}

LieAlgebra build_direct_sum_family(const std::vector<GNParams>& params) {
    return sl2_extension(build_direct_sum_nilradical(params));
}

std::vector<SparseRationalMatrix> extend_to_homomorphism(const LieAlgebra& source,
                                                         const std::vector<std::size_t>& generators,
                                                         const std::vector<SparseRationalMatrix>& images) {
    if (generators.size() != images.size()) throw DimensionMismatch("one image per generator required");
    if (images.empty()) throw InvalidParameters("no generators");
    const std::size_t dim = source.dim();
    // Row echelon over the source with each row carrying its image.
    struct Row {
        SparseVector v;
        SparseRationalMatrix m;
    };
    std::map<std::size_t, Row> rows;
    std::vector<std::size_t> fresh;
    auto insert = [&](SparseVector v, SparseRationalMatrix m) {
        while (!v.empty()) {
            auto it = rows.find(v.entries.front().first);
            if (it == rows.end()) break;
            Rational s = v.entries.front().second;
            add_scaled(v, it->second.v, -s);
            m = m - s * it->second.m;
        }
        if (v.empty()) return;
        Rational lead = v.entries.front().second;
        std::size_t pivot = v.entries.front().first;
        Rational inv = 1 / lead;
        rows.emplace(pivot, Row{scaled(v, inv), inv * m});
        fresh.push_back(pivot);
    };
    for (std::size_t g = 0; g < generators.size(); ++g) insert(SparseVector::unit(generators[g]), images[g]);
    for (std::size_t q = 0; q < fresh.size(); ++q) {
        const std::size_t pivot = fresh[q];
        for (std::size_t g = 0; g < generators.size(); ++g) {
            const Row& r = rows.at(pivot);
            SparseVector w = bracket(source, SparseVector::unit(generators[g]), r.v);
            if (w.empty()) continue;
            insert(std::move(w), commutator(images[g], r.m));
        }
    }
    if (rows.size() != dim) throw VerificationFailure("generators do not span the acting algebra");
    std::vector<SparseRationalMatrix> out(dim);
    for (std::size_t k = dim; k-- > 0;) {
        const Row& r = rows.at(k);
        SparseRationalMatrix m = r.m;
        for (const auto& [l, x] : r.v.entries)
            if (l != k) m = m - x * out[l];
        out[k] = std::move(m);
    }
    return out;
}

LieAlgebra build_tower_nilradical(const TowerSpec& spec) {
    const std::size_t k = spec.components.size();
    if (k < 2) throw InvalidParameters("a tower needs at least two components");
    if (spec.sides.size() != k - 1) throw InvalidParameters("need one side per join");
    for (const auto& p : spec.components)
        if (p.n != spec.components.front().n) throw InvalidParameters("all components need the same n");

    std::vector<LieAlgebra> parts;
    for (std::size_t t = 0; t < k; ++t) parts.push_back(with_copy(build_gn(spec.components[t]), static_cast<int>(t) + 1));

    LieAlgebra rest = parts.back();
    for (std::size_t t = k - 1; t-- > 0;) {
        const LieAlgebra& nt = parts[t];
        if (spec.sides[t] == TowerSide::Right) {
            // The rest acts on N_t: a generator of any component acts as ad of the
            // same-named generator of N_t.
            auto gens = indices_where(rest, is_generator);
            std::vector<SparseRationalMatrix> images;
            for (std::size_t g : gens) {
                BasisLabel own = rest.labels()[g];
                own.copy = static_cast<int>(t) + 1;
                images.push_back(ad_matrix(nt, SparseVector::unit(nt.index_of(own))));
            }
            auto action = extend_to_homomorphism(rest, gens, images);
            rest = semidirect_product(rest, nt, action, BasisOrder::ActedFirst);
        } else {
            // N_t acts on the rest: a generator acts as ad of the sum of the
            // same-named generators of all components on the right.
            auto gens = indices_where(nt, is_generator);
            std::vector<SparseRationalMatrix> images;
            for (std::size_t g : gens) {
                const BasisLabel& own = nt.labels()[g];
                SparseAccumulator sum;
                for (std::size_t i : indices_where(rest, [&](const BasisLabel& l) {
                         return l.ns == own.ns && l.level == own.level && l.index == own.index;
                     }))
                    sum.add(i, 1);
                images.push_back(ad_matrix(rest, sum.take()));
            }
            auto action = extend_to_homomorphism(nt, gens, images);
            rest = semidirect_product(nt, rest, action, BasisOrder::ActingFirst);
        }
    }
    return rest;
}

LieAlgebra build_tower(const TowerSpec& spec) { return sl2_extension(build_tower_nilradical(spec)); }

LieAlgebra slm_algebra(int m) {
    if (m < 2) throw InvalidParameters("m must be at least 2");
    if (m == 2) return sl2_algebra();
    // Basis: H_1..H_{m-1}, then E_ij (i != j) in lexicographic order.
    TableBuilder t;
    std::vector<std::vector<std::vector<int>>> mats;
    auto unit = [&](int i, int j) {
        std::vector<std::vector<int>> a(m, std::vector<int>(m, 0));
        a[i][j] = 1;
        return a;
    };
    std::vector<BasisLabel> labels;
    for (int i = 1; i < m; ++i) {
        auto a = unit(i - 1, i - 1);
        a[i][i] = -1;
        mats.push_back(a);
        labels.push_back(make_label("sl-H", std::nullopt, i));
    }
    std::map<std::pair<int, int>, std::size_t> off;
    for (int i = 1; i <= m; ++i)
        for (int j = 1; j <= m; ++j)
            if (i != j) {
                off[{i, j}] = labels.size();
                mats.push_back(unit(i - 1, j - 1));
                labels.push_back(make_label("sl-E", i, j));
            }
    for (const auto& l : labels) t.add(l);
    for (std::size_t a = 0; a < mats.size(); ++a)
        for (std::size_t b = a + 1; b < mats.size(); ++b) {
            std::vector<std::vector<int>> c(m, std::vector<int>(m, 0));
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    for (int l = 0; l < m; ++l) c[i][j] += mats[a][i][l] * mats[b][l][j] - mats[b][i][l] * mats[a][l][j];
            Terms v;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    if (i != j && c[i][j] != 0) v.emplace_back(labels[off[{i + 1, j + 1}]], c[i][j]);
            // Trace-zero diagonal in terms of H_i: coefficient is the running sum.
            int run = 0;
            for (int i = 0; i + 1 < m; ++i) {
                run += c[i][i];
                if (run != 0) v.emplace_back(labels[i], run);
            }
            t.set(labels[a], labels[b], v);
        }
    return t.finish();
}

LieAlgebra build_slm_quasicyclic(int m, int n) {
    if (m < 2) throw InvalidParameters("m must be at least 2");
    require_odd(n);
    struct Block {
        std::string ns;
        int level, degree;
    };
    std::vector<Block> blocks{{"x", 1, 1}, {"y", 1, 1}, {"z", 2, 2}};
    for (int k = 3; k <= n; ++k) {
        blocks.push_back({"x", k, k});
        blocks.push_back({"y", k, k});
    }
    std::map<int, std::vector<std::vector<int>>> monomials;
    std::map<int, std::map<std::vector<int>, int>> position;
    for (const auto& b : blocks)
        if (!monomials.count(b.degree)) {
            monomials[b.degree] = slm_monomials(m, b.degree);
            for (std::size_t i = 0; i < monomials[b.degree].size(); ++i) position[b.degree][monomials[b.degree][i]] = i + 1;
        }

    TableBuilder t;
    for (const auto& b : blocks)
        for (std::size_t i = 1; i <= monomials[b.degree].size(); ++i) t.add(L(b.ns, b.level, static_cast<int>(i)));

    auto V = [](int k) { return k == 2 ? Block{"z", 2, 2} : Block{"x", k, k}; };
    auto W = [](int k) { return Block{"y", k, k}; };
    auto multiply = [&](const Block& a, const Block& b, const Block& target, int sign) {
        const auto& ma = monomials[a.degree];
        const auto& mb = monomials[b.degree];
        for (std::size_t i = 0; i < ma.size(); ++i)
            for (std::size_t j = 0; j < mb.size(); ++j) {
                std::vector<int> s(m);
                for (int q = 0; q < m; ++q) s[q] = ma[i][q] + mb[j][q];
                t.set(L(a.ns, a.level, static_cast<int>(i) + 1), L(b.ns, b.level, static_cast<int>(j) + 1),
                      {{L(target.ns, target.level, position[target.degree].at(s)), sign}});
            }
    };
    multiply(V(1), W(1), V(2), 1);
    multiply(V(1), V(2), V(3), 1);
    multiply(W(1), V(2), W(3), 1);
    for (int k = 3; k <= n - 1; ++k) multiply(V(1), V(k), V(k + 1), 1);
    for (int k = 3; k <= n - 2; ++k) multiply(W(1), W(k), W(k + 1), 1);
    multiply(W(1), V(n - 1), W(n), 1);
    for (int p = 2; p <= (n - 1) / 2; ++p) multiply(V(p), V(n - p), W(n), p % 2 == 1 ? 1 : -1);
    LieAlgebra nil = t.finish();

    // sl_m acts block-diagonally through the polarization operators.
    std::vector<std::string> names;
    if (m == 2) {
        names = {"E_12", "H_1", "E_21"};
    } else {
        for (int i = 1; i < m; ++i) names.push_back("H_" + std::to_string(i));
        for (int i = 1; i <= m; ++i)
            for (int j = 1; j <= m; ++j)
                if (i != j) names.push_back("E_" + std::to_string(i) + std::to_string(j));
    }
    std::vector<SparseRationalMatrix> action(names.size(), SparseRationalMatrix(nil.dim(), nil.dim()));
    std::size_t offset = 0;
    for (const auto& b : blocks) {
        auto act = slm_module_action(m, b.degree);
        for (std::size_t g = 0; g < names.size(); ++g) {
            const auto& blockop = act.get(names[g]);
            for (std::size_t r = 0; r < blockop.rows(); ++r)
                for (const auto& [c, x] : blockop.row(r).entries) action[g].set(offset + r, offset + c, x);
        }
        offset += act.dim;
    }
    return semidirect_product(slm_algebra(m), nil, action);
}

namespace {

std::size_t factorial(int r) {
    std::size_t out = 1;
    for (int i = 2; i <= r; ++i) out *= i;
    return out;
}

std::vector<std::size_t> block_offsets(const std::vector<int>& weights) {
    std::vector<std::size_t> offset{0};
    for (int w : weights) offset.push_back(offset.back() + w + 1);
    return offset;
}

// [a, b] += coefficient * P_r(a, b) for a in L_i, b in L_j; pairs inside one module are taken once.
void add_component(StructureTable& t, const std::vector<int>& weights, const std::vector<std::size_t>& offset,
                   const BracketComponentSpec& c, const Rational& coefficient) {
    const int li = weights[c.i - 1], lj = weights[c.j - 1];
    for (int a = 0; a <= li; ++a)
        for (int b = (c.i == c.j ? a + 1 : 0); b <= lj; ++b) {
            auto p = transvectant(c.r, PolyElement::monomial(li, a), PolyElement::monomial(lj, b));
            SparseVector v;
            for (std::size_t q = 0; q < p.coeffs.size(); ++q)
                if (p.coeffs[q] != 0) v.entries.emplace_back(offset[c.k - 1] + q, coefficient * p.coeffs[q]);
            if (!v.empty()) t.add(offset[c.i - 1] + a, offset[c.j - 1] + b, v);
        }
}

// Module blocks realized as polynomial spaces; namespaces[i] names block i.
LieAlgebra transvectant_algebra(const std::vector<int>& weights, const std::vector<BracketComponentSpec>& components,
                                const std::vector<std::string>& namespaces) {
    for (int w : weights)
        if (w < 0) throw InvalidParameters("weights must be non-negative");
    for (const auto& c : components) validate_component(weights, c);

    const auto offset = block_offsets(weights);
    std::vector<BasisLabel> labels;
    for (std::size_t i = 0; i < weights.size(); ++i)
        for (int s = 0; s <= weights[i]; ++s) labels.push_back(make_label(namespaces[i], std::nullopt, s + 1));
    const std::size_t nd = offset.back();
    StructureTable t(nd);
    for (const auto& c : components) add_component(t, weights, offset, c, c.coefficient);
    LieAlgebra nil(std::move(t), labels);

    std::vector<SparseRationalMatrix> action(3, SparseRationalMatrix(nd, nd));
    const std::vector<std::string> names{"e", "h", "f"};
    for (std::size_t i = 0; i < weights.size(); ++i) {
        auto act = polynomial_module(weights[i]);
        for (std::size_t g = 0; g < 3; ++g) {
            const auto& op = act.get(names[g]);
            for (std::size_t r = 0; r < op.rows(); ++r)
                for (const auto& [col, x] : op.row(r).entries) action[g].set(offset[i] + r, offset[i] + col, x);
        }
    }
    try {
        return semidirect_product(sl2_algebra(), nil, action);
    } catch (const JacobiFailure& fail) {
        // Report which modules the residuals land in (indices shifted past sl2).
        std::set<std::string> hit;
        for (const auto& v : fail.failures())
            for (const auto& [k, x] : v.residual.entries)
                if (k >= 3) hit.insert(namespaces[std::upper_bound(offset.begin(), offset.end(), k - 3) - offset.begin() - 1]);
        std::string where;
        for (const auto& h : hit) where += (where.empty() ? "" : ", ") + h;
        throw JacobiFailure(std::string(fail.what()) + "; residuals in modules " + where, fail.failures());
    }
}

}  // namespace

void validate_component(const std::vector<int>& weights, const BracketComponentSpec& c) {
    const int s = static_cast<int>(weights.size());
    if (c.i < 1 || c.j < 1 || c.k < 1 || c.i > s || c.j > s || c.k > s)
        throw InvalidParameters("module index out of range");
    const int li = weights[c.i - 1], lj = weights[c.j - 1], lk = weights[c.k - 1];
    if (lk < std::abs(li - lj) || lk > li + lj) throw InvalidParameters("target weight outside the Clebsch-Gordan range");
    if ((li + lj - lk) % 2 != 0) throw InvalidParameters("weights have the wrong parity for a transvectant");
    if (c.r != (li + lj - lk) / 2) throw InvalidParameters("transvectant order does not match the weights");
    if (c.i == c.j && c.r % 2 == 0) throw InvalidParameters("a bracket of a module with itself needs an odd order");
    if (c.coefficient == 0) throw InvalidParameters("component coefficient must be nonzero");
}

BracketComponentSpec component(const std::vector<int>& weights, int i, int j, int k, Rational coefficient) {
    const int s = static_cast<int>(weights.size());
    if (i < 1 || j < 1 || k < 1 || i > s || j > s || k > s) throw InvalidParameters("module index out of range");
    BracketComponentSpec c{i, j, k, (weights[i - 1] + weights[j - 1] - weights[k - 1]) / 2, std::move(coefficient)};
    validate_component(weights, c);
    return c;
}

LieAlgebra build_transvectant_algebra(const std::vector<int>& weights,
                                      const std::vector<BracketComponentSpec>& components) {
    std::vector<std::string> ns;
    for (std::size_t i = 0; i < weights.size(); ++i) ns.push_back("v" + std::to_string(i + 1));
    return transvectant_algebra(weights, components, ns);
}

LieAlgebra build_sl2_heisenberg(int n) {
    if (n < 1) throw InvalidParameters("n must be at least 1");
    const int r = 2 * n - 1;
    const Rational extreme = factorial(r) * factorial(r);  // P_r(p^r, q^r)
    std::vector<int> weights{r, 0};
    return transvectant_algebra(weights, {BracketComponentSpec{1, 1, 2, r, 1 / extreme}}, {"u", "c"});
}

CoefficientSolution solve_bracket_coefficients(const std::vector<int>& weights,
                                               const std::vector<BracketComponentSpec>& components) {
    for (const auto& c : components) validate_component(weights, c);
    const std::size_t s = components.size();
    CoefficientSolution out;
    if (s == 0) {
        out.feasible = true;
        out.method = "all-ones";
        return out;
    }

    // One nilradical table per component with unit coefficient.
    const auto offset = block_offsets(weights);
    std::vector<StructureTable> tables;
    for (const auto& c : components) {
        StructureTable t(offset.back());
        add_component(t, weights, offset, c, 1);
        tables.push_back(std::move(t));
    }
    const std::size_t d = tables.front().dim();

    // quad[{a,b}] (a <= b): Jacobiator coefficient of c_a c_b, keyed by (triple, target).
    std::map<std::pair<std::size_t, std::size_t>, SparseAccumulator> acc;
    for (std::size_t b = 0; b < s; ++b)
        for (std::size_t p = 0; p < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q) {
                const auto& w = tables[b].upper(p, q);
                if (w.empty()) continue;
                for (std::size_t r = 0; r < d; ++r) {
                    if (r == p || r == q) continue;
                    const int sign = (p < r && r < q) ? -1 : 1;
                    std::size_t i = std::min({p, q, r}), k = std::max({p, q, r}), j = p + q + r - i - k;
                    const std::size_t triple = (i * d + j) * d + k;
                    for (std::size_t a = 0; a < s; ++a) {
                        auto& slot = acc[{std::min(a, b), std::max(a, b)}];
                        for (const auto& [wi, wx] : w.entries) {
                            if (wi == r) continue;
                            auto [vec, sg] = tables[a].lookup(r, wi);
                            if (vec->empty()) continue;
                            for (const auto& [t, x] : vec->entries) slot.add(triple * d + t, sign * sg * wx * x);
                        }
                    }
                }
            }
    std::map<std::pair<std::size_t, std::size_t>, SparseVector> quad;
    for (auto& [key, a] : acc) {
        auto v = a.take();
        if (!v.empty()) quad[key] = std::move(v);
    }
    auto residual = [&](const std::vector<Rational>& c) {
        SparseVector r;
        for (const auto& [key, v] : quad) add_scaled(r, v, c[key.first] * c[key.second]);
        return r;
    };
    auto has = [&](std::size_t a, std::size_t b) { return quad.count({std::min(a, b), std::max(a, b)}) > 0; };

    std::vector<Rational> ones(s, 1);
    ++out.assignments_tried;
    if (residual(ones).empty()) {
        out.feasible = true;
        out.coefficients = ones;
        out.method = "all-ones";
        return out;
    }

    std::vector<std::size_t> linear, grid;
    for (std::size_t a = 0; a < s; ++a) {
        bool ok = !has(a, a);
        for (std::size_t b : linear) ok = ok && !has(a, b);
        (ok ? linear : grid).push_back(a);
    }
    const std::vector<Rational> values{1, -1, Rational(1, 2), Rational(-1, 2), 2, -2, Rational(1, 3), Rational(-1, 3), 3, -3};
    const std::size_t cap = 200000;
    std::vector<std::size_t> digit(grid.size(), 0);
    while (out.assignments_tried < cap) {
        std::vector<Rational> c(s, 0);
        for (std::size_t g = 0; g < grid.size(); ++g) c[grid[g]] = values[digit[g]];
        ++out.assignments_tried;

        std::vector<Rational> candidate;
        if (linear.empty()) {
            if (residual(c).empty()) candidate = c;
        } else {
            // residual = r0 + sum over linear a of c_a * col_a
            SparseVector r0 = residual(c);
            std::vector<SparseVector> cols;
            std::map<std::size_t, std::size_t> keys;
            for (const auto& [k, x] : r0.entries) keys.emplace(k, keys.size());
            for (std::size_t a : linear) {
                SparseVector col;
                for (std::size_t b : grid)
                    if (has(a, b)) add_scaled(col, quad.at({std::min(a, b), std::max(a, b)}), c[b]);
                for (const auto& [k, x] : col.entries) keys.emplace(k, keys.size());
                cols.push_back(std::move(col));
            }
            SparseRationalMatrix m(keys.size(), linear.size());
            for (std::size_t a = 0; a < linear.size(); ++a)
                for (const auto& [k, x] : cols[a].entries) m.set(keys.at(k), a, x);
            std::vector<Rational> rhs(keys.size());
            for (const auto& [k, x] : r0.entries) rhs[keys.at(k)] = -x;
            if (auto x0 = solve(m, rhs)) {
                auto kernel = nullspace(m);
                for (int shift = 0; shift < 3 && candidate.empty(); ++shift) {
                    std::vector<Rational> x = *x0;
                    for (std::size_t v = 0; v < kernel.vectors.size(); ++v)
                        for (const auto& [k, y] : kernel.vectors[v].entries) x[k] += Rational(shift * (int(v) + 1)) * y;
                    if (std::all_of(x.begin(), x.end(), [](const Rational& y) { return y != 0; })) {
                        auto trial = c;
                        for (std::size_t a = 0; a < linear.size(); ++a) trial[linear[a]] = x[a];
                        if (residual(trial).empty()) candidate = trial;
                    }
                }
            }
        }
        if (!candidate.empty()) {
            out.feasible = true;
            out.coefficients = candidate;
            out.method = "grid";
            return out;
        }
        std::size_t g = 0;
        while (g < grid.size() && ++digit[g] == values.size()) digit[g++] = 0;
        if (g == grid.size()) break;
    }
    out.method = "infeasible";
    return out;
}

ConditionReport check_angelopoulos_conditions(const std::vector<int>& w) {
    const std::size_t n = w.size();
    if (n < 4) throw InvalidParameters("need at least four modules");
    ConditionReport rep;
    rep.ok = true;
    auto note = [&](bool ok, const std::string& text) {
        rep.lines.push_back((ok ? "ok   " : "FAIL ") + text);
        rep.ok = rep.ok && ok;
    };
    auto V = [](int l) { return "V_" + std::to_string(l); };
    std::set<int> distinct(w.begin(), w.end());
    note(distinct.size() == n, "modules pairwise non-isomorphic");
    note(std::none_of(w.begin(), w.end(), [](int l) { return l == 0; }), "modules non-trivial");
    auto in = [](const DecompositionReport& r, int l) {
        auto it = r.multiplicities.find(l);
        return it != r.multiplicities.end() && it->second > 0;
    };
    const int l1 = w[0], ln = w[n - 1];
    note(in(wedge_multiplicities(2, {{l1, 1}}), w[1]), "wedge^2 " + V(l1) + " contains " + V(w[1]));
    for (std::size_t j = 2; j + 1 < n; ++j)
        note(in(wedge_multiplicities(2, {{w[j], 1}}), ln), "wedge^2 " + V(w[j]) + " contains " + V(ln));
    for (std::size_t j = 1; j + 1 < n; ++j)
        note(in(clebsch_gordan(l1, w[j]), ln), V(l1) + " (x) " + V(w[j]) + " contains " + V(ln));
    note(!in(wedge_multiplicities(3, {{l1, 1}}), ln), "wedge^3 " + V(l1) + " avoids " + V(ln));
    return rep;
}

namespace {

// [L_1,L_1]=L_2, [L_1,L_2]=L_n, [L_j,L_j]=L_n=[L_1,L_j] for 3 <= j <= n-1.
std::vector<BracketComponentSpec> generalized_angelopoulos_products(const std::vector<int>& w) {
    const int n = static_cast<int>(w.size());
    std::vector<BracketComponentSpec> out{component(w, 1, 1, 2), component(w, 1, 2, n)};
    for (int j = 3; j <= n - 1; ++j) {
        out.push_back(component(w, j, j, n));
        out.push_back(component(w, 1, j, n));
    }
    return out;
}

// Fills r with the smallest admissible distinct values when none are given.
std::vector<int> pick_r(std::vector<int> r, std::size_t count, int lo, int hi, const std::set<int>& forbidden) {
    if (r.empty()) {
        for (int v = lo; static_cast<int>(r.size()) < static_cast<int>(count) && v <= hi; ++v)
            if (!forbidden.count(v)) r.push_back(v);
    }
    if (r.size() != count) throw InvalidParameters("expected " + std::to_string(count) + " values of r");
    std::set<int> seen;
    for (int v : r) {
        if (v < lo || v > hi || forbidden.count(v)) throw InvalidParameters("r value " + std::to_string(v) + " out of range");
        if (!seen.insert(v).second) throw InvalidParameters("r values must be pairwise distinct");
    }
    return r;
}

}  // namespace

std::vector<std::string> preset_names() {
    return {"angelopoulos_35", "example_4_2a", "example_4_2b", "example_4_4", "theorem_4_5", "example_4_7", "theorem_4_7"};
}

TransvectantSpec preset_spec(const std::string& name, const PresetParams& p) {
    TransvectantSpec s;
    if (name == "angelopoulos_35") {
        s.weights = {4, 6, 8, 10};
        s.components = generalized_angelopoulos_products(s.weights);
    } else if (name == "example_4_2a" || name == "example_4_2b") {
        const int m = p.m.value_or(4), n = p.n.value_or(4);
        if (m <= 0 || m % 4 != 0) throw InvalidParameters("m must be a positive multiple of 4");
        if (n < 4) throw InvalidParameters("n must be at least 4");
        const bool a = name == "example_4_2a";
        auto r = a ? pick_r(p.r, n - 3, 0, m - 1, {m / 2 - 1}) : pick_r(p.r, n - 3, 0, m + 2, {1, m / 2 + 1});
        s.weights.push_back(a ? m : m + 2);
        s.weights.push_back(a ? 2 * m - 2 : 2 * m + 2);
        for (int v : r) s.weights.push_back(2 * m + 2 * v);
        s.weights.push_back(a ? 3 * m - 2 : 3 * m + 2);
        s.components = generalized_angelopoulos_products(s.weights);
    } else if (name == "example_4_4") {
        s.weights = {0, 6, 6, 8, 10, 14};
        const auto& w = s.weights;
        s.components = {component(w, 1, 2, 3), component(w, 2, 2, 5), component(w, 2, 4, 6),
                        component(w, 2, 5, 6), component(w, 4, 4, 6), component(w, 4, 4, 3)};
    } else if (name == "theorem_4_5" || name == "theorem_4_7") {
        const int n = p.n.value_or(6);
        if (n < 6) throw InvalidParameters("n must be at least 6");
        auto r = pick_r(p.r, n - 6, 4, 1 << 20, {});
        const bool five = name == "theorem_4_5";
        s.weights = five ? std::vector<int>{0, 6, 6, 4, 6, 2} : std::vector<int>{6, 4, 6, 2, 4, 0};
        for (int v : r) s.weights.push_back(2 * v);
        const auto& w = s.weights;
        if (five) {
            s.components = {component(w, 1, 2, 3), component(w, 2, 2, 5), component(w, 2, 4, 6),
                            component(w, 2, 5, 6), component(w, 4, 4, 6), component(w, 4, 4, 3)};
            for (int k = 7; k <= n; ++k) s.components.push_back(component(w, k, k, 6));
        } else {
            s.components = {component(w, 1, 1, 3), component(w, 2, 5, 6), component(w, 1, 2, 4),
                            component(w, 1, 3, 4), component(w, 1, 5, 4), component(w, 2, 2, 4),
                            component(w, 5, 5, 4)};
            for (int k = 7; k <= n; ++k) s.components.push_back(component(w, k, k, 4));
        }
    } else if (name == "example_4_7") {
        s.weights = {0, 6, 4, 6, 2, 2};
        const auto& w = s.weights;
        s.components = {component(w, 2, 2, 4), component(w, 3, 3, 5), component(w, 1, 6, 5),
                        component(w, 2, 4, 5), component(w, 2, 3, 5), component(w, 3, 6, 5)};
    } else {
        throw InvalidParameters("unknown preset " + name);
    }
    return s;
}

LieAlgebra preset(const std::string& name, const PresetParams& params) {
    auto spec = preset_spec(name, params);
    auto sol = solve_bracket_coefficients(spec.weights, spec.components);
    if (sol.feasible)
        for (std::size_t i = 0; i < spec.components.size(); ++i) spec.components[i].coefficient = sol.coefficients[i];
    // With no feasible assignment the unit coefficients go to the gate, which reports the failure.
    return build_transvectant_algebra(spec.weights, spec.components);
}

}  // namespace lieforge
