// Multi-modular elimination: rank over word-size primes, and a certified
// nullspace via CRT + rational reconstruction with exact verification.

#include "blocks.hpp"
#include "lieforge/errors.hpp"
#include "lieforge/linalg.hpp"

#include <algorithm>
#include <map>

namespace lieforge {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 pow_mod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mul_mod(r, a, p);
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL})
        if (n % q == 0) return n == q;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s && composite; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) composite = false;
        }
        if (composite) return false;
    }
    return true;
}

// Deterministic sequence of primes just below 2^62.
class PrimeStream {
public:
    u64 next() {
        do {
            cursor_ -= 2;
        } while (!is_prime(cursor_));
        return cursor_;
    }

private:
    u64 cursor_ = (1ULL << 62) + 1;
};

constexpr std::size_t kMaxPrimeAttempts = 200;

u64 reduce_integer(const Integer& z, u64 p) {
    u64 r = mpz_fdiv_ui(z.get_mpz_t(), p);
    return r;
}

using ModRow = std::vector<std::pair<std::uint32_t, u64>>;

// Returns false if some denominator vanishes mod p.
bool to_mod_row(const SparseVector& v, const std::vector<std::uint32_t>& local, u64 p, ModRow& out) {
    out.clear();
    for (const auto& [c, x] : v.entries) {
        u64 den = reduce_integer(x.get_den(), p);
        if (den == 0) return false;
        u64 num = reduce_integer(x.get_num(), p);
        if (num == 0) continue;
        out.emplace_back(local[c], mul_mod(num, pow_mod(den, p - 2, p), p));
    }
    return true;
}

class ModEchelon {
public:
    ModEchelon(std::size_t cols, u64 p) : p_(p), pivot_(cols, -1) {}

    void insert(ModRow r) {
        while (!r.empty()) {
            long k = pivot_[r.front().first];
            if (k < 0) {
                u64 inv = pow_mod(r.front().second, p_ - 2, p_);
                for (auto& e : r) e.second = mul_mod(e.second, inv, p_);
                pivot_[r.front().first] = static_cast<long>(rows_.size());
                rows_.push_back(std::move(r));
                return;
            }
            eliminate(r, 0, rows_[k]);
        }
    }

    std::size_t rank() const { return rows_.size(); }

    // Fully reduced rows sorted by pivot column.
    std::vector<ModRow> rref() {
        std::vector<std::size_t> order(rows_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return rows_[a].front().first > rows_[b].front().first; });
        for (std::size_t idx : order) {
            ModRow& r = rows_[idx];
            std::size_t pos = 1;
            while (pos < r.size()) {
                long k = pivot_[r[pos].first];
                if (k >= 0)
                    eliminate(r, pos, rows_[k]);
                else
                    ++pos;
            }
        }
        std::vector<ModRow> out;
        for (auto it = order.rbegin(); it != order.rend(); ++it) out.push_back(rows_[*it]);
        return out;
    }

private:
    // r <- r - r[pos] * q, where q has leading 1 in r[pos]'s column.
    void eliminate(ModRow& r, std::size_t pos, const ModRow& q) {
        u64 f = p_ - r[pos].second;
        ModRow out;
        out.reserve(r.size() + q.size());
        for (std::size_t i = 0; i < pos; ++i) out.push_back(r[i]);
        std::size_t i = pos + 1, j = 1;
        while (i < r.size() || j < q.size()) {
            if (j == q.size() || (i < r.size() && r[i].first < q[j].first)) {
                out.push_back(r[i++]);
            } else if (i == r.size() || q[j].first < r[i].first) {
                out.emplace_back(q[j].first, mul_mod(q[j].second, f, p_));
                ++j;
            } else {
                u64 s = r[i].second + mul_mod(q[j].second, f, p_);
                if (s >= p_) s -= p_;
                if (s) out.emplace_back(r[i].first, s);
                ++i;
                ++j;
            }
        }
        r = std::move(out);
    }

    u64 p_;
    std::vector<long> pivot_;
    std::vector<ModRow> rows_;
};

// Rank of one block mod p, or nullopt if p hits a denominator.
std::optional<std::vector<ModRow>> block_rref_mod(const SparseRationalMatrix& m, const detail::Block& b,
                                                  const std::vector<std::uint32_t>& local, u64 p) {
    ModEchelon e(b.cols.size(), p);
    ModRow row;
    for (std::size_t r : b.rows) {
        if (!to_mod_row(m.row(r), local, p, row)) return std::nullopt;
        e.insert(row);
    }
    return e.rref();
}

// Wang's rational reconstruction of u mod m with |num|, den <= sqrt(m/2).
std::optional<Rational> reconstruct(const Integer& u, const Integer& m) {
    Integer bound = sqrt(m / 2);
    Integer r0 = m, r1 = u, t0 = 0, t1 = 1, q, tmp;
    while (r1 > bound) {
        q = r0 / r1;
        tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (t1 == 0 || abs(t1) > bound || gcd(r1, t1) != 1) return std::nullopt;
    Rational out(r1, t1);
    out.canonicalize();
    return out;
}

struct PrimeImage {
    u64 p;
    std::vector<std::uint32_t> pivots;
    std::map<std::pair<std::uint32_t, std::uint32_t>, u64> entries;  // (pivot, free col) -> value
};

PrimeImage make_image(u64 p, const std::vector<ModRow>& rows) {
    PrimeImage img{p, {}, {}};
    for (const auto& r : rows) {
        img.pivots.push_back(r.front().first);
        for (std::size_t k = 1; k < r.size(); ++k) img.entries[{r.front().first, r[k].first}] = r[k].second;
    }
    return img;
}

bool verify_block(const SparseRationalMatrix& m, const detail::Block& b, const std::vector<std::uint32_t>& local,
                  const std::vector<SparseVector>& vecs) {
    std::vector<Rational> dense(b.cols.size());
    for (const auto& v : vecs) {
        for (const auto& [c, x] : v.entries) dense[c] = x;
        for (std::size_t r : b.rows) {
            Rational s = 0;
            for (const auto& [c, x] : m.row(r).entries) s += x * dense[local[c]];
            if (s != 0) return false;
        }
        for (const auto& [c, x] : v.entries) dense[c] = 0;
    }
    return true;
}

// Local-coordinate nullspace vectors from the reconstructed RREF, or nullopt.
std::optional<std::vector<SparseVector>> lift(const std::vector<const PrimeImage*>& imgs, std::size_t ncols) {
    Integer modulus = 1;
    for (const auto* img : imgs) modulus *= Integer(std::to_string(img->p));
    const auto& pivots = imgs.front()->pivots;
    std::vector<char> is_pivot(ncols, 0);
    for (auto c : pivots) is_pivot[c] = 1;

    std::map<std::pair<std::uint32_t, std::uint32_t>, char> keys;
    for (const auto* img : imgs)
        for (const auto& [k, v] : img->entries) keys[k] = 1;

    std::vector<SparseVector> vecs(ncols);
    for (const auto& [key, unused] : keys) {
        // CRT by incremental Garner-style combination.
        Integer value = 0, mod = 1;
        for (const auto* img : imgs) {
            auto it = img->entries.find(key);
            u64 r = it == img->entries.end() ? 0 : it->second;
            Integer p(std::to_string(img->p));
            Integer cur = value % p;
            Integer diff = (Integer(std::to_string(r)) - cur) % p;
            if (diff < 0) diff += p;
            Integer inv;
            Integer mod_p = mod % p;
            mpz_invert(inv.get_mpz_t(), mod_p.get_mpz_t(), p.get_mpz_t());
            Integer t = (diff * inv) % p;
            value += mod * t;
            mod *= p;
        }
        auto q = reconstruct(value, modulus);
        if (!q) return std::nullopt;
        if (*q != 0) vecs[key.second].entries.emplace_back(key.first, -*q);
    }
    std::vector<SparseVector> out;
    for (std::size_t f = 0; f < ncols; ++f) {
        if (is_pivot[f]) continue;
        SparseVector v = std::move(vecs[f]);
        v.entries.emplace_back(f, Rational(1));
        std::sort(v.entries.begin(), v.entries.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

ModularRank rank_modular(const SparseRationalMatrix& m, std::size_t confidence) {
    if (confidence == 0) throw InvalidParameters("rank_modular needs at least one prime");
    auto split = detail::split_blocks(m);
    ModularRank result;
    PrimeStream primes;
    std::size_t attempts = 0;
    while (result.primes.size() < confidence) {
        if (++attempts > kMaxPrimeAttempts) throw PrimeExhaustion("no usable prime found for rank_modular");
        u64 p = primes.next();
        std::size_t r = 0;
        bool usable = true;
        for (const auto& b : split.blocks) {
            auto rows = block_rref_mod(m, b, split.local, p);
            if (!rows) {
                usable = false;
                break;
            }
            r += rows->size();
        }
        if (!usable) continue;
        result.primes.push_back(p);
        result.rank = std::max(result.rank, r);
    }
    return result;
}

CertifiedNullspace nullspace_certified(const SparseRationalMatrix& m) {
    constexpr std::size_t kMaxPrimes = 40;
    auto split = detail::split_blocks(m);
    CertifiedNullspace result;
    std::vector<std::pair<std::size_t, SparseVector>> keyed;
    for (std::size_t c : split.untouched_cols) keyed.emplace_back(c, SparseVector::unit(c));

    for (const auto& b : split.blocks) {
        PrimeStream primes;
        std::vector<PrimeImage> images;
        std::optional<std::vector<SparseVector>> found;
        std::size_t attempts = 0;
        while (!found && images.size() < kMaxPrimes && attempts < kMaxPrimeAttempts) {
            ++attempts;
            u64 p = primes.next();
            auto rows = block_rref_mod(m, b, split.local, p);
            if (!rows) continue;
            images.push_back(make_image(p, *rows));
            if (images.size() < 2) continue;
            // Keep the primes agreeing with the largest-rank, lexicographically first pivot set.
            const PrimeImage* best = &images.front();
            for (const auto& img : images)
                if (img.pivots.size() > best->pivots.size() ||
                    (img.pivots.size() == best->pivots.size() && img.pivots < best->pivots))
                    best = &img;
            std::vector<const PrimeImage*> group;
            for (const auto& img : images)
                if (img.pivots == best->pivots) group.push_back(&img);
            auto vecs = lift(group, b.cols.size());
            if (vecs && verify_block(m, b, split.local, *vecs)) found = std::move(vecs);
        }
        result.primes_used = std::max(result.primes_used, images.size());
        if (!found) {
            // Reconstruction did not stabilize; eliminate this block exactly.
            result.exact_fallback = true;
            std::vector<SparseVector> rows;
            for (std::size_t r : b.rows) {
                SparseVector v;
                for (const auto& [c, x] : m.row(r).entries) v.entries.emplace_back(split.local[c], x);
                rows.push_back(std::move(v));
            }
            found = nullspace(SparseRationalMatrix::from_rows(b.cols.size(), std::move(rows))).vectors;
        }
        for (auto& v : *found) {
            SparseVector g;
            std::size_t free_col = 0;
            for (const auto& [c, x] : v.entries) g.entries.emplace_back(b.cols[c], x);
            // The free column is the one entry equal to 1 that is not a pivot; it is
            // the largest index in the vector because pivots precede their free columns.
            free_col = g.entries.back().first;
            keyed.emplace_back(free_col, std::move(g));
        }
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    result.basis.dimension = keyed.size();
    for (auto& [c, v] : keyed) result.basis.vectors.push_back(std::move(v));
    return result;
}

}  // namespace lieforge
