#include "blocks.hpp"

#include <numeric>

namespace lieforge::detail {

namespace {

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b)
            parent[b] = a;
        else
            parent[a] = b;
    }
};

}  // namespace

BlockSplit split_blocks(const SparseRationalMatrix& m) {
    const std::size_t n = m.cols();
    DisjointSets sets(n);
    std::vector<char> used(n, 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto& e = m.row(r).entries;
        if (e.empty()) continue;
        used[e.front().first] = 1;
        for (std::size_t k = 1; k < e.size(); ++k) {
            used[e[k].first] = 1;
            sets.unite(e.front().first, e[k].first);
        }
    }

    BlockSplit split;
    split.local.assign(n, 0);
    std::vector<std::size_t> block_of_root(n, SIZE_MAX);
    for (std::size_t c = 0; c < n; ++c) {
        if (!used[c]) {
            split.untouched_cols.push_back(c);
            continue;
        }
        std::size_t root = sets.find(c);
        if (block_of_root[root] == SIZE_MAX) {
            block_of_root[root] = split.blocks.size();
            split.blocks.emplace_back();
        }
        auto& b = split.blocks[block_of_root[root]];
        split.local[c] = static_cast<std::uint32_t>(b.cols.size());
        b.cols.push_back(c);
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto& e = m.row(r).entries;
        if (e.empty()) continue;
        split.blocks[block_of_root[sets.find(e.front().first)]].rows.push_back(r);
    }
    return split;
}

}  // namespace lieforge::detail
