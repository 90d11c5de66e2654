#pragma once

#include "lieforge/linalg.hpp"

#include <cstdint>
#include <vector>

namespace lieforge::detail {

// Connected block of the bipartite row/column incidence graph. Elimination
// never mixes blocks, so each one is reduced on its own with local column ids.
struct Block {
    std::vector<std::size_t> cols;  // sorted global column ids
    std::vector<std::size_t> rows;  // global row ids, original order
};

struct BlockSplit {
    std::vector<Block> blocks;
    std::vector<std::size_t> untouched_cols;  // columns no row mentions
    std::vector<std::uint32_t> local;         // global col -> position inside its block
};

BlockSplit split_blocks(const SparseRationalMatrix& m);

}  // namespace lieforge::detail
