#pragma once

#include "lieforge/lie_algebra.hpp"

#include <string>
#include <string_view>

namespace lieforge {

// Canonical structure-constant file:
// {"dim":n,"labels":[...],"brackets":[[i,j,[[k,"p/q"],...]],...]} plus a newline.
// Pairs are ascending with i<j, targets ascending, zero brackets omitted.
std::string write_algebra(const LieAlgebra& a);

// Strict reader: anything write_algebra would not have produced is rejected
// with InvalidInput, so read followed by write reproduces the bytes.
LieAlgebra read_algebra(std::string_view text);

LieAlgebra load_algebra(const std::string& path);
void save_algebra(const LieAlgebra& a, const std::string& path);

}  // namespace lieforge
