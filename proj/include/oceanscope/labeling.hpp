#pragma once

#include <cstdint>
#include <vector>

#include "oceanscope/grid.hpp"

namespace oceanscope {

/// Disjoint sets with path halving and union by smaller root index, so the
/// representative of a set is always its smallest member.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n = 0) : parent_(n) {
    for (std::size_t k = 0; k < n; ++k) parent_[k] = k;
  }

  std::size_t add() {
    parent_.push_back(parent_.size());
    return parent_.size() - 1;
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  std::size_t unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
};

/// Labels the 26-connected components of the non-zero voxels with
/// 1..K in raster order of each component's first voxel; background is 0.
LabeledVolume labelComponents26(const BinaryVolume& mask);

/// Number of distinct non-zero labels.
std::int32_t labelCount(const LabeledVolume& labels);

}  // namespace oceanscope
