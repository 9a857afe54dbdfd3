#include "oceanscope/labeling.hpp"

#include <algorithm>

namespace oceanscope {

LabeledVolume labelComponents26(const BinaryVolume& mask) {
  const Index D = mask.depths(), H = mask.rows(), W = mask.cols();
  LabeledVolume labels(mask.gridPtr(), 0);
  UnionFind sets(1);  // provisional label 0 is background

  // First pass: provisional labels from the 13 already-visited neighbors.
  for (Index d = 0; d < D; ++d) {
    for (Index i = 0; i < H; ++i) {
      for (Index j = 0; j < W; ++j) {
        if (!mask(d, i, j)) continue;
        std::int32_t current = 0;
        for (Index dd = -1; dd <= 0; ++dd) {
          for (Index di = -1; di <= 1; ++di) {
            for (Index dj = -1; dj <= 1; ++dj) {
              // visited neighbors only: previous plane, or previous rows, or left
              if (dd == 0 && (di > 0 || (di == 0 && dj >= 0))) continue;
              const Index nd = d + dd, ni = i + di, nj = j + dj;
              if (nd < 0 || ni < 0 || ni >= H || nj < 0 || nj >= W) continue;
              const std::int32_t other = labels(nd, ni, nj);
              if (other == 0) continue;
              if (current == 0) {
                current = other;
              } else if (other != current) {
                sets.unite(static_cast<std::size_t>(current), static_cast<std::size_t>(other));
              }
            }
          }
        }
        if (current == 0) current = static_cast<std::int32_t>(sets.add());
        labels(d, i, j) = current;
      }
    }
  }

  // Second pass: resolve to roots, then renumber by first appearance.
  std::vector<std::int32_t> finalLabel(sets.size(), 0);
  std::int32_t next = 0;
  for (Index k = 0; k < labels.size(); ++k) {
    std::int32_t& value = labels.values()[k];
    if (value == 0) continue;
    const std::size_t root = sets.find(static_cast<std::size_t>(value));
    if (finalLabel[root] == 0) finalLabel[root] = ++next;
    value = finalLabel[root];
  }
  return labels;
}

std::int32_t labelCount(const LabeledVolume& labels) {
  return labels.size() == 0 ? 0 : labels.values().maxCoeff();
}

}  // namespace oceanscope
