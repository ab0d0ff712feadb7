#pragma once

#include <cstddef>
#include <span>

namespace specfield {

/// Pairwise (tree) summation; rounding error grows as O(log n) instead of O(n).
template <typename T>
T pairwise_sum(std::span<const T> xs) {
  constexpr std::size_t kLeaf = 16;
  if (xs.size() <= kLeaf) {
    T acc{};
    for (const auto& x : xs) acc += x;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace specfield
