#pragma once

// Straight-line reference for the sparse bit-plane encoder, written from the
// algorithm description without touching the library's encoder code. Used as
// an oracle only.

#include <cstdint>
#include <vector>

namespace oracle {

inline std::uint64_t splitmix_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// cells[c][l] = pixel index of the l-th pick of cell c.
inline std::vector<std::vector<int>> naive_cells(int pixels, int window, int overlap,
                                                 std::uint64_t seed) {
  std::vector<std::vector<int>> cells;
  for (int round = 0; round < overlap; ++round) {
    std::vector<int> order(pixels);
    for (int i = 0; i < pixels; ++i) order[i] = i;
    std::uint64_t state = seed + static_cast<std::uint64_t>(round);
    for (int i = pixels - 1; i >= 1; --i) {
      const int j = static_cast<int>(splitmix_next(state) % static_cast<std::uint64_t>(i + 1));
      const int tmp = order[i];
      order[i] = order[j];
      order[j] = tmp;
    }
    for (int start = 0; start < pixels; start += window) {
      cells.emplace_back(order.begin() + start, order.begin() + start + window);
    }
  }
  return cells;
}

/// Feature values for one raster, all-maxima-win tie rule.
inline std::vector<int> naive_encode(const std::vector<int>& pixels, int depth, int window,
                                     int group, int overlap, std::uint64_t seed) {
  const auto cells = naive_cells(static_cast<int>(pixels.size()), window, overlap, seed);
  const int count = static_cast<int>(cells.size());
  std::vector<int> fused(count, 0);
  for (int p = 0; p < depth; ++p) {
    std::vector<int> sums(count, 0);
    for (int c = 0; c < count; ++c) {
      for (int idx : cells[c]) sums[c] += (pixels[idx] >> p) & 1;
    }
    for (int g = 0; g < count; g += group) {
      int best = -1;
      for (int c = g; c < g + group; ++c) best = sums[c] > best ? sums[c] : best;
      for (int c = g; c < g + group; ++c) {
        if (sums[c] == best) fused[c] += 1 << p;
      }
    }
  }
  return fused;
}

}  // namespace oracle
