#pragma once

#include <array>
#include <cstdint>

// Octal path keys for octree nodes.
//
// Layout of a 64-bit key:
//   bits [63:56]  node level L (0..7)
//   bits [55:0]   child digits d1..dL, 3 bits each, left-aligned: digit i
//                 sits at bit 53 - 3*(i-1), so d1 occupies bits [55:53].
//
// Within a digit, bit 0 selects the x half, bit 1 the y half, bit 2 the z
// half. Left-aligned digits make the numeric order of the path field equal
// the depth-first traversal order, which is the space-filling order used
// for partitioning.

namespace lanegrid::mesh {

inline constexpr int max_tree_level = 7;

using key_t = std::uint64_t;

inline constexpr key_t root_key = 0;

constexpr int key_level(key_t k) { return static_cast<int>(k >> 56); }

constexpr key_t key_path(key_t k) { return k & ((key_t{1} << 56) - 1); }

constexpr int digit_shift(int depth) { return 53 - 3 * (depth - 1); }

/// Digit at 1-based depth d (1..level).
constexpr int key_digit(key_t k, int depth) {
  return static_cast<int>((k >> digit_shift(depth)) & 7);
}

constexpr key_t child_key(key_t k, int child) {
  int level = key_level(k);
  key_t path = key_path(k) | (key_t(child) << digit_shift(level + 1));
  return (key_t(level + 1) << 56) | path;
}

constexpr key_t parent_key(key_t k) {
  int level = key_level(k);
  key_t path = key_path(k) & ~(key_t{7} << digit_shift(level));
  return (key_t(level - 1) << 56) | path;
}

/// Block coordinates of the node's region at its own level
/// (each axis in [0, 2^level)).
struct block_coords {
  std::int64_t x = 0, y = 0, z = 0;

  friend bool operator==(const block_coords&, const block_coords&) = default;
};

constexpr block_coords key_block(key_t k) {
  block_coords b;
  int level = key_level(k);
  for (int d = 1; d <= level; ++d) {
    int dig = key_digit(k, d);
    b.x = (b.x << 1) | (dig & 1);
    b.y = (b.y << 1) | ((dig >> 1) & 1);
    b.z = (b.z << 1) | ((dig >> 2) & 1);
  }
  return b;
}

constexpr key_t key_from_block(int level, block_coords b) {
  key_t k = root_key;
  for (int d = 1; d <= level; ++d) {
    int shift = level - d;
    int dig = static_cast<int>(((b.x >> shift) & 1) | (((b.y >> shift) & 1) << 1) |
                               (((b.z >> shift) & 1) << 2));
    k = child_key(k, dig);
  }
  return k;
}

/// Depth-first (space-filling) order: path field first, level as tiebreak.
/// Leaves of one tree always have distinct path fields.
constexpr bool dfs_less(key_t a, key_t b) {
  key_t pa = key_path(a), pb = key_path(b);
  if (pa != pb) return pa < pb;
  return key_level(a) < key_level(b);
}

}  // namespace lanegrid::mesh
