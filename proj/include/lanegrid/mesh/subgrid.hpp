#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lanegrid/mesh/key.hpp"

namespace lanegrid::mesh {

// One octree leaf: an 8x8x8 block of conserved-state cells with a one-cell
// ghost shell, stored field-major over the padded 10^3 box so every x-row
// of interior cells is pack-loadable at any lane width without bounds
// checks. Only the six face slabs of the ghost shell are ever filled or
// read; the twelve edge and eight corner runs of the box stay untouched.

inline constexpr int subgrid_extent = 8;           // interior cells per axis
inline constexpr int ghost_width = 1;
inline constexpr int box_extent = subgrid_extent + 2 * ghost_width;  // 10
inline constexpr int box_cells = box_extent * box_extent * box_extent;
inline constexpr int cells_per_leaf =
    subgrid_extent * subgrid_extent * subgrid_extent;  // 512
inline constexpr int field_count = 5;

enum field_id : int { f_rho = 0, f_momx = 1, f_momy = 2, f_momz = 3, f_energy = 4 };

/// Index into the padded box; coordinates in [0, 10), interior is [1, 9).
constexpr int box_index(int x, int y, int z) {
  return x + box_extent * (y + box_extent * z);
}

/// Index into compact interior-only arrays; coordinates are box
/// coordinates in [1, 9).
constexpr int cell_index(int x, int y, int z) {
  return (x - 1) +
         subgrid_extent * ((y - 1) + subgrid_extent * (z - 1));
}

struct subgrid {
  key_t key = root_key;
  int level = 0;
  double dx = 0.0;
  /// Global interior cell coordinates (at this level) of box cell (1,1,1).
  std::array<std::int64_t, 3> origin = {0, 0, 0};

  /// Conserved fields over the padded box, field-major.
  std::array<std::vector<double>, field_count> u;

  /// Step-start copy of the interior, used by the multi-stage integrator.
  std::array<std::vector<double>, field_count> u0;

  /// Gravitational potential over the padded box (face ghosts computed
  /// directly by the gravity kernel) and cached per-cell acceleration.
  std::vector<double> phi;
  std::array<std::vector<double>, 3> accel;

  subgrid() = default;
  subgrid(key_t k, double domain_edge) : key(k), level(key_level(k)) {
    dx = domain_edge / (subgrid_extent * (std::int64_t{1} << level));
    block_coords b = key_block(k);
    origin = {b.x * subgrid_extent, b.y * subgrid_extent, b.z * subgrid_extent};
    for (auto& f : u) f.assign(box_cells, 0.0);
  }

  block_coords block() const { return key_block(key); }

  /// Physical center of the box cell (x,y,z); box coordinate 1 maps to the
  /// first interior cell.
  double center(int axis, int box_coord) const {
    std::int64_t g = origin[std::size_t(axis)] + box_coord - 1;
    return (static_cast<double>(g) + 0.5) * dx;
  }

  void ensure_step_scratch() {
    if (u0[0].empty())
      for (auto& f : u0) f.assign(cells_per_leaf, 0.0);
  }

  void ensure_gravity_storage() {
    if (phi.empty()) {
      phi.assign(box_cells, 0.0);
      for (auto& a : accel) a.assign(cells_per_leaf, 0.0);
    }
  }

  double& at(int f, int x, int y, int z) {
    return u[std::size_t(f)][std::size_t(box_index(x, y, z))];
  }
  double at(int f, int x, int y, int z) const {
    return u[std::size_t(f)][std::size_t(box_index(x, y, z))];
  }
};

}  // namespace lanegrid::mesh
