#pragma once

#include <span>

#include "lanegrid/mesh/tree.hpp"

// Ghost-shell fill for the six face slabs of each leaf.
//
// Sources per face, resolved by the precomputed face plans:
//   * same-level neighbor — direct copy of its interior face layer
//   * finer neighbors     — 8-cell average (restriction) per coarse ghost
//   * coarser neighbor    — tensor-product linear interpolation at the
//     fine ghost centers from the coarse neighbor's two interior layers at
//     the face; per-axis stencils clamp to that slab (linear extrapolation
//     near its edges), so the rule reads nothing but the one neighbor.
//     Exact for trilinear fields, constants are fixed points.
//   * domain boundary     — periodic wraps to a regular source; outflow
//     copies the leaf's own adjacent interior layer (zero gradient).
//
// Every transfer is split into an extract step (what a sending rank would
// serialize) and an apply step (what the receiving rank computes from the
// payload). The local fill calls extract+apply back to back, so
// single-process and distributed runs execute identical arithmetic on
// identical bytes.

namespace lanegrid::mesh {

enum class field_selector { conserved, potential };

constexpr int fields_in(field_selector s) {
  return s == field_selector::conserved ? field_count : 1;
}

inline constexpr int face_layer_values = subgrid_extent * subgrid_extent;  // 64
inline constexpr int quadrant_values =
    (subgrid_extent / 2) * (subgrid_extent / 2);                           // 16
inline constexpr int slab_values = 2 * subgrid_extent * subgrid_extent;   // 128

/// Values one payload carries for a (receiver face, source kind) pair.
constexpr int payload_values(face_plan::kind k, field_selector s) {
  int per_field = k == face_plan::kind::same_level ? face_layer_values
                  : k == face_plan::kind::finer    ? quadrant_values
                                                   : slab_values;
  return per_field * fields_in(s);
}

// --- extraction (sender side; also the local source read) -------------------

/// Same-level: src's interior layer adjacent to the shared face,
/// [field][t2][t1] order. recv_face is the receiving leaf's face index.
void extract_face_layer(const subgrid& src, int recv_face, field_selector sel,
                        std::span<double> out);

/// Fine source, coarse receiver: src's two interior layers at the face,
/// restricted to the coarse level: [field][ct2][ct1], 4x4 per field.
void extract_restricted_quadrant(const subgrid& fine_src, int recv_face,
                                 field_selector sel, std::span<double> out);

/// Coarse source, fine receiver: src's two interior layers at the face,
/// [field][depth][t2][t1] with depth 0 adjacent to the face.
void extract_coarse_slab(const subgrid& coarse_src, int recv_face,
                         field_selector sel, std::span<double> out);

// --- application (receiver side; also the local fill path) ------------------

void apply_face_layer(subgrid& dst, int face, field_selector sel,
                      std::span<const double> in);

/// qa, qb: tangent quadrant of the fine source within the coarse face.
void apply_restricted_quadrant(subgrid& dst, int face, int qa, int qb,
                               field_selector sel, std::span<const double> in);

/// qa, qb: tangent quadrant of the receiving fine leaf within the coarse
/// source's face.
void apply_coarse_slab(subgrid& dst, int face, int qa, int qb,
                       field_selector sel, std::span<const double> in);

/// Zero-gradient boundary: ghost slab copies the leaf's own adjacent
/// interior layer.
void fill_outflow(subgrid& dst, int face, field_selector sel);

// --- whole-leaf / whole-tree fill -------------------------------------------

void fill_leaf_ghosts(tree& t, std::size_t leaf_idx, field_selector sel);
void fill_ghosts(tree& t, field_selector sel);

/// Tangent quadrant of a fine leaf within its coarse face neighbor.
constexpr std::pair<int, int> tangent_quadrant(const subgrid& fine, int face) {
  auto tang = face_tangent_axes(face / 2);
  block_coords b = key_block(fine.key);
  std::array<std::int64_t, 3> bv = {b.x, b.y, b.z};
  return {static_cast<int>(bv[std::size_t(tang[0])] & 1),
          static_cast<int>(bv[std::size_t(tang[1])] & 1)};
}

}  // namespace lanegrid::mesh
