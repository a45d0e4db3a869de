#include "lanegrid/mesh/ghost.hpp"

#include <array>
#include <cmath>

#include "lanegrid/error.hpp"

namespace lanegrid::mesh {

namespace {

struct field_ptrs {
  std::array<const double*, field_count> src{};
  int n = 0;
};

struct mut_field_ptrs {
  std::array<double*, field_count> dst{};
  int n = 0;
};

field_ptrs fields_of(const subgrid& g, field_selector sel) {
  field_ptrs p;
  if (sel == field_selector::conserved) {
    p.n = field_count;
    for (int f = 0; f < field_count; ++f) p.src[std::size_t(f)] = g.u[std::size_t(f)].data();
  } else {
    if (g.phi.empty())
      throw state_error("potential ghost fill before gravity storage exists");
    p.n = 1;
    p.src[0] = g.phi.data();
  }
  return p;
}

mut_field_ptrs fields_of(subgrid& g, field_selector sel) {
  mut_field_ptrs p;
  if (sel == field_selector::conserved) {
    p.n = field_count;
    for (int f = 0; f < field_count; ++f) p.dst[std::size_t(f)] = g.u[std::size_t(f)].data();
  } else {
    if (g.phi.empty())
      throw state_error("potential ghost fill before gravity storage exists");
    p.n = 1;
    p.dst[0] = g.phi.data();
  }
  return p;
}

// box index from (axis value, tangent values) for a face with given axis
int box_at(int axis, int a_val, int t1_axis, int t1_val, int t2_axis,
           int t2_val) {
  std::array<int, 3> c{};
  c[std::size_t(axis)] = a_val;
  c[std::size_t(t1_axis)] = t1_val;
  c[std::size_t(t2_axis)] = t2_val;
  return box_index(c[0], c[1], c[2]);
}

// mean of 8 fine values in fixed accumulation order
double restrict_mean(const std::array<double, 8>& v) {
  double s = v[0];
  for (int i = 1; i < 8; ++i) s += v[std::size_t(i)];
  return s * 0.125;
}

// Per-axis interpolation stencil for a fine ghost at tangent cell t
// (1..8) within quadrant q of the coarse face: base coarse cell (0..6,
// local to the slab) and the weight of the base+1 cell. Clamping keeps the
// stencil in the slab; the weight then extrapolates linearly.
struct lin_stencil {
  int c0;
  double w;
};

lin_stencil tangent_stencil(int q, int t) {
  double u = q * 4 + (static_cast<double>(t) - 0.5) * 0.5;
  int c0 = static_cast<int>(std::floor(u - 0.5));
  if (c0 < 0) c0 = 0;
  if (c0 > subgrid_extent - 2) c0 = subgrid_extent - 2;
  return {c0, u - (static_cast<double>(c0) + 0.5)};
}

}  // namespace

void extract_face_layer(const subgrid& src, int recv_face, field_selector sel,
                        std::span<double> out) {
  int axis = recv_face / 2;
  int side = recv_face & 1;
  auto tang = face_tangent_axes(axis);
  // source layer adjacent to the shared face
  int a_val = side ? 1 : subgrid_extent;
  field_ptrs fp = fields_of(src, sel);
  std::size_t k = 0;
  for (int f = 0; f < fp.n; ++f)
    for (int t2 = 1; t2 <= subgrid_extent; ++t2)
      for (int t1 = 1; t1 <= subgrid_extent; ++t1)
        out[k++] = fp.src[std::size_t(f)][std::size_t(
            box_at(axis, a_val, tang[0], t1, tang[1], t2))];
}

void apply_face_layer(subgrid& dst, int face, field_selector sel,
                      std::span<const double> in) {
  int axis = face / 2;
  int side = face & 1;
  auto tang = face_tangent_axes(axis);
  int g_val = side ? box_extent - 1 : 0;
  mut_field_ptrs fp = fields_of(dst, sel);
  std::size_t k = 0;
  for (int f = 0; f < fp.n; ++f)
    for (int t2 = 1; t2 <= subgrid_extent; ++t2)
      for (int t1 = 1; t1 <= subgrid_extent; ++t1)
        fp.dst[std::size_t(f)][std::size_t(
            box_at(axis, g_val, tang[0], t1, tang[1], t2))] = in[k++];
}

void extract_restricted_quadrant(const subgrid& fine_src, int recv_face,
                                 field_selector sel, std::span<double> out) {
  int axis = recv_face / 2;
  int side = recv_face & 1;
  auto tang = face_tangent_axes(axis);
  // fine layers adjacent to the shared face: near is the closest
  int near = side ? 1 : subgrid_extent;
  int far = side ? 2 : subgrid_extent - 1;
  field_ptrs fp = fields_of(fine_src, sel);
  std::size_t k = 0;
  for (int f = 0; f < fp.n; ++f)
    for (int ct2 = 0; ct2 < subgrid_extent / 2; ++ct2)
      for (int ct1 = 0; ct1 < subgrid_extent / 2; ++ct1) {
        std::array<double, 8> v{};
        int idx = 0;
        for (int d = 0; d < 2; ++d) {
          int a_val = d == 0 ? near : far;
          for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i)
              v[std::size_t(idx++)] = fp.src[std::size_t(f)][std::size_t(
                  box_at(axis, a_val, tang[0], 2 * ct1 + 1 + i, tang[1],
                         2 * ct2 + 1 + j))];
        }
        out[k++] = restrict_mean(v);
      }
}

void apply_restricted_quadrant(subgrid& dst, int face, int qa, int qb,
                               field_selector sel,
                               std::span<const double> in) {
  int axis = face / 2;
  int side = face & 1;
  auto tang = face_tangent_axes(axis);
  int g_val = side ? box_extent - 1 : 0;
  mut_field_ptrs fp = fields_of(dst, sel);
  std::size_t k = 0;
  for (int f = 0; f < fp.n; ++f)
    for (int ct2 = 0; ct2 < subgrid_extent / 2; ++ct2)
      for (int ct1 = 0; ct1 < subgrid_extent / 2; ++ct1)
        fp.dst[std::size_t(f)][std::size_t(
            box_at(axis, g_val, tang[0], qa * 4 + ct1 + 1, tang[1],
                   qb * 4 + ct2 + 1))] = in[k++];
}

void extract_coarse_slab(const subgrid& coarse_src, int recv_face,
                         field_selector sel, std::span<double> out) {
  int axis = recv_face / 2;
  int side = recv_face & 1;
  auto tang = face_tangent_axes(axis);
  int near = side ? 1 : subgrid_extent;
  int far = side ? 2 : subgrid_extent - 1;
  field_ptrs fp = fields_of(coarse_src, sel);
  std::size_t k = 0;
  for (int f = 0; f < fp.n; ++f)
    for (int d = 0; d < 2; ++d) {
      int a_val = d == 0 ? near : far;
      for (int t2 = 1; t2 <= subgrid_extent; ++t2)
        for (int t1 = 1; t1 <= subgrid_extent; ++t1)
          out[k++] = fp.src[std::size_t(f)][std::size_t(
              box_at(axis, a_val, tang[0], t1, tang[1], t2))];
    }
}

void apply_coarse_slab(subgrid& dst, int face, int qa, int qb,
                       field_selector sel, std::span<const double> in) {
  int axis = face / 2;
  int side = face & 1;
  auto tang = face_tangent_axes(axis);
  int g_val = side ? box_extent - 1 : 0;
  mut_field_ptrs fp = fields_of(dst, sel);

  const int per_field = slab_values;
  for (int f = 0; f < fp.n; ++f) {
    const double* slab0 = in.data() + f * per_field;                    // near
    const double* slab1 = slab0 + subgrid_extent * subgrid_extent;      // far
    for (int tb = 1; tb <= subgrid_extent; ++tb) {
      lin_stencil sb = tangent_stencil(qb, tb);
      for (int ta = 1; ta <= subgrid_extent; ++ta) {
        lin_stencil sa = tangent_stencil(qa, ta);
        double acc = 0.0;
        for (int j = 0; j < 2; ++j) {
          double wj = j ? sb.w : 1.0 - sb.w;
          for (int i = 0; i < 2; ++i) {
            double wi = i ? sa.w : 1.0 - sa.w;
            int t = (sa.c0 + i) + subgrid_extent * (sb.c0 + j);
            // linear extrapolation from the two layers to the ghost center
            double nrm = 1.25 * slab0[t] - 0.25 * slab1[t];
            acc += (wj * wi) * nrm;
          }
        }
        fp.dst[std::size_t(f)][std::size_t(
            box_at(axis, g_val, tang[0], ta, tang[1], tb))] = acc;
      }
    }
  }
}

void fill_outflow(subgrid& dst, int face, field_selector sel) {
  int axis = face / 2;
  int side = face & 1;
  auto tang = face_tangent_axes(axis);
  int g_val = side ? box_extent - 1 : 0;
  int a_val = side ? subgrid_extent : 1;
  mut_field_ptrs fp = fields_of(dst, sel);
  for (int f = 0; f < fp.n; ++f)
    for (int t2 = 1; t2 <= subgrid_extent; ++t2)
      for (int t1 = 1; t1 <= subgrid_extent; ++t1)
        fp.dst[std::size_t(f)][std::size_t(
            box_at(axis, g_val, tang[0], t1, tang[1], t2))] =
            fp.dst[std::size_t(f)][std::size_t(
                box_at(axis, a_val, tang[0], t1, tang[1], t2))];
}

void fill_leaf_ghosts(tree& t, std::size_t leaf_idx, field_selector sel) {
  subgrid& g = t.leaf(leaf_idx);
  const auto& plans = t.plans(leaf_idx);
  std::array<double, field_count * slab_values> buf{};

  for (int f = 0; f < 6; ++f) {
    const face_plan& plan = plans[std::size_t(f)];
    switch (plan.k) {
      case face_plan::kind::outflow_self:
        fill_outflow(g, f, sel);
        break;
      case face_plan::kind::same_level: {
        std::span<double> payload(buf.data(),
                                  std::size_t(payload_values(plan.k, sel)));
        extract_face_layer(t.leaf(plan.src), f, sel, payload);
        apply_face_layer(g, f, sel, payload);
        break;
      }
      case face_plan::kind::finer: {
        for (int q = 0; q < 4; ++q) {
          std::span<double> payload(buf.data(),
                                    std::size_t(payload_values(plan.k, sel)));
          extract_restricted_quadrant(t.leaf(plan.fine_src[std::size_t(q)]), f,
                                      sel, payload);
          apply_restricted_quadrant(g, f, q & 1, q >> 1, sel, payload);
        }
        break;
      }
      case face_plan::kind::coarser: {
        std::span<double> payload(buf.data(),
                                  std::size_t(payload_values(plan.k, sel)));
        extract_coarse_slab(t.leaf(plan.src), f, sel, payload);
        auto [qa, qb] = tangent_quadrant(g, f);
        apply_coarse_slab(g, f, qa, qb, sel, payload);
        break;
      }
    }
  }
}

void fill_ghosts(tree& t, field_selector sel) {
  for (std::size_t i = 0; i < t.leaf_count(); ++i)
    fill_leaf_ghosts(t, i, sel);
}

}  // namespace lanegrid::mesh
