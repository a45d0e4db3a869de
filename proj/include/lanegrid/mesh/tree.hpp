#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "lanegrid/mesh/key.hpp"
#include "lanegrid/mesh/scenario.hpp"
#include "lanegrid/mesh/subgrid.hpp"

namespace lanegrid::mesh {

/// Face indices: 0 -x, 1 +x, 2 -y, 3 +y, 4 -z, 5 +z.
/// face axis = f/2, side = f&1 (0 minus, 1 plus).
inline constexpr std::array<std::array<int, 3>, 6> face_dirs = {{
    {-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1},
}};

/// Tangent axes of a face, in ascending axis order.
constexpr std::array<int, 2> face_tangent_axes(int axis) {
  if (axis == 0) return {1, 2};
  if (axis == 1) return {0, 2};
  return {0, 1};
}

/// Precomputed ghost-fill source for one (leaf, face) pair. Topology is
/// fixed after construction (no regridding during evolution), so plans are
/// built once.
struct face_plan {
  enum class kind : std::uint8_t {
    same_level,    // src: neighbor leaf at the same level
    finer,         // fine_src: four child leaves across the face
    coarser,       // src: neighbor leaf one level up
    outflow_self,  // domain boundary with zero-gradient rule
  };
  kind k = kind::outflow_self;
  std::uint32_t src = 0;
  std::array<std::uint32_t, 4> fine_src = {0, 0, 0, 0};  // [qa + 2*qb]
};

struct tree_counts {
  std::size_t leaves = 0;
  std::size_t cells = 0;
};

class tree {
 public:
  tree() = default;
  tree(tree&&) = default;
  tree& operator=(tree&&) = default;

  /// Builds the initial tree: starting from a single root sub-grid,
  /// repeatedly refines any leaf whose interior density-gradient indicator
  /// max |grad rho|*dx/rho reaches the scenario threshold, re-grades to
  /// 2:1 face balance, then initializes every leaf from the scenario's
  /// analytic initial condition at cell centers.
  static tree build(const scenario& sc, int max_level);

  /// Rebuilds structure from an explicit leaf key set (checkpoint load).
  /// Grids are allocated and zeroed; the caller fills them.
  static tree from_leaf_keys(const scenario& sc, int max_level,
                             std::span<const key_t> keys);

  /// Deep copy (used for untimed warm-up runs).
  tree clone() const;

  const scenario& config() const { return sc_; }
  int max_level() const { return max_level_; }

  std::size_t leaf_count() const { return leaves_.size(); }
  std::size_t cell_count() const { return leaves_.size() * cells_per_leaf; }
  tree_counts counts() const { return {leaf_count(), cell_count()}; }

  /// Leaf keys in depth-first (space-filling) order; leaf indices
  /// everywhere refer to positions in this order.
  std::span<const key_t> leaf_keys() const { return leaf_keys_; }

  subgrid& leaf(std::size_t i) { return *leaves_[i]; }
  const subgrid& leaf(std::size_t i) const { return *leaves_[i]; }

  /// Index of a leaf key; throws state_error when absent.
  std::size_t leaf_index(key_t k) const;

  bool node_exists(key_t k) const { return nodes_.contains(k); }
  bool node_is_leaf(key_t k) const {
    auto it = nodes_.find(k);
    return it != nodes_.end() && it->second >= 0;
  }

  const std::array<face_plan, 6>& plans(std::size_t leaf_idx) const {
    return plans_[leaf_idx];
  }

 private:
  scenario sc_;
  int max_level_ = 0;
  // value: leaf index, or -1 for interior nodes
  std::unordered_map<key_t, std::int64_t> nodes_;
  std::vector<std::unique_ptr<subgrid>> leaves_;
  std::vector<key_t> leaf_keys_;
  std::vector<std::array<face_plan, 6>> plans_;

  void finalize_structure(std::vector<key_t> leaf_set, bool init_fields);
  void build_face_plans();
};

/// Analytic initial condition (plus the seeded perturbation, when
/// configured) written into a leaf's interior cells.
void init_leaf_from_scenario(subgrid& g, const scenario& sc);

/// Refinement trigger for a candidate node: max over interior cells of
/// |grad rho| * dx / rho, evaluated on the analytic initial density with
/// central differences. Refine when the indicator >= threshold.
double refinement_indicator(const scenario& sc, key_t k);

}  // namespace lanegrid::mesh
