#include "lanegrid/mesh/tree.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "lanegrid/error.hpp"

namespace lanegrid::mesh {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

double refinement_indicator(const scenario& sc, key_t k) {
  int level = key_level(k);
  double dx = sc.domain_edge / (subgrid_extent * (std::int64_t{1} << level));
  block_coords b = key_block(k);
  std::array<std::int64_t, 3> origin = {b.x * subgrid_extent,
                                        b.y * subgrid_extent,
                                        b.z * subgrid_extent};
  auto center = [&](int axis, int box_coord) {
    return (static_cast<double>(origin[std::size_t(axis)] + box_coord - 1) +
            0.5) *
           dx;
  };

  // Analytic density over the padded box; the initial condition extends
  // smoothly past the domain boundary, which is all the trigger needs.
  std::array<double, box_cells> rho;
  for (int z = 0; z < box_extent; ++z)
    for (int y = 0; y < box_extent; ++y)
      for (int x = 0; x < box_extent; ++x)
        rho[std::size_t(box_index(x, y, z))] =
            sc.initial_rho(center(0, x), center(1, y), center(2, z));

  double worst = 0.0;
  for (int z = 1; z <= subgrid_extent; ++z)
    for (int y = 1; y <= subgrid_extent; ++y)
      for (int x = 1; x <= subgrid_extent; ++x) {
        double gx = 0.5 * (rho[std::size_t(box_index(x + 1, y, z))] -
                           rho[std::size_t(box_index(x - 1, y, z))]);
        double gy = 0.5 * (rho[std::size_t(box_index(x, y + 1, z))] -
                           rho[std::size_t(box_index(x, y - 1, z))]);
        double gz = 0.5 * (rho[std::size_t(box_index(x, y, z + 1))] -
                           rho[std::size_t(box_index(x, y, z - 1))]);
        double ind = std::sqrt(gx * gx + gy * gy + gz * gz) /
                     rho[std::size_t(box_index(x, y, z))];
        worst = std::max(worst, ind);
      }
  return worst;
}

void init_leaf_from_scenario(subgrid& g, const scenario& sc) {
  for (int z = 1; z <= subgrid_extent; ++z)
    for (int y = 1; y <= subgrid_extent; ++y)
      for (int x = 1; x <= subgrid_extent; ++x) {
        conserved s =
            sc.initial_state(g.center(0, x), g.center(1, y), g.center(2, z));
        for (int f = 0; f < field_count; ++f) g.at(f, x, y, z) = s[std::size_t(f)];
      }

  if (sc.perturb != 0.0) {
    // Per-leaf engine keyed by (seed, leaf key): identical initial data
    // regardless of how leaves are distributed or iterated.
    std::mt19937_64 eng(mix64(sc.seed ^ mix64(g.key)));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int z = 1; z <= subgrid_extent; ++z)
      for (int y = 1; y <= subgrid_extent; ++y)
        for (int x = 1; x <= subgrid_extent; ++x)
          g.at(f_rho, x, y, z) *= 1.0 + sc.perturb * unit(eng);
  }
}

tree tree::build(const scenario& sc, int max_level) {
  if (max_level < 0 || max_level > max_tree_level)
    throw config_error("max_level must be in [0, " +
                       std::to_string(max_tree_level) + "], got " +
                       std::to_string(max_level));

  std::set<key_t> leaves = {root_key};
  std::set<key_t> interior;

  auto refine_one = [&](key_t k) {
    leaves.erase(k);
    interior.insert(k);
    for (int c = 0; c < 8; ++c) leaves.insert(child_key(k, c));
  };

  bool changed = true;
  while (changed) {
    changed = false;

    // trigger pass
    std::vector<key_t> snapshot(leaves.begin(), leaves.end());
    for (key_t k : snapshot) {
      if (key_level(k) >= max_level) continue;
      if (refinement_indicator(sc, k) >= sc.refine_threshold) {
        refine_one(k);
        changed = true;
      }
    }

    // 2:1 face grading
    bool graded_change = true;
    while (graded_change) {
      graded_change = false;
      std::vector<key_t> snap(leaves.begin(), leaves.end());
      for (key_t k : snap) {
        if (!leaves.contains(k)) continue;
        int level = key_level(k);
        std::int64_t extent = std::int64_t{1} << level;
        block_coords b = key_block(k);
        for (int f = 0; f < 6; ++f) {
          block_coords nb = {b.x + face_dirs[std::size_t(f)][0],
                             b.y + face_dirs[std::size_t(f)][1],
                             b.z + face_dirs[std::size_t(f)][2]};
          bool outside = nb.x < 0 || nb.x >= extent || nb.y < 0 ||
                         nb.y >= extent || nb.z < 0 || nb.z >= extent;
          if (outside) {
            if (sc.boundary != boundary_kind::periodic) continue;
            nb.x = (nb.x + extent) % extent;
            nb.y = (nb.y + extent) % extent;
            nb.z = (nb.z + extent) % extent;
          }
          // Walk up until some node covers the neighbor region; a covering
          // leaf two or more levels up violates 2:1 balance.
          block_coords cb = nb;
          for (int cl = level; cl >= 0; --cl) {
            key_t ck = key_from_block(cl, cb);
            if (leaves.contains(ck)) {
              if (level - cl >= 2) {
                refine_one(ck);
                graded_change = true;
                changed = true;
              }
              break;
            }
            if (interior.contains(ck)) break;  // covered by finer leaves
            cb = {cb.x >> 1, cb.y >> 1, cb.z >> 1};
          }
        }
      }
    }
  }

  tree t;
  t.sc_ = sc;
  t.max_level_ = max_level;
  t.finalize_structure({leaves.begin(), leaves.end()}, /*init_fields=*/true);
  return t;
}

tree tree::from_leaf_keys(const scenario& sc, int max_level,
                          std::span<const key_t> keys) {
  if (max_level < 0 || max_level > max_tree_level)
    throw config_error("max_level out of range");
  tree t;
  t.sc_ = sc;
  t.max_level_ = max_level;
  t.finalize_structure({keys.begin(), keys.end()}, /*init_fields=*/false);
  return t;
}

tree tree::clone() const {
  tree t;
  t.sc_ = sc_;
  t.max_level_ = max_level_;
  t.nodes_ = nodes_;
  t.leaf_keys_ = leaf_keys_;
  t.plans_ = plans_;
  t.leaves_.reserve(leaves_.size());
  for (const auto& g : leaves_)
    t.leaves_.push_back(std::make_unique<subgrid>(*g));
  return t;
}

std::size_t tree::leaf_index(key_t k) const {
  auto it = nodes_.find(k);
  if (it == nodes_.end() || it->second < 0)
    throw state_error("no leaf with key " + std::to_string(k));
  return static_cast<std::size_t>(it->second);
}

void tree::finalize_structure(std::vector<key_t> leaf_set, bool init_fields) {
  if (leaf_set.empty()) throw state_error("tree has no leaves");
  std::sort(leaf_set.begin(), leaf_set.end(), dfs_less);

  nodes_.clear();
  leaves_.clear();
  leaf_keys_ = std::move(leaf_set);

  for (std::size_t i = 0; i < leaf_keys_.size(); ++i) {
    key_t k = leaf_keys_[i];
    if (key_level(k) > max_level_)
      throw state_error("leaf deeper than max_level");
    if (!nodes_.emplace(k, static_cast<std::int64_t>(i)).second)
      throw state_error("duplicate leaf key");
    // ancestors become interior nodes
    key_t a = k;
    while (key_level(a) > 0) {
      a = parent_key(a);
      auto [it, inserted] = nodes_.emplace(a, -1);
      if (!inserted) {
        if (it->second >= 0)
          throw state_error("leaf key nested inside another leaf");
        break;  // ancestors already recorded
      }
    }
  }

  // every interior node must have all 8 children covered
  for (const auto& [k, v] : nodes_) {
    if (v >= 0) continue;
    for (int c = 0; c < 8; ++c)
      if (!nodes_.contains(child_key(k, c)))
        throw state_error("interior node with missing child");
  }

  leaves_.reserve(leaf_keys_.size());
  for (key_t k : leaf_keys_) {
    leaves_.push_back(std::make_unique<subgrid>(k, sc_.domain_edge));
    if (init_fields) init_leaf_from_scenario(*leaves_.back(), sc_);
  }

  build_face_plans();
}

void tree::build_face_plans() {
  plans_.assign(leaves_.size(), {});
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    const subgrid& g = *leaves_[i];
    int level = g.level;
    std::int64_t extent = std::int64_t{1} << level;
    block_coords b = g.block();

    for (int f = 0; f < 6; ++f) {
      face_plan& plan = plans_[i][std::size_t(f)];
      block_coords nb = {b.x + face_dirs[std::size_t(f)][0],
                         b.y + face_dirs[std::size_t(f)][1],
                         b.z + face_dirs[std::size_t(f)][2]};
      bool outside = nb.x < 0 || nb.x >= extent || nb.y < 0 ||
                     nb.y >= extent || nb.z < 0 || nb.z >= extent;
      if (outside) {
        if (sc_.boundary != boundary_kind::periodic) {
          plan.k = face_plan::kind::outflow_self;
          continue;
        }
        nb.x = (nb.x + extent) % extent;
        nb.y = (nb.y + extent) % extent;
        nb.z = (nb.z + extent) % extent;
      }

      key_t same = key_from_block(level, nb);
      auto it = nodes_.find(same);
      if (it != nodes_.end()) {
        if (it->second >= 0) {
          plan.k = face_plan::kind::same_level;
          plan.src = static_cast<std::uint32_t>(it->second);
          continue;
        }
        // finer across the face: the four children adjacent to it
        plan.k = face_plan::kind::finer;
        int axis = f / 2;
        auto tang = face_tangent_axes(axis);
        // children sit on the far side of nb relative to this leaf
        int normal_bit = (f & 1) ? 0 : 1;
        for (int qb = 0; qb < 2; ++qb)
          for (int qa = 0; qa < 2; ++qa) {
            std::array<std::int64_t, 3> cbv = {nb.x * 2, nb.y * 2, nb.z * 2};
            cbv[std::size_t(axis)] += normal_bit;
            cbv[std::size_t(tang[0])] += qa;
            cbv[std::size_t(tang[1])] += qb;
            key_t ck =
                key_from_block(level + 1, {cbv[0], cbv[1], cbv[2]});
            auto cit = nodes_.find(ck);
            if (cit == nodes_.end() || cit->second < 0)
              throw state_error(
                  "tree is not 2:1 graded: face neighbor refined by two or "
                  "more levels");
            plan.fine_src[std::size_t(qa + 2 * qb)] =
                static_cast<std::uint32_t>(cit->second);
          }
        continue;
      }

      if (level == 0)
        throw state_error("root leaf with in-domain neighbor");
      key_t up = key_from_block(level - 1,
                                {nb.x >> 1, nb.y >> 1, nb.z >> 1});
      auto uit = nodes_.find(up);
      if (uit == nodes_.end() || uit->second < 0)
        throw state_error(
            "tree is not 2:1 graded: face neighbor coarser by two or more "
            "levels");
      plan.k = face_plan::kind::coarser;
      plan.src = static_cast<std::uint32_t>(uit->second);
    }
  }
}

}  // namespace lanegrid::mesh
