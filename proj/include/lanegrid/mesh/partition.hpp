#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lanegrid/mesh/tree.hpp"

namespace lanegrid::mesh {

/// Contiguous leaf-index range [first, first+count) owned by a rank:
/// leaves in depth-first key order split into nranks chunks whose sizes
/// differ by at most one (the first leaf_count % nranks chunks get the
/// extra leaf).
std::pair<std::size_t, std::size_t> rank_leaf_range(std::size_t leaf_count,
                                                    int nranks, int rank);

/// Rank of every leaf, indexed by leaf position in key order.
std::vector<int> partition_leaves(const tree& t, int nranks);

}  // namespace lanegrid::mesh
