#pragma once

#include <string>

#include "lanegrid/mesh/tree.hpp"

// Checkpoint format (little-endian regardless of host):
//   header:  magic "LGRD" (4 bytes), version u32 = 1, leaf count u64
//   per leaf, in depth-first key order:
//     key u64, level u8,
//     5 x 512 field values as 64-bit floats, field-major in
//     rho, momx, momy, momz, E order; cells within a field iterate
//     x fastest, then y, then z.
// Ghost cells and the gravitational potential are not stored; both are
// recomputed after load.

namespace lanegrid::mesh {

void write_checkpoint(const tree& t, const std::string& path);

/// Writes only a contiguous leaf range [first, first+count): a rank's own
/// partition. Concatenating rank files in rank order yields the
/// single-process checkpoint byte-for-byte (apart from per-file headers).
void write_checkpoint_range(const tree& t, const std::string& path,
                            std::size_t first, std::size_t count);

tree read_checkpoint(const std::string& path, const scenario& sc,
                     int max_level);

}  // namespace lanegrid::mesh
