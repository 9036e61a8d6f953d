#pragma once

#include <cstddef>
#include <span>

#include "ccf/group.hpp"
#include "ccf/sampling.hpp"

namespace ccf::dimlab {

using fractal::PointCloud;

/// Occupied cells of the grid with per-axis side `sides[i]` anchored at
/// `anchor` (origin if empty); cell index floor((x - anchor)/side).
std::size_t count_occupied_cells(const PointCloud& cloud, std::span<const double> sides,
                                 std::span<const double> anchor = {});

/// Reference implementation: a std::set of cell keys, single threaded.
std::size_t count_occupied_cells_serial(const PointCloud& cloud, std::span<const double> sides,
                                        std::span<const double> anchor = {});

/// Isotropic cells of side r.
std::size_t box_count_euclidean(const PointCloud& cloud, double r,
                                std::span<const double> anchor = {});

/// Cells of side r in the m1 first-layer coordinates and r^2 in the m2 others.
std::size_t box_count_homogeneous(const PointCloud& cloud, double r, const group::GroupSpec& spec,
                                  std::span<const double> anchor = {});

}  // namespace ccf::dimlab
