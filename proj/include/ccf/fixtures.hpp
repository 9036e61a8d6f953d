#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ccf/sampling.hpp"

namespace ccf::dimlab {

using fractal::PointCloud;

// Reference sets in H^1 coordinates (x, y, t), on midpoint lattices
// u_k = (k + 1/2)/K so no point sits on a dyadic cell boundary. Each point
// carries weight 1/K (or 1/K^2 for the square), so total mass is 1.

/// {(u, 0, 0) : u in [0,1]}, a subset of V(0). K points.
PointCloud horizontal_segment(std::size_t K = std::size_t{1} << 18);

/// {(0, 0, t) : t in [0,1]}. K points.
PointCloud vertical_segment(std::size_t K = std::size_t{1} << 18);

/// {(u, v, 0) : u, v in [0,1]} = [0,1]^2 x {0} in V(0). K^2 points.
PointCloud unit_square(std::size_t K = 512);

struct Fixture {
  std::string name;
  PointCloud cloud;
  double dim_e = 0.0;  // analytic Euclidean dimension
  double dim_g = 0.0;  // analytic homogeneous dimension in H^1
};

/// The three bundled fixtures with their analytic dimensions.
std::vector<Fixture> bundled_fixtures();

}  // namespace ccf::dimlab
