#include <doctest.h>

#include <cmath>

#include "ccf/boxcount.hpp"
#include "ccf/fixtures.hpp"
#include "ccf/rng.hpp"

using namespace ccf;
using namespace ccf::dimlab;

namespace {

PointCloud uniform_cloud(int dim, std::size_t n, std::uint64_t seed) {
  PointCloud c;
  c.dim = dim;
  CounterRng rng(seed);
  std::vector<double> p(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < n; ++i) {
    for (double& x : p) x = rng.uniform();
    c.push(p, 1.0);
  }
  return c;
}

const group::GroupSpec kH1 = group::GroupSpec::heisenberg(1, 0.5);

}  // namespace

TEST_SUITE("boxcount") {

TEST_CASE("euclidean count examples") {
  CHECK(box_count_euclidean(uniform_cloud(2, 100000, 1), 0.25) == 16);
  PointCloud single;
  single.dim = 3;
  single.push(std::vector<double>{0.3, 0.1, 0.7}, 1.0);
  for (double r : {1.0, 0.1, 1e-3, 1e-6}) {
    CHECK(box_count_euclidean(single, r) == 1);
    CHECK(box_count_homogeneous(single, r, kH1) == 1);
  }
  PointCloud seg;
  seg.dim = 1;
  for (int i = 0; i <= 4096; ++i) seg.push(std::vector<double>{i / 4096.0}, 1.0);
  for (int j = 1; j <= 8; ++j) {
    const std::size_t n = box_count_euclidean(seg, std::ldexp(1.0, -j));
    CHECK((n == (std::size_t{1} << j) || n == (std::size_t{1} << j) + 1));
  }
}

TEST_CASE("homogeneous count examples") {
  const PointCloud hseg = horizontal_segment(1 << 14);
  const PointCloud vseg = vertical_segment(1 << 14);
  for (int j = 2; j <= 6; ++j) {
    const double r = std::ldexp(1.0, -j);
    CHECK(box_count_homogeneous(hseg, r, kH1) == (std::size_t{1} << j));
    CHECK(box_count_homogeneous(vseg, r, kH1) == (std::size_t{1} << (2 * j)));
  }
}

TEST_CASE("serial and parallel counts agree") {
  for (int dim : {1, 3, 5}) {
    const PointCloud c = uniform_cloud(dim, 20000, 7 + dim);
    for (double r : {0.5, 0.1, 0.013}) {
      std::vector<double> sides(static_cast<std::size_t>(dim), r);
      CHECK(count_occupied_cells(c, sides) == count_occupied_cells_serial(c, sides));
      std::vector<double> anchor(static_cast<std::size_t>(dim), 0.37 * r);
      CHECK(count_occupied_cells(c, sides, anchor) == count_occupied_cells_serial(c, sides, anchor));
    }
  }
}

TEST_CASE("counts are nonincreasing in r") {
  // Dyadic scales are nested grids: halving r never lowers the count.
  for (const PointCloud& cloud : {unit_square(128), vertical_segment(4096), uniform_cloud(3, 5000, 3)}) {
    for (int j = 1; j < 9; ++j) {
      const double r = std::ldexp(1.0, -j);
      CHECK(box_count_euclidean(cloud, r / 2) >= box_count_euclidean(cloud, r));
      CHECK(box_count_homogeneous(cloud, r / 2, kH1) >= box_count_homogeneous(cloud, r, kH1));
    }
  }
}

TEST_CASE("anchor shifts change counts by at most 2^n") {
  for (const PointCloud& cloud : {unit_square(256), vertical_segment(1 << 14), horizontal_segment(1 << 14)}) {
    CounterRng rng(21);
    for (int j = 2; j <= 7; ++j) {
      const double r = std::ldexp(1.0, -j);
      std::vector<double> anchor{rng.uniform(0, r), rng.uniform(0, r), rng.uniform(0, r * r)};
      const double base_e = box_count_euclidean(cloud, r);
      const double shift_e = box_count_euclidean(cloud, r, anchor);
      CHECK(shift_e <= 8.0 * base_e);
      CHECK(base_e <= 8.0 * shift_e);
      const double base_g = box_count_homogeneous(cloud, r, kH1);
      const double shift_g = box_count_homogeneous(cloud, r, kH1, anchor);
      CHECK(shift_g <= 8.0 * base_g);
      CHECK(base_g <= 8.0 * shift_g);
    }
  }
}

}  // TEST_SUITE
