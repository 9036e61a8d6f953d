#include "ccf/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "ccf/error.hpp"
#include "ccf/rng.hpp"

namespace ccf::dimlab {

namespace {

void check_grid(const PointCloud& cloud, std::span<const double> sides,
                std::span<const double> anchor) {
  if (cloud.size() == 0) throw InputError("box count: empty point cloud");
  if (static_cast<int>(sides.size()) != cloud.dim) throw InputError("box count: sides/dim mismatch");
  for (double s : sides) {
    if (!(s > 0.0) || !std::isfinite(s)) throw InputError("box count: cell side must be > 0");
  }
  if (!anchor.empty() && static_cast<int>(anchor.size()) != cloud.dim) {
    throw InputError("box count: anchor/dim mismatch");
  }
}

std::int64_t cell_of(double x, double side, double origin) {
  return static_cast<std::int64_t>(std::floor((x - origin) / side));
}

}  // namespace

std::size_t count_occupied_cells_serial(const PointCloud& cloud, std::span<const double> sides,
                                        std::span<const double> anchor) {
  check_grid(cloud, sides, anchor);
  const auto dim = static_cast<std::size_t>(cloud.dim);
  std::set<std::vector<std::int64_t>> cells;
  std::vector<std::int64_t> key(dim);
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    const auto p = cloud.point(k);
    for (std::size_t i = 0; i < dim; ++i) key[i] = cell_of(p[i], sides[i], anchor.empty() ? 0.0 : anchor[i]);
    cells.insert(key);
  }
  return cells.size();
}

std::size_t count_occupied_cells(const PointCloud& cloud, std::span<const double> sides,
                                 std::span<const double> anchor) {
  check_grid(cloud, sides, anchor);
  const auto dim = static_cast<std::size_t>(cloud.dim);
  const std::size_t n = cloud.size();

  // Cell keys and a hash bucket per point, then each bucket is sorted and
  // deduplicated on its own. Equal keys always land in the same bucket, so
  // the bucket counts add up to the exact number of distinct cells.
  std::vector<std::int64_t> keys(n * dim);
  const std::size_t buckets = std::max<std::size_t>(1, std::min<std::size_t>(n / 4096 + 1, 1024));
  std::vector<std::uint32_t> bucket_of(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    const auto p = cloud.point(static_cast<std::size_t>(k));
    std::uint64_t h = 0x51ed27f3a1c4b9d5ULL;
    for (std::size_t i = 0; i < dim; ++i) {
      const std::int64_t c = cell_of(p[i], sides[i], anchor.empty() ? 0.0 : anchor[i]);
      keys[static_cast<std::size_t>(k) * dim + i] = c;
      h = mix64(h ^ static_cast<std::uint64_t>(c));
    }
    bucket_of[static_cast<std::size_t>(k)] = static_cast<std::uint32_t>(h % buckets);
  }

  std::vector<std::size_t> start(buckets + 1, 0);
  for (std::uint32_t b : bucket_of) ++start[b + 1];
  for (std::size_t b = 0; b < buckets; ++b) start[b + 1] += start[b];
  std::vector<std::size_t> order(n);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t k = 0; k < n; ++k) order[fill[bucket_of[k]]++] = k;
  }

  auto less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(keys.begin() + static_cast<std::ptrdiff_t>(a * dim),
                                        keys.begin() + static_cast<std::ptrdiff_t>((a + 1) * dim),
                                        keys.begin() + static_cast<std::ptrdiff_t>(b * dim),
                                        keys.begin() + static_cast<std::ptrdiff_t>((b + 1) * dim));
  };
  auto equal = [&](std::size_t a, std::size_t b) {
    return std::equal(keys.begin() + static_cast<std::ptrdiff_t>(a * dim),
                      keys.begin() + static_cast<std::ptrdiff_t>((a + 1) * dim),
                      keys.begin() + static_cast<std::ptrdiff_t>(b * dim));
  };

  std::size_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(dynamic, 4)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(buckets); ++b) {
    const auto first = order.begin() + static_cast<std::ptrdiff_t>(start[static_cast<std::size_t>(b)]);
    const auto last = order.begin() + static_cast<std::ptrdiff_t>(start[static_cast<std::size_t>(b) + 1]);
    std::sort(first, last, less);
    total += static_cast<std::size_t>(std::distance(first, std::unique(first, last, equal)));
  }
  return total;
}

std::size_t box_count_euclidean(const PointCloud& cloud, double r, std::span<const double> anchor) {
  if (!(r > 0.0)) throw InputError("box_count_euclidean: r must be > 0");
  const std::vector<double> sides(static_cast<std::size_t>(cloud.dim), r);
  return count_occupied_cells(cloud, sides, anchor);
}

std::size_t box_count_homogeneous(const PointCloud& cloud, double r, const group::GroupSpec& spec,
                                  std::span<const double> anchor) {
  if (!(r > 0.0)) throw InputError("box_count_homogeneous: r must be > 0");
  if (cloud.dim != spec.dim()) throw InputError("box_count_homogeneous: cloud/spec dimension mismatch");
  std::vector<double> sides(static_cast<std::size_t>(cloud.dim), r * r);
  std::fill(sides.begin(), sides.begin() + spec.m1(), r);
  return count_occupied_cells(cloud, sides, anchor);
}

}  // namespace ccf::dimlab
