#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ccf/moran.hpp"
#include "ccf/slab.hpp"

namespace ccf::fractal {

/// Weighted points in R^dim, stored flat.
struct PointCloud {
  int dim = 0;
  std::vector<double> coords;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return weights.size(); }
  [[nodiscard]] std::span<const double> point(std::size_t k) const {
    return std::span<const double>(coords).subspan(k * static_cast<std::size_t>(dim),
                                                   static_cast<std::size_t>(dim));
  }
  void push(std::span<const double> p, double w);
  [[nodiscard]] double total_weight() const noexcept;
};

/// Uniform slab, uniform point in its x-face, uniform t in its t-interval;
/// ambient coordinates of `spec`. Weight = (total x-measure)/count.
PointCloud sample_set(const Construction& construction, const group::GroupSpec& spec,
                      std::size_t count, std::uint64_t seed);

/// Uniform address in J_depth, placed at the center of its box.
/// Weight = (sum over cylinders of diam_inf^(2s - m1))/count.
PointCloud sample_set(const MoranSet& set, std::size_t count, std::uint64_t seed);

/// CSV with header x1,...,xn,weight; floats written with 17 significant digits.
void write_csv(std::ostream& out, const PointCloud& cloud);
PointCloud read_csv(std::istream& in);

}  // namespace ccf::fractal
