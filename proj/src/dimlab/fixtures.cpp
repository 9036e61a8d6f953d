#include "ccf/fixtures.hpp"

#include "ccf/error.hpp"

namespace ccf::dimlab {

namespace {

double midpoint(std::size_t k, std::size_t K) {
  return (static_cast<double>(k) + 0.5) / static_cast<double>(K);
}

PointCloud segment(std::size_t K, std::size_t axis) {
  if (K < 1) throw InputError("fixture: need at least one point");
  PointCloud cloud;
  cloud.dim = 3;
  cloud.coords.assign(3 * K, 0.0);
  cloud.weights.assign(K, 1.0 / static_cast<double>(K));
  for (std::size_t k = 0; k < K; ++k) cloud.coords[3 * k + axis] = midpoint(k, K);
  return cloud;
}

}  // namespace

PointCloud horizontal_segment(std::size_t K) { return segment(K, 0); }

PointCloud vertical_segment(std::size_t K) { return segment(K, 2); }

PointCloud unit_square(std::size_t K) {
  if (K < 1) throw InputError("fixture: need at least one point");
  PointCloud cloud;
  cloud.dim = 3;
  cloud.coords.assign(3 * K * K, 0.0);
  cloud.weights.assign(K * K, 1.0 / static_cast<double>(K * K));
  for (std::size_t a = 0; a < K; ++a) {
    for (std::size_t b = 0; b < K; ++b) {
      const std::size_t k = a * K + b;
      cloud.coords[3 * k] = midpoint(a, K);
      cloud.coords[3 * k + 1] = midpoint(b, K);
    }
  }
  return cloud;
}

std::vector<Fixture> bundled_fixtures() {
  return {{"horizontal_segment", horizontal_segment(), 1.0, 1.0},
          {"vertical_segment", vertical_segment(), 1.0, 2.0},
          {"unit_square", unit_square(), 2.0, 2.0}};
}

}  // namespace ccf::dimlab
