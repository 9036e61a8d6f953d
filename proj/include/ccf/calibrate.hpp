#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ccf/group.hpp"

namespace ccf::group {

/// Triples (p, w, q) stored flat, row k at offset 3*k*dim.
struct TripleSample {
  int dim = 0;
  std::vector<double> coords;
  [[nodiscard]] std::size_t size() const noexcept {
    return dim == 0 ? 0 : coords.size() / (3 * static_cast<std::size_t>(dim));
  }
};

/// Triples drawn uniformly from B_E(0, radius). Deterministic in seed.
TripleSample sample_triples(int dim, std::size_t count, double radius, std::uint64_t seed);

/// Number of triples with d(p,q) > d(p,w) + d(w,q) beyond a relative slack of 1e-12.
std::size_t count_triangle_violations_serial(const GroupSpec& spec, const TripleSample& triples);
std::size_t count_triangle_violations(const GroupSpec& spec, const TripleSample& triples);

struct Calibration {
  double c = 0.0;
  std::size_t samples = 0;
  std::size_t violations = 0;  // at the returned c, on the calibration sample
};

/// Largest c in (0,1), to resolution 1e-3, with no triangle violations on the
/// sampled triples. If even the smallest grid value fails, returns that value
/// with its violation count; this is a sample-level estimate, not a proof.
Calibration calibrate_metric_constant(const GroupSpec& spec, std::size_t sample_count,
                                      double radius, std::uint64_t seed);

/// Empirical c_R with d_E/c_R <= d_inf <= c_R d_E^(1/2) on a bounded sample.
struct ComparisonConstant {
  double value = 1.0;        // max(1, lower, upper)
  double lower_ratio = 0.0;  // max d_E / d_inf
  double upper_ratio = 0.0;  // max d_inf / d_E^(1/2)
  std::size_t samples = 0;
};

/// Mixture of uniform pairs in B_E(0,R) and near pairs q = p . delta_t(u) at
/// log-uniform scales t in [1e-4, 1], so both the large-scale and infinitesimal
/// regimes are represented. Pairs leaving B_E(0,R) are discarded.
ComparisonConstant estimate_comparison_constant(const GroupSpec& spec, double radius,
                                                std::size_t samples, std::uint64_t seed);

}  // namespace ccf::group
