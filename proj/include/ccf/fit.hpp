#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace ccf::dimlab {

struct ScaleEntry {
  double r = 0.0;
  double value = 0.0;
};

struct ScaleSeries {
  enum class Kind { count, ratio };

  Kind kind = Kind::count;
  std::vector<ScaleEntry> entries;

  /// Throws InputError unless radii are positive and strictly decreasing and values finite, >= 0.
  void validate() const;
};

struct DimensionEstimate {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log N - fit| over the fitted scales
  double r_min = 0.0;
  double r_max = 0.0;
  std::size_t scales_used = 0;
};

inline constexpr double kMinFitCount = 8.0;

/// Least-squares slope of log N(r) against log(1/r), natural logs, over the
/// entries with N >= min_count. Needs at least 3 such entries.
DimensionEstimate fit_dimension(const ScaleSeries& series, double min_count = kMinFitCount);

}  // namespace ccf::dimlab
