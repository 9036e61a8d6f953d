#include "ccf/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ccf/error.hpp"

namespace ccf::dimlab {

void ScaleSeries::validate() const {
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const ScaleEntry& e = entries[k];
    if (!(e.r > 0.0) || !std::isfinite(e.r)) throw InputError("ScaleSeries: radii must be positive");
    if (!std::isfinite(e.value) || e.value < 0.0) {
      throw InputError("ScaleSeries: values must be finite and nonnegative");
    }
    if (k > 0 && !(e.r < entries[k - 1].r)) {
      throw InputError("ScaleSeries: radii must be strictly decreasing");
    }
  }
}

DimensionEstimate fit_dimension(const ScaleSeries& series, double min_count) {
  if (series.kind != ScaleSeries::Kind::count) throw InputError("fit_dimension: series must hold counts");
  series.validate();
  if (series.entries.size() < 3) throw InputError("fit_dimension: need at least 3 scales");
  std::vector<double> xs;
  std::vector<double> ys;
  DimensionEstimate est;
  est.r_min = std::numeric_limits<double>::infinity();
  for (const ScaleEntry& e : series.entries) {
    if (e.value <= 0.0) throw InputError("fit_dimension: zero count at r = " + std::to_string(e.r));
    if (e.value < min_count) continue;
    xs.push_back(-std::log(e.r));
    ys.push_back(std::log(e.value));
    est.r_min = std::min(est.r_min, e.r);
    est.r_max = std::max(est.r_max, e.r);
  }
  if (xs.size() < 3) {
    throw InputError("fit_dimension: fewer than 3 scales with count >= " + std::to_string(min_count));
  }
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
  }
  est.slope = sxy / sxx;
  est.intercept = my - est.slope * mx;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    est.residual = std::max(est.residual, std::abs(ys[k] - (est.intercept + est.slope * xs[k])));
  }
  est.scales_used = xs.size();
  return est;
}

}  // namespace ccf::dimlab
