#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccf/fit.hpp"
#include "ccf/moran.hpp"
#include "ccf/pieces.hpp"
#include "ccf/sampling.hpp"

namespace ccf::dimlab {

inline constexpr double kDefaultTau = 0.3;

/// Supplies the point cloud to count at scale r for a given metric. A fixed
/// cloud ignores both arguments; a Moran r-net rebuilds its cylinders per scale.
struct CloudProvider {
  std::string description;
  std::function<PointCloud(double r, Metric metric)> cloud;
};

CloudProvider fixed_cloud(PointCloud cloud, std::string description);

/// Centers of the depth-j cylinders with 2^-j <= r, j minimal. For the
/// Euclidean count, levels whose vertical digit moves a center by less than r
/// use only the a2 = 0 block (see EnumerateOptions::vertical_floor).
CloudProvider moran_rnet(const group::GroupSpec& spec, double s,
                         std::size_t budget = fractal::kDefaultBudget);

/// r = 2^-j for j = j_min..j_max (decreasing r).
std::vector<double> dyadic_scales(int j_min, int j_max);

/// Dyadic scales from 2^-j_min down to the smallest r with r >= 4 * finest_feature.
std::vector<double> scales_above_feature(double finest_feature, int j_min = 2, int j_cap = 30);

struct ReportRow {
  double r = 0.0;
  std::size_t count_euclid = 0;
  std::size_t count_homog = 0;
};

struct ComparisonReport {
  std::string description;
  int m1 = 0;
  int m2 = 0;
  std::vector<ReportRow> rows;
  DimensionEstimate dim_e;
  DimensionEstimate dim_g;
  double beta_minus = 0.0;  // at dim_e clamped to [0, n]
  double beta_plus = 0.0;
  double tau = kDefaultTau;
  bool pass = false;
};

/// Box counts in both metrics at each scale, fitted slopes, and the check
/// beta_-(dim_E) - tau <= dim_G <= beta_+(dim_E) + tau.
ComparisonReport dimension_comparison_report(const CloudProvider& provider,
                                             const group::GroupSpec& spec,
                                             std::span<const double> scales,
                                             double tau = kDefaultTau);

void write_report_csv(std::ostream& out, const ComparisonReport& report);
nlohmann::json report_json(const ComparisonReport& report);
std::string report_svg(const ComparisonReport& report);

/// Generic log-log scatter with optional fitted lines, used for ratio tables too.
struct SvgSeries {
  std::string label;
  std::string color;
  std::vector<std::pair<double, double>> points;  // (x, y) already in plot units
  bool has_line = false;
  double slope = 0.0;
  double intercept = 0.0;
};
std::string svg_plot(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<SvgSeries>& series);

}  // namespace ccf::dimlab
