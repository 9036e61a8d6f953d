#include "ccf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "ccf/boxcount.hpp"
#include "ccf/error.hpp"
#include "ccf/profile.hpp"

namespace ccf::dimlab {

CloudProvider fixed_cloud(PointCloud cloud, std::string description) {
  if (cloud.size() == 0) throw InputError("fixed_cloud: empty cloud");
  return {std::move(description),
          [cloud = std::move(cloud)](double, Metric) { return cloud; }};
}

CloudProvider moran_rnet(const group::GroupSpec& spec, double s, std::size_t budget) {
  const fractal::AttractorBox attractor = fractal::attractor_box(spec, 8);
  char buf[96];
  std::snprintf(buf, sizeof buf, "moran r-net s=%.17g", s);
  return {buf, [spec, s, budget, attractor](double r, Metric metric) {
            if (!(r > 0.0 && r <= 1.0)) throw InputError("moran_rnet: r must lie in (0, 1]");
            const int depth = static_cast<int>(std::ceil(-std::log2(r) - 1e-9));
            fractal::EnumerateOptions opts;
            opts.budget = budget;
            opts.vertical_floor = metric == Metric::euclidean ? r : 0.0;
            const fractal::MoranSet set = fractal::enumerate_cylinders(spec, s, depth, attractor, opts);
            PointCloud cloud;
            cloud.dim = spec.dim();
            cloud.coords.reserve(set.size() * static_cast<std::size_t>(cloud.dim));
            for (std::size_t k = 0; k < set.size(); ++k) cloud.push(set.center(k), 1.0);
            return cloud;
          }};
}

std::vector<double> dyadic_scales(int j_min, int j_max) {
  if (j_min > j_max) throw InputError("dyadic_scales: j_min > j_max");
  std::vector<double> out;
  for (int j = j_min; j <= j_max; ++j) out.push_back(std::ldexp(1.0, -j));
  return out;
}

std::vector<double> scales_above_feature(double finest_feature, int j_min, int j_cap) {
  if (!(finest_feature > 0.0)) throw InputError("scales_above_feature: feature size must be > 0");
  std::vector<double> out;
  for (int j = j_min; j <= j_cap; ++j) {
    const double r = std::ldexp(1.0, -j);
    if (r < 4.0 * finest_feature) break;
    out.push_back(r);
  }
  return out;
}

ComparisonReport dimension_comparison_report(const CloudProvider& provider,
                                             const group::GroupSpec& spec,
                                             std::span<const double> scales, double tau) {
  if (scales.size() < 3) throw InputError("dimension_comparison_report: need at least 3 scales");
  if (!(tau >= 0.0)) throw InputError("dimension_comparison_report: tau must be >= 0");
  ComparisonReport rep;
  rep.description = provider.description;
  rep.m1 = spec.m1();
  rep.m2 = spec.m2();
  rep.tau = tau;
  ScaleSeries euclid;
  ScaleSeries homog;
  for (double r : scales) {
    const PointCloud ce = provider.cloud(r, Metric::euclidean);
    const PointCloud cg = provider.cloud(r, Metric::homogeneous);
    ReportRow row{r, box_count_euclidean(ce, r), box_count_homogeneous(cg, r, spec)};
    rep.rows.push_back(row);
    euclid.entries.push_back({r, static_cast<double>(row.count_euclid)});
    homog.entries.push_back({r, static_cast<double>(row.count_homog)});
  }
  rep.dim_e = fit_dimension(euclid);
  rep.dim_g = fit_dimension(homog);
  const group::StrataProfile profile({spec.m1(), spec.m2()});
  const double s = std::clamp(rep.dim_e.slope, 0.0, static_cast<double>(spec.dim()));
  rep.beta_minus = group::beta_minus(profile, s);
  rep.beta_plus = group::beta_plus(profile, s);
  rep.pass = rep.beta_minus - tau <= rep.dim_g.slope && rep.dim_g.slope <= rep.beta_plus + tau;
  return rep;
}

void write_report_csv(std::ostream& out, const ComparisonReport& report) {
  out << "r,count_euclid,count_homog\n";
  char buf[32];
  for (const ReportRow& row : report.rows) {
    std::snprintf(buf, sizeof buf, "%.17g", row.r);
    out << buf << ',' << row.count_euclid << ',' << row.count_homog << '\n';
  }
}

namespace {

nlohmann::json estimate_json(const DimensionEstimate& e) {
  return {{"slope", e.slope},       {"intercept", e.intercept}, {"residual", e.residual},
          {"r_min", e.r_min},       {"r_max", e.r_max},         {"scales_used", e.scales_used}};
}

}  // namespace

nlohmann::json report_json(const ComparisonReport& report) {
  return {{"object", report.description},
          {"dim_E", report.dim_e.slope},
          {"dim_G", report.dim_g.slope},
          {"beta_minus", report.beta_minus},
          {"beta_plus", report.beta_plus},
          {"tolerance", report.tau},
          {"pass", report.pass},
          {"fit_E", estimate_json(report.dim_e)},
          {"fit_G", estimate_json(report.dim_g)}};
}

std::string report_svg(const ComparisonReport& report) {
  SvgSeries e{"euclidean", "#1f77b4", {}, true, report.dim_e.slope,
              report.dim_e.intercept / std::log(2.0)};
  SvgSeries g{"homogeneous", "#d62728", {}, true, report.dim_g.slope,
              report.dim_g.intercept / std::log(2.0)};
  for (const ReportRow& row : report.rows) {
    const double x = -std::log2(row.r);
    e.points.emplace_back(x, std::log2(static_cast<double>(row.count_euclid)));
    g.points.emplace_back(x, std::log2(static_cast<double>(row.count_homog)));
  }
  char title[160];
  std::snprintf(title, sizeof title, "%s: dim_E %.3f, dim_G %.3f", report.description.c_str(),
                report.dim_e.slope, report.dim_g.slope);
  return svg_plot(title, "log2(1/r)", "log2 N(r)", {e, g});
}

std::string svg_plot(const std::string& title, const std::string& x_label,
                     const std::string& y_label, const std::vector<SvgSeries>& series) {
  constexpr double W = 640, H = 480, L = 70, R = 20, T = 40, B = 60;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const SvgSeries& s : series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
  const double py = 0.05 * (y1 - y0);
  y0 -= py;
  y1 += py;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  std::ostringstream out;
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
         "viewBox=\"0 0 640 480\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">", W / 2);
  out << buf;
  for (char ch : title) {
    if (ch == '<') out << "&lt;";
    else if (ch == '&') out << "&amp;";
    else out << ch;
  }
  out << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                L, H - B, W - R, H - B, L, T, L, H - B);
  out << buf;
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0;
    const double yv = y0 + (y1 - y0) * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%g\" text-anchor=\"middle\">%.3g</text>\n"
                  "<text x=\"%g\" y=\"%.2f\" text-anchor=\"end\">%.3g</text>\n",
                  sx(xv), H - B + 18, xv, L - 6, sy(yv) + 4, yv);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%s</text>\n",
                (L + W - R) / 2, H - 16, x_label.c_str());
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<text x=\"16\" y=\"%g\" text-anchor=\"middle\" transform=\"rotate(-90 16 %g)\">%s</text>\n",
                (T + H - B) / 2, (T + H - B) / 2, y_label.c_str());
  out << buf;
  int legend = 0;
  for (const SvgSeries& s : series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3.5\" fill=\"%s\"/>\n",
                    sx(x), sy(y), s.color.c_str());
      out << buf;
    }
    if (s.has_line) {
      const double ya = s.intercept + s.slope * x0;
      const double yb = s.intercept + s.slope * x1;
      std::snprintf(buf, sizeof buf,
                    "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" "
                    "stroke-dasharray=\"5,3\"/>\n",
                    sx(x0), sy(ya), sx(x1), sy(yb), s.color.c_str());
      out << buf;
    }
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%g\" y=\"%d\" width=\"10\" height=\"10\" fill=\"%s\"/>"
                  "<text x=\"%g\" y=\"%d\">%s</text>\n",
                  L + 10, static_cast<int>(T) + 6 + 16 * legend, s.color.c_str(), L + 26,
                  static_cast<int>(T) + 15 + 16 * legend, s.label.c_str());
    out << buf;
    ++legend;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace ccf::dimlab
