#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "ccf/error.hpp"
#include "ccf/pieces.hpp"
#include "ccf/plane.hpp"

namespace ccf::dimlab {

using group::Vec;

ExcisionSpec ExcisionSpec::linear_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InputError("LinearDelta: delta must be > 0");
  return {Mode::linear_delta, delta};
}

ExcisionSpec ExcisionSpec::quadratic_m(double M) {
  if (!(M > 1.0) || !std::isfinite(M)) throw InputError("QuadraticM: M must be > 1");
  return {Mode::quadratic_m, M};
}

ExcisionSpec ExcisionSpec::power_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("PowerEps: eps must lie in (0,1)");
  return {Mode::power_eps, eps};
}

double ExcisionSpec::width(double r) const {
  if (!(r > 0.0)) throw InputError("ExcisionSpec::width: r must be > 0");
  switch (mode) {
    case Mode::linear_delta:
      return linear_delta(param).param * r;
    case Mode::quadratic_m:
      return quadratic_m(param).param * r * r;
    case Mode::power_eps:
      return std::pow(r, 1.0 + power_eps(param).param);
  }
  throw InternalError("ExcisionSpec: unknown mode");
}

std::string ExcisionSpec::describe() const {
  char buf[64];
  switch (mode) {
    case Mode::linear_delta:
      std::snprintf(buf, sizeof buf, "linear_delta(%.17g)", param);
      break;
    case Mode::quadratic_m:
      std::snprintf(buf, sizeof buf, "quadratic_m(%.17g)", param);
      break;
    case Mode::power_eps:
      std::snprintf(buf, sizeof buf, "power_eps(%.17g)", param);
      break;
  }
  return buf;
}

namespace {

constexpr double kRel = 1e-12;

// Euclidean distance to an affine plane with an orthonormal basis.
double plane_distance(const group::AffinePlane& plane, std::span<const double> q, double* scratch) {
  const Vec& base = plane.base();
  const std::size_t n = base.size();
  for (std::size_t k = 0; k < n; ++k) scratch[k] = q[k] - base[k];
  for (const Vec& e : plane.basis()) {
    double coef = 0.0;
    for (std::size_t k = 0; k < n; ++k) coef += scratch[k] * e[k];
    for (std::size_t k = 0; k < n; ++k) scratch[k] -= coef * e[k];
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += scratch[k] * scratch[k];
  return std::sqrt(acc);
}

// Largest distance to the plane over the box corners (the maximum of a
// convex function on a box is attained at a corner).
double max_corner_distance(const PieceSet& pieces, const group::AffinePlane& plane,
                           std::span<const double> lo, std::span<const double> hi,
                           std::vector<double>& corner, std::vector<double>& scratch) {
  const auto dim = static_cast<std::size_t>(pieces.dim);
  std::vector<std::size_t> free_axes;
  for (std::size_t i = 0; i < dim; ++i) {
    if (hi[i] > lo[i]) free_axes.push_back(i);
  }
  double best = 0.0;
  const std::size_t corners = std::size_t{1} << free_axes.size();
  for (std::size_t mask = 0; mask < corners; ++mask) {
    for (std::size_t i = 0; i < dim; ++i) corner[i] = lo[i];
    for (std::size_t b = 0; b < free_axes.size(); ++b) {
      if ((mask >> b) & 1U) corner[free_axes[b]] = hi[free_axes[b]];
    }
    if (pieces.frame == PieceSet::Frame::plane) {
      const Vec amb = pieces.to_ambient(corner);
      best = std::max(best, plane_distance(plane, amb, scratch.data()));
    } else {
      best = std::max(best, plane_distance(plane, corner, scratch.data()));
    }
  }
  return best;
}

}  // namespace

double excision_ratio_width(const PieceSet& pieces, std::span<const double> p, double r, double s,
                            double width, PlaneDistance distance) {
  if (pieces.size() == 0) throw InputError("excision_ratio: empty object");
  if (!(r > 0.0)) throw InputError("excision_ratio: r must be > 0");
  if (!(width >= 0.0)) throw InputError("excision_ratio: width must be >= 0");
  if (!(s >= 0.0)) throw InputError("excision_ratio: s must be >= 0");
  if (static_cast<int>(p.size()) != pieces.dim) throw InputError("excision_ratio: dimension mismatch");
  const double reach = r * (1.0 + kRel);
  const auto dim = static_cast<std::size_t>(pieces.dim);
  double total = 0.0;

  if (pieces.frame == PieceSet::Frame::plane && distance == PlaneDistance::in_plane) {
    // V(p) meets the plane in {t' = t_p}; keep the parts of each box with
    // |t - t_p| > width and test them against the ball.
    const std::size_t tk = dim - 1;
    const double tp = p[tk];
    std::vector<double> sub(dim);
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const auto lo = pieces.lo_of(k);
      const auto hi = pieces.hi_of(k);
      if (box_distance(lo, hi, p) > reach) continue;
      bool hit = false;
      if (hi[tk] > tp + width) {
        std::copy(lo.begin(), lo.end(), sub.begin());
        sub[tk] = std::max(lo[tk], tp + width);
        hit = box_distance(sub, hi, p) <= reach;
      }
      if (!hit && lo[tk] < tp - width) {
        std::copy(hi.begin(), hi.end(), sub.begin());
        sub[tk] = std::min(hi[tk], tp - width);
        hit = box_distance(lo, sub, p) <= reach;
      }
      if (hit) total += pieces.weight(k, s, Metric::euclidean);
    }
  } else {
    const Vec amb = pieces.to_ambient(p);
    const group::AffinePlane plane =
        group::horizontal_plane(pieces.spec, group::Point(amb, pieces.spec.m1()));
    std::vector<double> corner(dim);
    std::vector<double> scratch(static_cast<std::size_t>(pieces.spec.dim()));
    for (std::size_t k = 0; k < pieces.size(); ++k) {
      const auto lo = pieces.lo_of(k);
      const auto hi = pieces.hi_of(k);
      if (box_distance(lo, hi, p) > reach) continue;
      if (max_corner_distance(pieces, plane, lo, hi, corner, scratch) > width) {
        total += pieces.weight(k, s, Metric::euclidean);
      }
    }
  }
  return total / std::pow(2.0 * r, s);
}

double excision_ratio(const PieceSet& pieces, std::span<const double> p, double r, double s,
                      const ExcisionSpec& exc, PlaneDistance distance) {
  return excision_ratio_width(pieces, p, r, s, exc.width(r), distance);
}

double density_ratio(const PieceSet& pieces, std::span<const double> p, double r, double s,
                     Metric metric) {
  const Region ball = ball_region(pieces, p, r, metric);
  return covering_measure_serial(pieces, ball, s, metric) / std::pow(2.0 * r, s);
}

}  // namespace ccf::dimlab
