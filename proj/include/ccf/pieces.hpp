#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ccf/group.hpp"
#include "ccf/moran.hpp"
#include "ccf/sampling.hpp"
#include "ccf/slab.hpp"

namespace ccf::dimlab {

using fractal::PointCloud;

enum class Metric { euclidean, homogeneous };

const char* to_string(Metric m) noexcept;

/// Axis-aligned boxes with their diameters, the unit of every covering sum.
///
/// In the ambient frame boxes live in group coordinates. In the plane frame
/// they live in the (x, t) coordinates of a slab construction's plane; the
/// embedding into the group is a coordinate inclusion, so Euclidean balls
/// about plane points are the same in both frames.
struct PieceSet {
  enum class Frame { ambient, plane };

  Frame frame = Frame::ambient;
  fractal::Embedding embedding = fractal::Embedding::heis_xt;  // plane frame only
  group::GroupSpec spec{1, 1, 0.5};
  int dim = 0;  // coordinates per box corner
  int depth = 0;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> diam_e;
  std::vector<double> diam_inf;
  /// Optional fixed mass per piece (point clouds); replaces diam^s when set.
  std::vector<double> mass;

  [[nodiscard]] std::size_t size() const noexcept { return diam_e.size(); }
  [[nodiscard]] std::span<const double> lo_of(std::size_t k) const {
    return std::span<const double>(lo).subspan(k * static_cast<std::size_t>(dim),
                                               static_cast<std::size_t>(dim));
  }
  [[nodiscard]] std::span<const double> hi_of(std::size_t k) const {
    return std::span<const double>(hi).subspan(k * static_cast<std::size_t>(dim),
                                               static_cast<std::size_t>(dim));
  }
  [[nodiscard]] double weight(std::size_t k, double s, Metric metric) const;

  /// Ambient coordinates of a point given in this set's frame.
  [[nodiscard]] group::Vec to_ambient(std::span<const double> p) const;
};

/// Plane-frame pieces of a slab construction: diam_E = (m h^2 + v^2)^(1/2),
/// diam_inf = max(sqrt(m) h, c v^(1/2)) since P vanishes on the plane.
PieceSet pieces_from(const fractal::Construction& construction, const group::GroupSpec& spec);

/// Cylinder boxes: diam_E is the box diagonal, diam_inf the similarity bound diam_inf(E)/2^depth.
PieceSet pieces_from(const fractal::MoranSet& set);

/// Each point is a degenerate box carrying its weight as mass.
PieceSet pieces_from(const PointCloud& cloud, const group::GroupSpec& spec);

/// "Does the closed box [lo, hi] meet the region?" Outer semantics: a
/// predicate may answer true for a box that only nearly meets the region,
/// never false for one that does.
using Region = std::function<bool(std::span<const double> lo, std::span<const double> hi)>;

Region region_all();
Region region_none();
/// {x : x[axis] <= threshold} if below, else {x : x[axis] >= threshold}.
Region region_halfspace(int axis, double threshold, bool below);
Region region_intersection(Region a, Region b);

/// Euclidean distance from p to the box (0 inside).
double box_distance(std::span<const double> lo, std::span<const double> hi,
                    std::span<const double> p);

/// Closed metric ball about p (given in the pieces' frame).
Region ball_region(const PieceSet& pieces, std::span<const double> p, double r, Metric metric);

/// Sum of diam^s (or mass) over pieces whose box meets the region.
double covering_measure(const PieceSet& pieces, const Region& region, double s, Metric metric);
double covering_measure_serial(const PieceSet& pieces, const Region& region, double s,
                               Metric metric);

struct ExcisionSpec {
  enum class Mode { linear_delta, quadratic_m, power_eps };
  Mode mode = Mode::linear_delta;
  double param = 0.125;

  static ExcisionSpec linear_delta(double delta);
  static ExcisionSpec quadratic_m(double M);
  static ExcisionSpec power_eps(double eps);
  /// w(r) = delta r, M r^2 or r^(1 + eps). Validates the parameter.
  [[nodiscard]] double width(double r) const;
  [[nodiscard]] std::string describe() const;
};

/// How the distance to V(p) is measured.
///   in_plane: for plane-frame pieces, distance inside the construction's
///             plane to V(p) restricted to it, which is {t' = t_p}.
///   ambient:  Euclidean distance in the group to the full plane V(p).
/// Ambient-frame pieces always use the ambient distance.
enum class PlaneDistance { in_plane, ambient };

/// covering_measure of {q in B_E(p,r) : dist(q, V(p)) > w(r)} over (2r)^s,
/// with Euclidean diameters.
double excision_ratio(const PieceSet& pieces, std::span<const double> p, double r, double s,
                      const ExcisionSpec& exc, PlaneDistance distance = PlaneDistance::in_plane);

/// Same ratio with an explicit width instead of an excision mode.
double excision_ratio_width(const PieceSet& pieces, std::span<const double> p, double r, double s,
                            double width, PlaneDistance distance = PlaneDistance::in_plane);

/// covering_measure of B_metric(p, r) over (2r)^s.
double density_ratio(const PieceSet& pieces, std::span<const double> p, double r, double s,
                     Metric metric);

}  // namespace ccf::dimlab
