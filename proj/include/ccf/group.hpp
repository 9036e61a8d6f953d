#pragma once

// Step-2 Carnot group arithmetic in exponential coordinates.
//
// A point is [p1, p2] with p1 in R^m1 (horizontal layer) and p2 in R^m2.
// The group law is
//
//   [p1, p2] . [q1, q2] = [p1 + q1, p2 + q2 + P(p1, q1)],
//   P_j(x, y) = sum_{l < i} b[j][l][i] (x_l y_i - x_i y_l),
//
// dilations scale the layers by lambda and lambda^2, and the homogeneous
// metric is
//
//   d_inf(p, q) = max(|p1 - q1|, c |p2 - q2 + P(p1, q1)|^(1/2)).
//
// Everything here is a pure function of its arguments.

#include <cstddef>
#include <span>
#include <vector>

namespace ccf::group {

using Vec = std::vector<double>;

class GroupSpec {
 public:
  /// Abelian group R^m1 x R^m2 (all structure constants zero).
  GroupSpec(int m1, int m2, double c);

  /// Heisenberg group H^m with the law
  /// (x,y,t).(x',y',t') = (x+x', y+y', t+t' + 2(<y,x'> - <x,y'>)).
  static GroupSpec heisenberg(int m, double c);

  [[nodiscard]] int m1() const noexcept { return m1_; }
  [[nodiscard]] int m2() const noexcept { return m2_; }
  [[nodiscard]] int dim() const noexcept { return m1_ + m2_; }
  [[nodiscard]] double c() const noexcept { return c_; }

  /// Structure constant b[j][l][i], zero-based, with l < i.
  [[nodiscard]] double coefficient(int j, int l, int i) const;
  void set_coefficient(int j, int l, int i, double value);

  [[nodiscard]] GroupSpec with_metric_constant(double c) const;
  [[nodiscard]] bool is_abelian() const noexcept;
  [[nodiscard]] double max_abs_coefficient() const noexcept;

  /// Matrix of the linear map y -> P(x, y) for fixed x (m2 rows, m1 columns, row-major).
  [[nodiscard]] Vec bracket_matrix(std::span<const double> x) const;

  /// Raw coefficient storage, indexed [j][l][i] with stride m1.
  [[nodiscard]] std::span<const double> coefficients() const noexcept { return b_; }

  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;

 private:
  [[nodiscard]] std::size_t index(int j, int l, int i) const;

  int m1_;
  int m2_;
  double c_;
  Vec b_;
};

/// Group element in exponential coordinates, split into its two layers.
class Point {
 public:
  Point() = default;
  Point(Vec coords, int m1);
  static Point from_layers(std::span<const double> p1, std::span<const double> p2);
  static Point identity(const GroupSpec& spec);

  [[nodiscard]] std::span<const double> coords() const noexcept { return coords_; }
  [[nodiscard]] std::span<double> coords() noexcept { return coords_; }
  [[nodiscard]] std::span<const double> p1() const noexcept {
    return std::span<const double>(coords_).first(static_cast<std::size_t>(m1_));
  }
  [[nodiscard]] std::span<const double> p2() const noexcept {
    return std::span<const double>(coords_).subspan(static_cast<std::size_t>(m1_));
  }
  [[nodiscard]] int m1() const noexcept { return m1_; }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(coords_.size()); }
  double operator[](std::size_t k) const { return coords_[k]; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  Vec coords_;
  int m1_ = 0;
};

/// P(a, b). Antisymmetric and bilinear.
Vec bracket_polynomial(const GroupSpec& spec, std::span<const double> a, std::span<const double> b);

Point multiply(const GroupSpec& spec, const Point& p, const Point& q);

/// Step 2: the inverse is coordinate negation.
Point invert(const GroupSpec& spec, const Point& p);

Point dilate(const GroupSpec& spec, double lambda, const Point& p);

double dist_homogeneous(const GroupSpec& spec, const Point& p, const Point& q);

/// Allocation-free variant on raw coordinate spans of length spec.dim(); no size checks.
double dist_homogeneous(const GroupSpec& spec, std::span<const double> p,
                        std::span<const double> q) noexcept;

double dist_euclidean(std::span<const double> p, std::span<const double> q);
inline double dist_euclidean(const Point& p, const Point& q) {
  return dist_euclidean(p.coords(), q.coords());
}

/// Koranyi distance on H^m with points (x, y, t) in R^(2m+1).
double dist_koranyi(int m, const Point& p, const Point& q);

/// C_R = 2R sqrt(m2 m1 (m1-1) max b^2): bounds |P(p1,q1)| by C_R|p1-q1|
/// and by C_R|q1| on B_E(0,R).
double c_r_bound(const GroupSpec& spec, double radius);

double norm(std::span<const double> v) noexcept;

}  // namespace ccf::group
