#include "ccf/group.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ccf/error.hpp"

namespace ccf::group {

namespace {

void require_point(const GroupSpec& spec, const Point& p, const char* what) {
  if (p.m1() != spec.m1() || p.dim() != spec.dim()) {
    throw InputError(std::string(what) + ": point has layers (" + std::to_string(p.m1()) + ", " +
                     std::to_string(p.dim() - p.m1()) + "), group has (" +
                     std::to_string(spec.m1()) + ", " + std::to_string(spec.m2()) + ")");
  }
}

}  // namespace

GroupSpec::GroupSpec(int m1, int m2, double c) : m1_(m1), m2_(m2), c_(c) {
  if (m1 < 1 || m2 < 1) throw InputError("GroupSpec: layer dimensions must be positive");
  if (!(c > 0.0 && c < 1.0)) throw InputError("GroupSpec: metric constant c must lie in (0,1)");
  b_.assign(static_cast<std::size_t>(m2) * m1 * m1, 0.0);
}

GroupSpec GroupSpec::heisenberg(int m, double c) {
  if (m < 1) throw InputError("heisenberg: m must be >= 1");
  GroupSpec spec(2 * m, 1, c);
  // 2(<y,x'> - <x,y'>) = sum_i -2 (x_i y'_i - y_i x'_i), with x_i at slot i and y_i at slot m+i.
  for (int i = 0; i < m; ++i) spec.set_coefficient(0, i, m + i, -2.0);
  return spec;
}

std::size_t GroupSpec::index(int j, int l, int i) const {
  if (j < 0 || j >= m2_ || l < 0 || i >= m1_ || !(l < i)) {
    throw InputError("GroupSpec: coefficient index (" + std::to_string(j) + "," +
                     std::to_string(l) + "," + std::to_string(i) + ") out of range or l >= i");
  }
  return (static_cast<std::size_t>(j) * m1_ + l) * m1_ + i;
}

double GroupSpec::coefficient(int j, int l, int i) const { return b_[index(j, l, i)]; }

void GroupSpec::set_coefficient(int j, int l, int i, double value) {
  if (!std::isfinite(value)) throw InputError("GroupSpec: coefficients must be finite");
  b_[index(j, l, i)] = value;
}

GroupSpec GroupSpec::with_metric_constant(double c) const {
  if (!(c > 0.0 && c < 1.0)) throw InputError("GroupSpec: metric constant c must lie in (0,1)");
  GroupSpec out = *this;
  out.c_ = c;
  return out;
}

bool GroupSpec::is_abelian() const noexcept {
  return std::all_of(b_.begin(), b_.end(), [](double v) { return v == 0.0; });
}

double GroupSpec::max_abs_coefficient() const noexcept {
  double best = 0.0;
  for (double v : b_) best = std::max(best, std::abs(v));
  return best;
}

Vec GroupSpec::bracket_matrix(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != m1_) throw InputError("bracket_matrix: expected length m1");
  Vec out(static_cast<std::size_t>(m2_) * m1_, 0.0);
  for (int j = 0; j < m2_; ++j) {
    double* row = out.data() + static_cast<std::size_t>(j) * m1_;
    for (int l = 0; l < m1_; ++l) {
      for (int i = l + 1; i < m1_; ++i) {
        const double b = b_[(static_cast<std::size_t>(j) * m1_ + l) * m1_ + i];
        if (b == 0.0) continue;
        // b (x_l y_i - x_i y_l)
        row[i] += b * x[l];
        row[l] -= b * x[i];
      }
    }
  }
  return out;
}

Point::Point(Vec coords, int m1) : coords_(std::move(coords)), m1_(m1) {
  if (m1 < 1 || m1 >= static_cast<int>(coords_.size())) {
    throw InputError("Point: need 1 <= m1 < number of coordinates");
  }
}

Point Point::from_layers(std::span<const double> p1, std::span<const double> p2) {
  Vec coords(p1.begin(), p1.end());
  coords.insert(coords.end(), p2.begin(), p2.end());
  return Point(std::move(coords), static_cast<int>(p1.size()));
}

Point Point::identity(const GroupSpec& spec) {
  return Point(Vec(static_cast<std::size_t>(spec.dim()), 0.0), spec.m1());
}

Vec bracket_polynomial(const GroupSpec& spec, std::span<const double> a,
                       std::span<const double> b) {
  const int m1 = spec.m1();
  if (static_cast<int>(a.size()) != m1 || static_cast<int>(b.size()) != m1) {
    throw InputError("bracket_polynomial: vectors must have length m1 = " + std::to_string(m1));
  }
  const auto coeff = spec.coefficients();
  Vec out(static_cast<std::size_t>(spec.m2()), 0.0);
  for (int j = 0; j < spec.m2(); ++j) {
    double acc = 0.0;
    for (int l = 0; l < m1; ++l) {
      for (int i = l + 1; i < m1; ++i) {
        const double bji = coeff[(static_cast<std::size_t>(j) * m1 + l) * m1 + i];
        if (bji != 0.0) acc += bji * (a[l] * b[i] - a[i] * b[l]);
      }
    }
    out[j] = acc;
  }
  return out;
}

Point multiply(const GroupSpec& spec, const Point& p, const Point& q) {
  require_point(spec, p, "multiply");
  require_point(spec, q, "multiply");
  const Vec bracket = bracket_polynomial(spec, p.p1(), q.p1());
  Vec coords(static_cast<std::size_t>(spec.dim()));
  for (int k = 0; k < spec.m1(); ++k) coords[k] = p[k] + q[k];
  for (int j = 0; j < spec.m2(); ++j) {
    const std::size_t k = static_cast<std::size_t>(spec.m1() + j);
    coords[k] = p[k] + q[k] + bracket[j];
  }
  return Point(std::move(coords), spec.m1());
}

Point invert(const GroupSpec& spec, const Point& p) {
  require_point(spec, p, "invert");
  Vec coords(p.coords().begin(), p.coords().end());
  for (double& x : coords) x = -x;
  return Point(std::move(coords), spec.m1());
}

Point dilate(const GroupSpec& spec, double lambda, const Point& p) {
  require_point(spec, p, "dilate");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("dilate: lambda must be > 0");
  Vec coords(p.coords().begin(), p.coords().end());
  for (int k = 0; k < spec.m1(); ++k) coords[k] *= lambda;
  for (int k = spec.m1(); k < spec.dim(); ++k) coords[k] *= lambda * lambda;
  return Point(std::move(coords), spec.m1());
}

double norm(std::span<const double> v) noexcept {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double dist_homogeneous(const GroupSpec& spec, std::span<const double> p,
                        std::span<const double> q) noexcept {
  const int m1 = spec.m1();
  const auto coeff = spec.coefficients();
  double horizontal = 0.0;
  for (int k = 0; k < m1; ++k) {
    const double d = p[k] - q[k];
    horizontal += d * d;
  }
  double vertical = 0.0;
  for (int j = 0; j < spec.m2(); ++j) {
    double bracket = 0.0;
    for (int l = 0; l < m1; ++l) {
      for (int i = l + 1; i < m1; ++i) {
        const double b = coeff[(static_cast<std::size_t>(j) * m1 + l) * m1 + i];
        if (b != 0.0) bracket += b * (p[l] * q[i] - p[i] * q[l]);
      }
    }
    const double d = p[m1 + j] - q[m1 + j] + bracket;
    vertical += d * d;
  }
  return std::max(std::sqrt(horizontal), spec.c() * std::pow(vertical, 0.25));
}

double dist_homogeneous(const GroupSpec& spec, const Point& p, const Point& q) {
  require_point(spec, p, "dist_homogeneous");
  require_point(spec, q, "dist_homogeneous");
  return dist_homogeneous(spec, p.coords(), q.coords());
}

double dist_euclidean(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InputError("dist_euclidean: dimension mismatch");
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = p[k] - q[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double dist_koranyi(int m, const Point& p, const Point& q) {
  const auto n = static_cast<std::size_t>(2 * m + 1);
  if (m < 1 || p.coords().size() != n || q.coords().size() != n) {
    throw InputError("dist_koranyi: points must lie in R^(2m+1)");
  }
  // p = (x, y, t), q = (x', y', t')
  double horizontal2 = 0.0;
  double cross = 0.0;
  for (int i = 0; i < m; ++i) {
    const double x = p[i], y = p[m + i], xq = q[i], yq = q[m + i];
    horizontal2 += (x - xq) * (x - xq) + (y - yq) * (y - yq);
    cross += xq * y - x * yq;
  }
  const double vertical = p[2 * m] - q[2 * m] + 2.0 * cross;
  return std::pow(horizontal2 * horizontal2 + vertical * vertical, 0.25);
}

double c_r_bound(const GroupSpec& spec, double radius) {
  if (!(radius > 0.0)) throw InputError("c_r_bound: R must be > 0");
  const double bmax = spec.max_abs_coefficient();
  const double m1 = spec.m1();
  const double m2 = spec.m2();
  return 2.0 * radius * std::sqrt(m2 * m1 * (m1 - 1.0) * bmax * bmax);
}

}  // namespace ccf::group
