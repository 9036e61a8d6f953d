#include "ccf/plane.hpp"

#include <cmath>

#include "ccf/error.hpp"

namespace ccf::group {

namespace {

constexpr double kDegenerateNorm = 1e-12;
constexpr double kOrthonormalTol = 1e-9;

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) acc += a[k] * b[k];
  return acc;
}

}  // namespace

AffinePlane::AffinePlane(Vec base, std::vector<Vec> basis)
    : base_(std::move(base)), basis_(std::move(basis)) {
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    if (basis_[a].size() != base_.size()) {
      throw InternalError("AffinePlane: basis vector dimension differs from base point");
    }
    for (std::size_t b = a; b < basis_.size(); ++b) {
      const double expected = (a == b) ? 1.0 : 0.0;
      if (std::abs(dot(basis_[a], basis_[b]) - expected) > kOrthonormalTol) {
        throw InternalError("AffinePlane: basis is not orthonormal");
      }
    }
  }
}

AffinePlane AffinePlane::from_spanning(Vec base, const std::vector<Vec>& spanning) {
  std::vector<Vec> basis;
  basis.reserve(spanning.size());
  for (const Vec& v : spanning) {
    Vec u = v;
    // Modified Gram-Schmidt, two passes for stability.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& e : basis) {
        const double proj = dot(u, e);
        for (std::size_t k = 0; k < u.size(); ++k) u[k] -= proj * e[k];
      }
    }
    const double len = norm(u);
    if (len < kDegenerateNorm) throw InternalError("AffinePlane: spanning vectors are degenerate");
    for (double& x : u) x /= len;
    basis.push_back(std::move(u));
  }
  return AffinePlane(std::move(base), std::move(basis));
}

Vec AffinePlane::project(std::span<const double> q) const {
  if (q.size() != base_.size()) throw InputError("AffinePlane::project: dimension mismatch");
  Vec offset(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) offset[k] = q[k] - base_[k];
  Vec out = base_;
  for (const Vec& e : basis_) {
    const double coef = dot(offset, e);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += coef * e[k];
  }
  return out;
}

AffinePlane horizontal_plane(const GroupSpec& spec, const Point& p) {
  if (p.m1() != spec.m1() || p.dim() != spec.dim()) {
    throw InputError("horizontal_plane: point does not match group dimensions");
  }
  const int m1 = spec.m1();
  const Vec bracket = spec.bracket_matrix(p.p1());  // column i = P(p1, e_i)
  std::vector<Vec> spanning;
  spanning.reserve(static_cast<std::size_t>(m1));
  for (int i = 0; i < m1; ++i) {
    Vec v(static_cast<std::size_t>(spec.dim()), 0.0);
    v[i] = 1.0;
    for (int j = 0; j < spec.m2(); ++j) {
      v[m1 + j] = bracket[static_cast<std::size_t>(j) * m1 + i];
    }
    spanning.push_back(std::move(v));
  }
  return AffinePlane::from_spanning(Vec(p.coords().begin(), p.coords().end()), spanning);
}

double dist_to_plane(const AffinePlane& plane, std::span<const double> q) {
  if (static_cast<int>(q.size()) != plane.ambient_dim()) {
    throw InputError("dist_to_plane: point dimension differs from plane ambient dimension");
  }
  const Vec& base = plane.base();
  Vec residual(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) residual[k] = q[k] - base[k];
  for (const Vec& e : plane.basis()) {
    const double coef = dot(residual, e);
    for (std::size_t k = 0; k < residual.size(); ++k) residual[k] -= coef * e[k];
  }
  return norm(residual);
}

}  // namespace ccf::group
