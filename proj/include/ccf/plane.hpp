#pragma once

#include <span>
#include <vector>

#include "ccf/group.hpp"

namespace ccf::group {

/// Affine subspace base + span(basis) of R^n with an orthonormal basis.
/// Construction validates orthonormality, so distance queries never see a
/// degenerate basis.
class AffinePlane {
 public:
  /// `basis` must already be orthonormal (tolerance 1e-9); throws InternalError otherwise.
  AffinePlane(Vec base, std::vector<Vec> basis);

  /// Gram-Schmidt on arbitrary spanning vectors. A vector whose residual norm
  /// falls below 1e-12 makes the span degenerate and throws InternalError.
  static AffinePlane from_spanning(Vec base, const std::vector<Vec>& spanning);

  [[nodiscard]] const Vec& base() const noexcept { return base_; }
  [[nodiscard]] const std::vector<Vec>& basis() const noexcept { return basis_; }
  [[nodiscard]] int ambient_dim() const noexcept { return static_cast<int>(base_.size()); }
  [[nodiscard]] int plane_dim() const noexcept { return static_cast<int>(basis_.size()); }

  /// Orthogonal projection of q onto the plane.
  [[nodiscard]] Vec project(std::span<const double> q) const;

 private:
  Vec base_;
  std::vector<Vec> basis_;
};

/// V(p) = {[q1, p2 + P(p1, q1)]}: the left translate of the first layer by p.
AffinePlane horizontal_plane(const GroupSpec& spec, const Point& p);

/// Euclidean distance from q to the plane.
double dist_to_plane(const AffinePlane& plane, std::span<const double> q);

}  // namespace ccf::group
