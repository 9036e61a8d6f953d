#pragma once

#include <vector>

namespace ccf::group {

/// Layer dimensions (m1, ..., mk) of a step-k stratification.
class StrataProfile {
 public:
  explicit StrataProfile(std::vector<int> dims);

  [[nodiscard]] const std::vector<int>& dims() const noexcept { return dims_; }
  [[nodiscard]] int step() const noexcept { return static_cast<int>(dims_.size()); }
  [[nodiscard]] int ambient_dim() const noexcept;
  /// Q = sum i * m_i.
  [[nodiscard]] int homogeneous_dim() const noexcept;

 private:
  std::vector<int> dims_;
};

// Dimension-comparison envelopes: beta_minus(dim_E A) <= dim_G A <= beta_plus(dim_E A).
// Both are continuous, piecewise linear, nondecreasing, vanish at 0 and equal Q at n.
// For step 2 they reduce to max{s, 2s - m1} and min{2s, s + m2}.
double beta_minus(const StrataProfile& profile, double s);
double beta_plus(const StrataProfile& profile, double s);

}  // namespace ccf::group
