#include "ccf/profile.hpp"

#include <numeric>

#include "ccf/error.hpp"

namespace ccf::group {

StrataProfile::StrataProfile(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw InputError("StrataProfile: need at least one layer");
  for (int d : dims_) {
    if (d < 1) throw InputError("StrataProfile: layer dimensions must be >= 1");
  }
}

int StrataProfile::ambient_dim() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), 0);
}

int StrataProfile::homogeneous_dim() const noexcept {
  int q = 0;
  for (int i = 0; i < step(); ++i) q += (i + 1) * dims_[i];
  return q;
}

namespace {

void check_range(const StrataProfile& profile, double s) {
  if (!(s >= 0.0 && s <= profile.ambient_dim())) {
    throw InputError("beta: s must lie in [0, n]");
  }
}

}  // namespace

double beta_minus(const StrataProfile& profile, double s) {
  check_range(profile, s);
  // Fill layers from the bottom: on m1+..+m_{j-1} < s <= m1+..+m_j the slope is j
  // and beta_-(s) = j s - sum_{i<j} (j - i) m_i.
  const auto& m = profile.dims();
  const int k = profile.step();
  double filled = 0.0;
  for (int j = 1; j <= k; ++j) {
    const double upper = filled + m[j - 1];
    if (s <= upper || j == k) {
      double offset = 0.0;
      for (int i = 1; i < j; ++i) offset += static_cast<double>(j - i) * m[i - 1];
      return j * s - offset;
    }
    filled = upper;
  }
  return 0.0;  // unreachable
}

double beta_plus(const StrataProfile& profile, double s) {
  check_range(profile, s);
  // Fill layers from the top: on m_{j+1}+..+m_k < s <= m_j+..+m_k the slope is j
  // and beta_+(s) = j s + sum_{i>j} (i - j) m_i.
  const auto& m = profile.dims();
  const int k = profile.step();
  double filled = 0.0;
  for (int j = k; j >= 1; --j) {
    const double upper = filled + m[j - 1];
    if (s <= upper || j == 1) {
      double offset = 0.0;
      for (int i = j + 1; i <= k; ++i) offset += static_cast<double>(i - j) * m[i - 1];
      return j * s + offset;
    }
    filled = upper;
  }
  return 0.0;  // unreachable
}

}  // namespace ccf::group
