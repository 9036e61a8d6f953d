#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>

namespace ccf {

__extension__ using uint128 = unsigned __int128;

// SplitMix64 finalizer; the mixing core of the counter-based generator below.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator: the value at (key, counter) is a pure function,
/// so item i of a parallel loop can draw from `split(i)` and produce the
/// same numbers regardless of thread count or scheduling.
class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

  /// Independent child generator; streams with different ids do not overlap.
  [[nodiscard]] constexpr CounterRng split(std::uint64_t stream_id) const noexcept {
    CounterRng child(0);
    child.key_ = mix64(key_ ^ mix64(stream_id + 0x632be59bd9b4e019ULL));
    child.counter_ = 0;
    return child;
  }

  std::uint64_t next_u64() noexcept { return mix64(key_ + mix64(counter_++)); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) noexcept {
    // Lemire-style multiply-shift; the bias is below 2^-64 * n, irrelevant here.
    return static_cast<std::uint64_t>((static_cast<uint128>(next_u64()) * n) >> 64);
  }

  double normal() noexcept {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform point in the closed Euclidean ball of radius `radius` about the origin.
  void ball(std::span<double> out, double radius) noexcept {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& x : out) {
        x = normal();
        norm2 += x * x;
      }
    } while (norm2 == 0.0);
    const double scale =
        radius * std::pow(uniform(), 1.0 / static_cast<double>(out.size())) / std::sqrt(norm2);
    for (double& x : out) x *= scale;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ccf
