#include "ccf/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "ccf/error.hpp"
#include "ccf/rng.hpp"

namespace ccf::group {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kResolution = 1e-3;

bool violates(const GroupSpec& spec, std::span<const double> row, int dim) {
  const auto n = static_cast<std::size_t>(dim);
  const auto p = row.subspan(0, n);
  const auto w = row.subspan(n, n);
  const auto q = row.subspan(2 * n, n);
  const double direct = dist_homogeneous(spec, p, q);
  const double detour = dist_homogeneous(spec, p, w) + dist_homogeneous(spec, w, q);
  return direct > detour + kSlack * std::max(1.0, direct);
}

std::span<const double> row_of(const TripleSample& t, std::size_t k) {
  const std::size_t stride = 3 * static_cast<std::size_t>(t.dim);
  return std::span<const double>(t.coords).subspan(k * stride, stride);
}

}  // namespace

TripleSample sample_triples(int dim, std::size_t count, double radius, std::uint64_t seed) {
  if (dim < 1) throw InputError("sample_triples: dim must be >= 1");
  if (!(radius > 0.0)) throw InputError("sample_triples: radius must be > 0");
  TripleSample out;
  out.dim = dim;
  const std::size_t stride = 3 * static_cast<std::size_t>(dim);
  out.coords.resize(count * stride);
  const CounterRng root(seed);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(k));
    std::span<double> row(out.coords.data() + static_cast<std::size_t>(k) * stride, stride);
    for (int part = 0; part < 3; ++part) {
      rng.ball(row.subspan(static_cast<std::size_t>(part * dim), static_cast<std::size_t>(dim)),
               radius);
    }
  }
  return out;
}

std::size_t count_triangle_violations_serial(const GroupSpec& spec, const TripleSample& triples) {
  if (triples.dim != spec.dim()) throw InputError("count_triangle_violations: dimension mismatch");
  std::size_t bad = 0;
  for (std::size_t k = 0; k < triples.size(); ++k) {
    if (violates(spec, row_of(triples, k), triples.dim)) ++bad;
  }
  return bad;
}

std::size_t count_triangle_violations(const GroupSpec& spec, const TripleSample& triples) {
  if (triples.dim != spec.dim()) throw InputError("count_triangle_violations: dimension mismatch");
  std::size_t bad = 0;
  const auto n = static_cast<std::ptrdiff_t>(triples.size());
#pragma omp parallel for reduction(+ : bad) schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    if (violates(spec, row_of(triples, static_cast<std::size_t>(k)), triples.dim)) ++bad;
  }
  return bad;
}

Calibration calibrate_metric_constant(const GroupSpec& spec, std::size_t sample_count,
                                      double radius, std::uint64_t seed) {
  if (sample_count < 1) throw InputError("calibrate_metric_constant: sample_count must be >= 1");
  const TripleSample triples = sample_triples(spec.dim(), sample_count, radius, seed);
  auto bad_at = [&](double c) {
    return count_triangle_violations(spec.with_metric_constant(c), triples);
  };

  // Search on the grid c = k * 1e-3, k = 1..999.
  int lo = 1;
  int hi = 999;
  if (bad_at(lo * kResolution) != 0) {
    return {lo * kResolution, triples.size(), bad_at(lo * kResolution)};
  }
  if (bad_at(hi * kResolution) == 0) return {hi * kResolution, triples.size(), 0};
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (bad_at(mid * kResolution) == 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo * kResolution, triples.size(), 0};
}

ComparisonConstant estimate_comparison_constant(const GroupSpec& spec, double radius,
                                                std::size_t samples, std::uint64_t seed) {
  if (!(radius > 0.0)) throw InputError("estimate_comparison_constant: R must be > 0");
  if (samples < 1) throw InputError("estimate_comparison_constant: need at least one sample");
  const int dim = spec.dim();
  const int m1 = spec.m1();
  const CounterRng root(seed);

  std::vector<double> lower(samples, 0.0);
  std::vector<double> upper(samples, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(samples); ++k) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(k));
    Vec p(static_cast<std::size_t>(dim));
    Vec q(static_cast<std::size_t>(dim));
    for (int attempt = 0; attempt < 64; ++attempt) {
      rng.ball(p, radius);
      if (k % 2 == 0) {
        rng.ball(q, radius);
      } else {
        // Near pair: a homogeneous displacement at scale t; a third of the
        // time p sits on the boundary sphere where the bracket is largest.
        if (k % 3 == 0) {
          const double len = norm(p);
          if (len > 0.0) {
            for (double& x : p) x *= radius / len;
          }
        }
        const double t = std::pow(10.0, -4.0 * rng.uniform());
        Vec u(static_cast<std::size_t>(dim));
        rng.ball(u, 1.0);
        const Point moved =
            multiply(spec, Point(p, m1), dilate(spec, t, Point(std::move(u), m1)));
        std::copy(moved.coords().begin(), moved.coords().end(), q.begin());
      }
      if (norm(q) > radius) continue;
      const double de = dist_euclidean(p, q);
      const double dh = dist_homogeneous(spec, std::span<const double>(p), q);
      if (de == 0.0 || dh == 0.0) continue;
      lower[static_cast<std::size_t>(k)] = de / dh;
      upper[static_cast<std::size_t>(k)] = dh / std::sqrt(de);
      break;
    }
  }

  ComparisonConstant out;
  out.samples = samples;
  for (std::size_t k = 0; k < samples; ++k) {
    out.lower_ratio = std::max(out.lower_ratio, lower[k]);
    out.upper_ratio = std::max(out.upper_ratio, upper[k]);
  }
  out.value = std::max({1.0, out.lower_ratio, out.upper_ratio});
  return out;
}

}  // namespace ccf::group
