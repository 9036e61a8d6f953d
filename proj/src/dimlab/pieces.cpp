#include "ccf/pieces.hpp"

#include <algorithm>
#include <cmath>

#include "ccf/error.hpp"

namespace ccf::dimlab {

using group::Vec;

const char* to_string(Metric m) noexcept {
  return m == Metric::euclidean ? "euclidean" : "homogeneous";
}

double PieceSet::weight(std::size_t k, double s, Metric metric) const {
  if (!mass.empty()) return mass[k];
  return std::pow(metric == Metric::euclidean ? diam_e[k] : diam_inf[k], s);
}

Vec PieceSet::to_ambient(std::span<const double> p) const {
  if (static_cast<int>(p.size()) != dim) throw InputError("PieceSet::to_ambient: dimension mismatch");
  if (frame == Frame::ambient) return Vec(p.begin(), p.end());
  return fractal::embed_point(spec, embedding, p.first(p.size() - 1), p.back());
}

PieceSet pieces_from(const fractal::Construction& construction, const group::GroupSpec& spec) {
  if (construction.slabs.empty()) throw InputError("pieces_from: empty construction");
  fractal::check_embedding(spec, construction.embedding, construction.m);
  PieceSet out;
  out.frame = PieceSet::Frame::plane;
  out.embedding = construction.embedding;
  out.spec = spec;
  out.dim = construction.m + 1;
  out.depth = construction.depth;
  const std::size_t n = construction.slabs.size();
  out.lo.reserve(n * static_cast<std::size_t>(out.dim));
  out.hi.reserve(n * static_cast<std::size_t>(out.dim));
  out.diam_e.reserve(n);
  out.diam_inf.reserve(n);
  for (const fractal::Slab& slab : construction.slabs) {
    double horizontal2 = 0.0;
    for (const fractal::Interval& iv : slab.x) {
      out.lo.push_back(iv.lo);
      out.hi.push_back(iv.hi);
      horizontal2 += iv.length() * iv.length();
    }
    out.lo.push_back(slab.t.lo);
    out.hi.push_back(slab.t.hi);
    const double v = slab.t.length();
    out.diam_e.push_back(std::sqrt(horizontal2 + v * v));
    out.diam_inf.push_back(std::max(std::sqrt(horizontal2), spec.c() * std::sqrt(v)));
  }
  return out;
}

PieceSet pieces_from(const fractal::MoranSet& set) {
  if (set.size() == 0) throw InputError("pieces_from: empty Moran set");
  PieceSet out;
  out.frame = PieceSet::Frame::ambient;
  out.spec = set.spec();
  out.dim = set.spec().dim();
  out.depth = set.depth();
  const std::size_t n = set.size();
  out.lo.reserve(n * static_cast<std::size_t>(out.dim));
  out.hi.reserve(n * static_cast<std::size_t>(out.dim));
  out.diam_e.reserve(n);
  out.diam_inf.assign(n, set.diam_inf_bound());
  for (std::size_t k = 0; k < n; ++k) {
    const auto lo = set.lo(k);
    const auto hi = set.hi(k);
    out.lo.insert(out.lo.end(), lo.begin(), lo.end());
    out.hi.insert(out.hi.end(), hi.begin(), hi.end());
    double d2 = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) d2 += (hi[i] - lo[i]) * (hi[i] - lo[i]);
    out.diam_e.push_back(std::sqrt(d2));
  }
  return out;
}

PieceSet pieces_from(const PointCloud& cloud, const group::GroupSpec& spec) {
  if (cloud.size() == 0) throw InputError("pieces_from: empty point cloud");
  if (cloud.dim != spec.dim()) throw InputError("pieces_from: cloud/spec dimension mismatch");
  PieceSet out;
  out.frame = PieceSet::Frame::ambient;
  out.spec = spec;
  out.dim = cloud.dim;
  out.lo = cloud.coords;
  out.hi = cloud.coords;
  out.diam_e.assign(cloud.size(), 0.0);
  out.diam_inf.assign(cloud.size(), 0.0);
  out.mass = cloud.weights;
  return out;
}

Region region_all() {
  return [](std::span<const double>, std::span<const double>) { return true; };
}

Region region_none() {
  return [](std::span<const double>, std::span<const double>) { return false; };
}

Region region_halfspace(int axis, double threshold, bool below) {
  if (axis < 0) throw InputError("region_halfspace: axis must be >= 0");
  const auto a = static_cast<std::size_t>(axis);
  return [a, threshold, below](std::span<const double> lo, std::span<const double> hi) {
    return below ? lo[a] <= threshold : hi[a] >= threshold;
  };
}

Region region_intersection(Region a, Region b) {
  return [a = std::move(a), b = std::move(b)](std::span<const double> lo,
                                              std::span<const double> hi) {
    return a(lo, hi) && b(lo, hi);
  };
}

double box_distance(std::span<const double> lo, std::span<const double> hi,
                    std::span<const double> p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double d = 0.0;
    if (p[i] < lo[i]) {
      d = lo[i] - p[i];
    } else if (p[i] > hi[i]) {
      d = p[i] - hi[i];
    }
    acc += d * d;
  }
  return std::sqrt(acc);
}

namespace {

constexpr double kRel = 1e-12;

double within(double r) { return r * (1.0 + kRel); }

}  // namespace

Region ball_region(const PieceSet& pieces, std::span<const double> p, double r, Metric metric) {
  if (!(r > 0.0)) throw InputError("ball_region: r must be > 0");
  if (static_cast<int>(p.size()) != pieces.dim) throw InputError("ball_region: dimension mismatch");
  Vec center(p.begin(), p.end());
  if (metric == Metric::euclidean) {
    return [center, r](std::span<const double> lo, std::span<const double> hi) {
      return box_distance(lo, hi, center) <= within(r);
    };
  }
  const double c = pieces.spec.c();
  const double vertical = r * r / (c * c);
  if (pieces.frame == PieceSet::Frame::plane) {
    // On the construction plane P vanishes: d_inf = max(|dx|, c |dt|^(1/2)).
    const std::size_t m = center.size() - 1;
    return [center, r, vertical, m](std::span<const double> lo, std::span<const double> hi) {
      if (box_distance(lo.first(m), hi.first(m), std::span<const double>(center).first(m)) >
          within(r)) {
        return false;
      }
      return box_distance(lo.subspan(m), hi.subspan(m), std::span<const double>(center).subspan(m)) <=
             within(vertical);
    };
  }
  const group::GroupSpec spec = pieces.spec;
  const Vec bracket = spec.bracket_matrix(std::span<const double>(center).first(static_cast<std::size_t>(spec.m1())));
  return [center, r, vertical, spec, bracket](std::span<const double> lo,
                                              std::span<const double> hi) {
    const auto m1 = static_cast<std::size_t>(spec.m1());
    if (box_distance(lo.first(m1), hi.first(m1), std::span<const double>(center).first(m1)) >
        within(r)) {
      return false;
    }
    // Range of q2_j - p2_j - P_j(p1, q1) over the box, component by component.
    double acc = 0.0;
    for (int j = 0; j < spec.m2(); ++j) {
      const std::size_t row = m1 + static_cast<std::size_t>(j);
      double lo_v = lo[row] - center[row];
      double hi_v = hi[row] - center[row];
      for (std::size_t i = 0; i < m1; ++i) {
        const double a = -bracket[static_cast<std::size_t>(j) * m1 + i];
        lo_v += std::min(a * lo[i], a * hi[i]);
        hi_v += std::max(a * lo[i], a * hi[i]);
      }
      const double d = lo_v > 0.0 ? lo_v : (hi_v < 0.0 ? -hi_v : 0.0);
      acc += d * d;
    }
    return std::sqrt(acc) <= within(vertical);
  };
}

double covering_measure_serial(const PieceSet& pieces, const Region& region, double s,
                               Metric metric) {
  if (pieces.size() == 0) throw InputError("covering_measure: empty object");
  double total = 0.0;
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (region(pieces.lo_of(k), pieces.hi_of(k))) total += pieces.weight(k, s, metric);
  }
  return total;
}

double covering_measure(const PieceSet& pieces, const Region& region, double s, Metric metric) {
  if (pieces.size() == 0) throw InputError("covering_measure: empty object");
  std::vector<double> contrib(pieces.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(pieces.size()); ++k) {
    const auto i = static_cast<std::size_t>(k);
    if (region(pieces.lo_of(i), pieces.hi_of(i))) contrib[i] = pieces.weight(i, s, metric);
  }
  // Serial sum in piece order.
  double total = 0.0;
  for (double v : contrib) total += v;
  return total;
}

}  // namespace ccf::dimlab
