#include "ccf/moran.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ccf/error.hpp"

namespace ccf::fractal {

using group::GroupSpec;
using group::Point;
using group::Vec;

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) {
    return std::numeric_limits<std::size_t>::max();
  }
  return a * b;
}

std::size_t ipow(std::size_t base, int e) {
  std::size_t out = 1;
  for (int i = 0; i < e; ++i) out = saturating_mul(out, base);
  return out;
}

void check_s(const GroupSpec& spec, double s) {
  if (!(s >= spec.m1() && s <= spec.dim())) {
    throw InputError("Moran construction: s must lie in [m1, n] = [" + std::to_string(spec.m1()) +
                     ", " + std::to_string(spec.dim()) + "]");
  }
}

// C = A * B for square row-major matrices of size n.
void matmul(int n, const Vec& A, const Vec& B, Vec& C) {
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += A[i * n + k] * B[k * n + j];
      C[i * n + j] = acc;
    }
  }
}

std::vector<AffineMap> alphabet_maps(const GroupSpec& spec) {
  const std::size_t size = alphabet_size(spec.m1(), spec.m2());
  std::vector<AffineMap> maps;
  maps.reserve(size);
  for (std::size_t k = 0; k < size; ++k) maps.push_back(ifs_affine(spec, symbol_at(spec.m1(), spec.m2(), k)));
  return maps;
}

AffineMap compose_with(const std::vector<AffineMap>& maps, std::span<const std::uint16_t> address,
                       int n) {
  AffineMap out;
  out.dim = n;
  out.A.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) out.A[i * n + i] = 1.0;
  out.b.assign(static_cast<std::size_t>(n), 0.0);
  Vec next(out.A.size());
  for (std::uint16_t sym : address) {
    const AffineMap& g = maps[sym];
    // (A, b) o (A_g, b_g) = (A A_g, A b_g + b)
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += out.A[i * n + k] * g.b[k];
      out.b[i] += acc;
    }
    matmul(n, out.A, g.A, next);
    out.A.swap(next);
  }
  return out;
}

Box union_of_images(const std::vector<AffineMap>& maps, const Box& box) {
  Box out = affine_image(maps.front(), box);
  for (std::size_t k = 1; k < maps.size(); ++k) {
    const Box img = affine_image(maps[k], box);
    for (std::size_t i = 0; i < out.lo.size(); ++i) {
      out.lo[i] = std::min(out.lo[i], img.lo[i]);
      out.hi[i] = std::max(out.hi[i], img.hi[i]);
    }
  }
  return out;
}

}  // namespace

std::vector<int> moran_branch_sequence(int m1, int m2, double s, int T) {
  if (m1 < 1 || m2 < 1) throw InputError("moran_branch_sequence: layer dimensions must be >= 1");
  if (!(s >= m1 && s <= m1 + m2)) throw InputError("moran_branch_sequence: s must lie in [m1, n]");
  if (T < 0) throw InputError("moran_branch_sequence: T must be >= 0");
  std::vector<int> n;
  n.reserve(static_cast<std::size_t>(T));
  // log2 of prod n_i^(2 m2) is 2 m2 times the number of twos so far.
  long long twos = 0;
  for (int t = 0; t < T; ++t) {
    int next = 2;
    if (t > 0) {
      const double lhs = 2.0 * m2 * static_cast<double>(twos);
      const double rhs = 2.0 * t * (s - m1);
      next = lhs < rhs ? 2 : 1;
    }
    if (next == 2) ++twos;
    n.push_back(next);
  }
  return n;
}

std::size_t alphabet_size(int m1, int m2) { return ipow(2, m1 + 2 * m2); }

std::size_t level_alphabet_size(int n, int m1, int m2) {
  return saturating_mul(ipow(static_cast<std::size_t>(n), 2 * m2), ipow(2, m1));
}

MoranSymbol symbol_at(int m1, int m2, std::size_t index) {
  if (index >= alphabet_size(m1, m2)) throw InputError("symbol_at: index outside the alphabet");
  const std::size_t block = ipow(2, m1);
  std::size_t a1_code = index % block;
  std::size_t a2_code = index / block;
  MoranSymbol sym;
  sym.a1.assign(static_cast<std::size_t>(m1), 0);
  sym.a2.assign(static_cast<std::size_t>(m2), 0);
  for (int i = m1 - 1; i >= 0; --i) {
    sym.a1[static_cast<std::size_t>(i)] = static_cast<int>(a1_code % 2);
    a1_code /= 2;
  }
  for (int i = m2 - 1; i >= 0; --i) {
    sym.a2[static_cast<std::size_t>(i)] = static_cast<int>(a2_code % 4);
    a2_code /= 4;
  }
  return sym;
}

Point ifs_map_apply(const GroupSpec& spec, std::span<const int> a1,
                    std::optional<std::span<const int>> a2, const Point& p) {
  if (static_cast<int>(a1.size()) != spec.m1()) throw InputError("ifs_map_apply: a1 must have length m1");
  Vec v1(a1.size());
  for (std::size_t i = 0; i < a1.size(); ++i) {
    if (a1[i] != 0 && a1[i] != 1) throw InputError("ifs_map_apply: a1 entries must be 0 or 1");
    v1[i] = a1[i];
  }
  Vec v2(static_cast<std::size_t>(spec.m2()), 0.0);
  if (a2) {
    if (static_cast<int>(a2->size()) != spec.m2()) {
      throw InputError("ifs_map_apply: a2 must have length m2");
    }
    for (std::size_t j = 0; j < a2->size(); ++j) {
      const int a = (*a2)[j];
      if (a < 0 || a > 3) throw InputError("ifs_map_apply: a2 entries must lie in {0,1,2,3}");
      v2[j] = a;
    }
  }
  const Point anchor = Point::from_layers(v1, v2);
  const Point shifted = group::multiply(spec, group::invert(spec, anchor), p);
  return group::multiply(spec, anchor, group::dilate(spec, 0.5, shifted));
}

Vec AffineMap::apply(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim) throw InputError("AffineMap::apply: dimension mismatch");
  Vec out = b;
  for (int i = 0; i < dim; ++i) {
    for (int k = 0; k < dim; ++k) out[i] += A[i * dim + k] * x[k];
  }
  return out;
}

AffineMap ifs_affine(const GroupSpec& spec, const MoranSymbol& sym) {
  const int m1 = spec.m1();
  const int n = spec.dim();
  if (static_cast<int>(sym.a1.size()) != m1 || static_cast<int>(sym.a2.size()) != spec.m2()) {
    throw InputError("ifs_affine: symbol does not match the group");
  }
  Vec a1(sym.a1.begin(), sym.a1.end());
  const Vec bracket = spec.bracket_matrix(a1);  // y -> P(a1, y)
  AffineMap map;
  map.dim = n;
  map.A.assign(static_cast<std::size_t>(n) * n, 0.0);
  map.b.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < m1; ++i) {
    map.A[i * n + i] = 0.5;
    map.b[i] = 0.5 * a1[i];
  }
  for (int j = 0; j < spec.m2(); ++j) {
    const int row = m1 + j;
    map.A[row * n + row] = 0.25;
    for (int i = 0; i < m1; ++i) map.A[row * n + i] = 0.25 * bracket[j * m1 + i];
    map.b[row] = 0.75 * sym.a2[j];
  }
  return map;
}

bool Box::contains(std::span<const double> p, double tol) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (p[i] < lo[i] - tol || p[i] > hi[i] + tol) return false;
  }
  return true;
}

bool Box::contains(const Box& other, double tol) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (other.lo[i] < lo[i] - tol || other.hi[i] > hi[i] + tol) return false;
  }
  return true;
}

Vec Box::center() const {
  Vec c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

Box affine_image(const AffineMap& map, const Box& box) {
  const int n = map.dim;
  const Vec c = map.apply(box.center());
  Box out{Vec(static_cast<std::size_t>(n)), Vec(static_cast<std::size_t>(n))};
  for (int i = 0; i < n; ++i) {
    double hw = 0.0;
    for (int k = 0; k < n; ++k) hw += std::abs(map.A[i * n + k]) * 0.5 * (box.hi[k] - box.lo[k]);
    out.lo[i] = c[i] - hw;
    out.hi[i] = c[i] + hw;
  }
  return out;
}

double diam_inf_bound(const GroupSpec& spec, const Box& box) {
  const int m1 = spec.m1();
  double horizontal = 0.0;
  for (int i = 0; i < m1; ++i) {
    const double w = box.hi[i] - box.lo[i];
    horizontal += w * w;
  }
  // |p2 - q2 + P(p1, q1)| with P(p1, q1) = P(p1, q1 - p1).
  double vertical = 0.0;
  for (int j = 0; j < spec.m2(); ++j) {
    double bound = box.hi[m1 + j] - box.lo[m1 + j];
    for (int l = 0; l < m1; ++l) {
      for (int i = l + 1; i < m1; ++i) {
        const double b = std::abs(spec.coefficient(j, l, i));
        if (b == 0.0) continue;
        const double ml = std::max(std::abs(box.lo[l]), std::abs(box.hi[l]));
        const double mi = std::max(std::abs(box.lo[i]), std::abs(box.hi[i]));
        bound += b * (ml * (box.hi[i] - box.lo[i]) + mi * (box.hi[l] - box.lo[l]));
      }
    }
    vertical += bound * bound;
  }
  return std::max(std::sqrt(horizontal), spec.c() * std::pow(vertical, 0.25));
}

AttractorBox attractor_box(const GroupSpec& spec, int iterations) {
  if (iterations < 1) throw InputError("attractor_box: iterations must be >= 1");
  const auto maps = alphabet_maps(spec);
  const auto n = static_cast<std::size_t>(spec.dim());
  const auto m1 = static_cast<std::size_t>(spec.m1());

  Box box{Vec(n), Vec(n)};
  bool found = false;
  double rho = 1.0;
  for (int attempt = 0; attempt < 64 && !found; ++attempt, rho *= 2.0) {
    for (std::size_t i = 0; i < n; ++i) {
      box.lo[i] = i < m1 ? 0.0 : -rho;
      box.hi[i] = i < m1 ? 1.0 : 3.0 + rho;
    }
    found = box.contains(union_of_images(maps, box), 1e-12);
  }
  if (!found) throw ConstructionError("attractor_box: no invariant box found");

  AttractorBox out;
  out.box = box;
  out.diam_inf = diam_inf_bound(spec, box);
  for (int it = 0; it < iterations; ++it) {
    Box next = union_of_images(maps, out.box);
    // Keep the refinement nested even under rounding.
    for (std::size_t i = 0; i < n; ++i) {
      next.lo[i] = std::max(next.lo[i], out.box.lo[i]);
      next.hi[i] = std::min(next.hi[i], out.box.hi[i]);
    }
    out.box = std::move(next);
    out.diam_inf = std::min(out.diam_inf, diam_inf_bound(spec, out.box));
    out.history.push_back(out.diam_inf);
  }
  return out;
}

std::vector<std::size_t> level_sizes(const GroupSpec& spec, double s, int depth,
                                     double vertical_floor) {
  check_s(spec, s);
  if (depth < 0) throw InputError("Moran construction: depth must be >= 0");
  const std::vector<int> branches = moran_branch_sequence(spec.m1(), spec.m2(), s, depth);
  std::vector<std::size_t> sizes;
  sizes.reserve(branches.size());
  for (int t = 1; t <= depth; ++t) {
    int n_t = branches[static_cast<std::size_t>(t - 1)];
    const double offset = 3.0 * std::sqrt(static_cast<double>(spec.m2())) * std::ldexp(1.0, 2 - 2 * t);
    if (offset < vertical_floor) n_t = 1;
    sizes.push_back(level_alphabet_size(n_t, spec.m1(), spec.m2()));
  }
  return sizes;
}

std::size_t cylinder_count(const GroupSpec& spec, double s, int depth, double vertical_floor) {
  std::size_t count = 1;
  for (std::size_t size : level_sizes(spec, s, depth, vertical_floor)) count = saturating_mul(count, size);
  return count;
}

AffineMap compose_address(const GroupSpec& spec, std::span<const std::uint16_t> address) {
  const auto maps = alphabet_maps(spec);
  for (std::uint16_t sym : address) {
    if (sym >= maps.size()) throw InputError("compose_address: symbol outside the alphabet");
  }
  return compose_with(maps, address, spec.dim());
}

MoranSet enumerate_cylinders(const GroupSpec& spec, double s, int depth,
                             const EnumerateOptions& options) {
  check_s(spec, s);
  return enumerate_cylinders(spec, s, depth, attractor_box(spec, options.attractor_iterations),
                             options);
}

MoranSet enumerate_cylinders(const GroupSpec& spec, double s, int depth,
                             const AttractorBox& attractor, const EnumerateOptions& options) {
  const std::vector<std::size_t> sizes = level_sizes(spec, s, depth, options.vertical_floor);
  if (alphabet_size(spec.m1(), spec.m2()) > 65536) {
    throw InputError("enumerate_cylinders: alphabet too large for 16-bit symbols");
  }
  const std::size_t count = cylinder_count(spec, s, depth, options.vertical_floor);
  if (count > options.budget) {
    throw ResourceError("enumerate_cylinders: depth " + std::to_string(depth) + " needs " +
                        (count == std::numeric_limits<std::size_t>::max() ? std::string("too many")
                                                                          : std::to_string(count)) +
                        " cylinders, budget is " + std::to_string(options.budget));
  }

  MoranSet set(spec);
  set.s_ = s;
  set.depth_ = depth;
  set.count_ = count;
  set.branches_ = moran_branch_sequence(spec.m1(), spec.m2(), s, depth);
  set.attractor_ = attractor;
  set.diam_bound_ = std::ldexp(attractor.diam_inf, -depth);

  const int n = spec.dim();
  const auto d = static_cast<std::size_t>(depth);
  const auto nn = static_cast<std::size_t>(n);
  set.digits_.resize(count * d);
  set.lo_.resize(count * nn);
  set.hi_.resize(count * nn);
  const auto maps = alphabet_maps(spec);
  const Vec c_e = attractor.box.center();

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
    std::uint16_t* digits = set.digits_.data() + static_cast<std::size_t>(k) * d;
    std::size_t rest = static_cast<std::size_t>(k);
    for (std::size_t t = d; t-- > 0;) {
      digits[t] = static_cast<std::uint16_t>(rest % sizes[t]);
      rest /= sizes[t];
    }
    const AffineMap g = compose_with(maps, std::span<const std::uint16_t>(digits, d), n);
    const Vec c = g.apply(c_e);
    for (int i = 0; i < n; ++i) {
      double hw = 0.0;
      for (int j = 0; j < n; ++j) {
        hw += std::abs(g.A[i * n + j]) * 0.5 * (attractor.box.hi[j] - attractor.box.lo[j]);
      }
      set.lo_[static_cast<std::size_t>(k) * nn + i] = c[i] - hw;
      set.hi_[static_cast<std::size_t>(k) * nn + i] = c[i] + hw;
    }
  }
  return set;
}

std::span<const std::uint16_t> MoranSet::address(std::size_t k) const {
  const auto d = static_cast<std::size_t>(depth_);
  return std::span<const std::uint16_t>(digits_).subspan(k * d, d);
}

std::span<const double> MoranSet::lo(std::size_t k) const {
  const auto n = static_cast<std::size_t>(spec_.dim());
  return std::span<const double>(lo_).subspan(k * n, n);
}

std::span<const double> MoranSet::hi(std::size_t k) const {
  const auto n = static_cast<std::size_t>(spec_.dim());
  return std::span<const double>(hi_).subspan(k * n, n);
}

Box MoranSet::box(std::size_t k) const {
  const auto l = lo(k);
  const auto h = hi(k);
  return Box{Vec(l.begin(), l.end()), Vec(h.begin(), h.end())};
}

Vec MoranSet::center(std::size_t k) const { return box(k).center(); }

VerticalFactorSet vertical_factor_set(int m2, double s, int m1, int depth, std::size_t budget) {
  if (m2 < 1 || m1 < 1) throw InputError("vertical_factor_set: layer dimensions must be >= 1");
  if (!(s > m1)) throw InputError("vertical_factor_set: requires s > m1");
  if (depth < 0) throw InputError("vertical_factor_set: depth must be >= 0");
  const std::vector<int> branches = moran_branch_sequence(m1, m2, s, depth);
  std::size_t count = 1;
  std::vector<std::size_t> sizes;
  for (int n_j : branches) {
    sizes.push_back(ipow(static_cast<std::size_t>(n_j), 2 * m2));
    count = saturating_mul(count, sizes.back());
  }
  if (count > budget) {
    throw ResourceError("vertical_factor_set: " + std::to_string(count) +
                        " boxes exceed the budget " + std::to_string(budget));
  }
  VerticalFactorSet out;
  out.m2 = m2;
  out.depth = depth;
  out.side = std::ldexp(2.0, -2 * depth);
  const auto mm = static_cast<std::size_t>(m2);
  out.lo.assign(count * mm, 0.0);
  std::vector<int> a(mm);
  for (std::size_t k = 0; k < count; ++k) {
    std::size_t rest = k;
    std::vector<std::size_t> digit(static_cast<std::size_t>(depth));
    for (std::size_t t = digit.size(); t-- > 0;) {
      digit[t] = rest % sizes[t];
      rest /= sizes[t];
    }
    // h_{i_1} o ... o h_{i_n}(y) = sum_t (3/4) a_t 4^(1-t) + 4^(-n) y.
    for (std::size_t t = 0; t < digit.size(); ++t) {
      std::size_t code = digit[t];
      for (std::size_t j = mm; j-- > 0;) {
        a[j] = static_cast<int>(code % 4);
        code /= 4;
      }
      const double scale = 0.75 * std::ldexp(1.0, -2 * static_cast<int>(t));
      for (std::size_t j = 0; j < mm; ++j) out.lo[k * mm + j] += scale * a[j];
    }
  }
  out.enclosing_lo.assign(mm, std::numeric_limits<double>::infinity());
  out.enclosing_hi.assign(mm, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < count; ++k) {
    for (std::size_t j = 0; j < mm; ++j) {
      out.enclosing_lo[j] = std::min(out.enclosing_lo[j], out.lo[k * mm + j]);
      out.enclosing_hi[j] = std::max(out.enclosing_hi[j], out.lo[k * mm + j] + out.side);
    }
  }
  return out;
}

}  // namespace ccf::fractal
