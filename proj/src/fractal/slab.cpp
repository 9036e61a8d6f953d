#include "ccf/slab.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "ccf/error.hpp"

namespace ccf::fractal {

namespace {

constexpr double kTol = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

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

// (N_k, lambda_k) without the h/v recurrence.
CustomLevel raw_params(const Scheme& scheme, int k) {
  return std::visit(
      Overloaded{
          [k](const Example1&) {
            // N_k = 2^(2^(k-1) - 1), lambda_k = 2^(-3 2^(k-1)).
            if (k > 6) throw ResourceError("Example1: level " + std::to_string(k) +
                                           " is beyond double precision");
            const double e = std::ldexp(1.0, k - 1);
            return CustomLevel{1LL << (static_cast<int>(e) - 1), std::ldexp(1.0, -3 * static_cast<int>(e))};
          },
          [k](const Example2& ex) {
            const double bound = 68.0 * ex.M * ex.m;
            const double two_k = std::ldexp(1.0, k);
            const double lambda = two_k <= bound ? 0.5 : bound * std::ldexp(1.0, -k - 1);
            return CustomLevel{1, lambda};
          },
          [k](const Custom& c) {
            if (static_cast<std::size_t>(k) > c.levels.size()) {
              throw InputError("custom schedule has only " + std::to_string(c.levels.size()) +
                               " levels, level " + std::to_string(k) + " requested");
            }
            return c.levels[static_cast<std::size_t>(k - 1)];
          },
      },
      scheme);
}

void validate_scheme(const Scheme& scheme) {
  std::visit(Overloaded{
                 [](const Example1& ex) {
                   if (ex.m < 1) throw InputError("example1: m must be >= 1");
                 },
                 [](const Example2& ex) {
                   if (ex.m < 1) throw InputError("example2: m must be >= 1");
                   if (!(ex.M > 1.0) || !std::isfinite(ex.M)) {
                     throw InputError("example2: M must be > 1");
                   }
                 },
                 [](const Custom& c) {
                   if (c.m < 1) throw InputError("custom: m must be >= 1");
                   for (const auto& lv : c.levels) {
                     if (lv.N < 1) throw InputError("custom: N_k must be >= 1");
                     if (!(lv.lambda > 0.0 && lv.lambda <= 0.5)) {
                       throw InputError("custom: lambda_k must lie in (0, 1/2]");
                     }
                   }
                 },
             },
             scheme);
}

}  // namespace

std::size_t budget_from_env() {
  const char* raw = std::getenv("CC_FRACTAL_BUDGET");
  if (raw == nullptr || *raw == '\0') return kDefaultBudget;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) {
    throw InputError(std::string("CC_FRACTAL_BUDGET must be a positive integer, got '") + raw + "'");
  }
  return static_cast<std::size_t>(v);
}

const char* to_string(Embedding e) noexcept {
  return e == Embedding::plane_1m1 ? "plane_1m1" : "heis_xt";
}

const char* to_string(SlabLabel l) noexcept {
  switch (l) {
    case SlabLabel::c_type:
      return "c";
    case SlabLabel::d_type:
      return "d";
    default:
      return "root";
  }
}

int scheme_dim(const Scheme& scheme) {
  return std::visit([](const auto& s) { return s.m; }, scheme);
}

std::string scheme_name(const Scheme& scheme) {
  return std::visit(Overloaded{[](const Example1&) { return std::string("example1"); },
                               [](const Example2&) { return std::string("example2"); },
                               [](const Custom&) { return std::string("custom"); }},
                    scheme);
}

LevelParams schedule_params(const Scheme& scheme, int k) {
  if (k < 1) throw InputError("schedule_params: k must be >= 1");
  validate_scheme(scheme);
  LevelParams prev;  // level 0
  for (int j = 1; j <= k; ++j) {
    const CustomLevel raw = raw_params(scheme, j);
    LevelParams cur;
    cur.k = j;
    cur.N = raw.N;
    cur.lambda = raw.lambda;
    cur.h = prev.h / (2.0 * static_cast<double>(raw.N));
    cur.v = raw.lambda * prev.h;
    prev = cur;
  }
  return prev;
}

std::vector<Slab> subdivide(const Slab& parent, long long N, double lambda) {
  if (N < 1) throw InputError("subdivide: N must be >= 1");
  if (!(lambda > 0.0 && lambda <= 0.5)) throw InputError("subdivide: lambda must lie in (0, 1/2]");
  const std::size_t m = parent.x.size();
  if (m == 0) throw InputError("subdivide: slab has no horizontal sides");
  const double L = parent.x.front().length();
  for (const Interval& iv : parent.x) {
    if (std::abs(iv.length() - L) > kTol * std::max(1.0, L)) {
      throw ConstructionError("subdivide: horizontal sides differ in length");
    }
  }
  const double height = parent.t.length();
  const double vertical = lambda * L;
  if (vertical > height / 2.0 * (1.0 + kTol)) {
    throw ConstructionError("subdivide: lambda L = " + std::to_string(vertical) +
                            " exceeds half the vertical side " + std::to_string(height / 2.0));
  }

  const auto per_side = static_cast<std::size_t>(2 * N);
  const std::size_t count = ipow(per_side, static_cast<int>(m));
  const double side = L / static_cast<double>(per_side);
  std::vector<Slab> out;
  out.reserve(count);
  std::vector<std::size_t> grid(m, 0);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t rest = idx;
    for (std::size_t a = m; a-- > 0;) {
      grid[a] = rest % per_side;
      rest /= per_side;
    }
    Slab child;
    child.level = parent.level + 1;
    child.x.resize(m);
    std::size_t parity = 0;
    for (std::size_t a = 0; a < m; ++a) {
      const double lo = parent.x[a].lo + static_cast<double>(grid[a]) * side;
      // Last cell ends exactly on the parent edge.
      const double hi = grid[a] + 1 == per_side ? parent.x[a].hi : lo + side;
      child.x[a] = {lo, hi};
      parity += grid[a];
    }
    if (parity % 2 == 0) {
      child.label = SlabLabel::c_type;
      child.t = {parent.t.lo, parent.t.lo + vertical};
    } else {
      child.label = SlabLabel::d_type;
      child.t = {parent.t.hi - vertical, parent.t.hi};
    }
    out.push_back(std::move(child));
  }
  return out;
}

std::size_t construction_count(const Scheme& scheme, int depth) {
  validate_scheme(scheme);
  const int m = scheme_dim(scheme);
  std::size_t count = ipow(2, m);
  for (int k = 1; k <= depth; ++k) {
    const CustomLevel raw = raw_params(scheme, k);
    count = saturating_mul(count, ipow(static_cast<std::size_t>(2 * raw.N), m));
  }
  return count;
}

Construction build_construction(Embedding embedding, const Scheme& scheme, int depth,
                                std::size_t budget) {
  if (depth < 0) throw InputError("build_construction: depth must be >= 0");
  validate_scheme(scheme);
  const int m = scheme_dim(scheme);
  if (embedding == Embedding::plane_1m1 && m != 1) {
    throw InputError("build_construction: the (x_1, x_{m1+1}) plane only hosts m = 1");
  }
  // Check the budget level by level before allocating anything.
  for (int k = 0; k <= depth; ++k) {
    const std::size_t count = construction_count(scheme, k);
    if (count > budget) {
      throw ResourceError("build_construction: level " + std::to_string(k) + " has " +
                          (count == std::numeric_limits<std::size_t>::max()
                               ? std::string("too many")
                               : std::to_string(count)) +
                          " slabs, budget is " + std::to_string(budget));
    }
  }

  Construction out;
  out.embedding = embedding;
  out.scheme = scheme;
  out.m = m;
  out.depth = depth;
  out.levels.push_back(LevelParams{});

  Slab unit;
  unit.level = -1;
  unit.x.assign(static_cast<std::size_t>(m), Interval{0.0, 1.0});
  unit.t = {0.0, 1.0};
  std::vector<Slab> current = subdivide(unit, 1, 0.5);

  for (int k = 1; k <= depth; ++k) {
    const LevelParams params = schedule_params(scheme, k);
    out.levels.push_back(params);
    const std::size_t fan = ipow(static_cast<std::size_t>(2 * params.N), m);
    std::vector<Slab> next(current.size() * fan);
    const auto parents = static_cast<std::ptrdiff_t>(current.size());
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < parents; ++i) {
      try {
        std::vector<Slab> kids = subdivide(current[static_cast<std::size_t>(i)], params.N,
                                           params.lambda);
        std::move(kids.begin(), kids.end(),
                  next.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * fan));
      } catch (const std::exception& e) {
#pragma omp critical(ccf_build_failure)
        {
          if (!failed) failure = e.what();
          failed = true;
        }
      }
    }
    if (failed) throw ConstructionError("level " + std::to_string(k) + ": " + failure);
    current = std::move(next);
  }
  out.slabs = std::move(current);
  return out;
}

bool covers_x_face(std::span<const Slab> slabs, std::span<const Interval> face) {
  if (slabs.empty()) return false;
  const std::size_t m = face.size();
  // Every slab must sit on the face grid with side h, the cells must be
  // distinct, and their number must equal the cell count of the face.
  const double h = slabs.front().x.front().length();
  if (!(h > 0.0)) return false;
  const double cells_per_side_f = face.front().length() / h;
  const auto cells_per_side = static_cast<std::size_t>(std::llround(cells_per_side_f));
  if (std::abs(cells_per_side_f - static_cast<double>(cells_per_side)) > 1e-6) return false;
  std::vector<std::size_t> keys;
  keys.reserve(slabs.size());
  for (const Slab& s : slabs) {
    if (s.x.size() != m) return false;
    std::size_t key = 0;
    for (std::size_t a = 0; a < m; ++a) {
      if (std::abs(s.x[a].length() - h) > kTol) return false;
      const double pos = (s.x[a].lo - face[a].lo) / h;
      const double idx = std::round(pos);
      if (std::abs(pos - idx) * h > kTol || idx < 0 ||
          idx >= static_cast<double>(cells_per_side)) {
        return false;
      }
      key = key * cells_per_side + static_cast<std::size_t>(idx);
    }
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) return false;
  return keys.size() == ipow(cells_per_side, static_cast<int>(m));
}

bool same_type_faces_disjoint(std::span<const Slab> siblings) {
  // Two slabs share an m-dimensional face iff their x-cells are adjacent
  // (touching along exactly one axis, overlapping in the others) and their
  // t-intervals overlap with positive length.
  for (std::size_t a = 0; a < siblings.size(); ++a) {
    for (std::size_t b = a + 1; b < siblings.size(); ++b) {
      const Slab& s = siblings[a];
      const Slab& u = siblings[b];
      if (s.label != u.label) continue;
      int touching = 0;
      bool overlapping_rest = true;
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        const double overlap = std::min(s.x[i].hi, u.x[i].hi) - std::max(s.x[i].lo, u.x[i].lo);
        if (std::abs(overlap) <= kTol) {
          ++touching;
        } else if (overlap < 0.0) {
          overlapping_rest = false;
        }
      }
      const double t_overlap = std::min(s.t.hi, u.t.hi) - std::max(s.t.lo, u.t.lo);
      if (touching == 1 && overlapping_rest && t_overlap > kTol) return false;
    }
  }
  return true;
}

void check_embedding(const group::GroupSpec& spec, Embedding embedding, int m) {
  if (embedding == Embedding::plane_1m1) {
    if (m != 1) throw InputError("plane_1m1 embedding requires m = 1");
    return;
  }
  const group::GroupSpec heis = group::GroupSpec::heisenberg(m, spec.c());
  if (!(spec == heis)) {
    throw InputError("heis_xt embedding requires the Heisenberg group H^" + std::to_string(m));
  }
}

group::Vec embed_point(const group::GroupSpec& spec, Embedding embedding,
                       std::span<const double> x, double t) {
  group::Vec out(static_cast<std::size_t>(spec.dim()), 0.0);
  if (embedding == Embedding::plane_1m1) {
    out[0] = x[0];
    out[static_cast<std::size_t>(spec.m1())] = t;
  } else {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i];
    out[static_cast<std::size_t>(spec.dim() - 1)] = t;
  }
  return out;
}

group::Vec plane_point(const group::GroupSpec& spec, Embedding embedding, int m,
                       std::span<const double> ambient) {
  if (static_cast<int>(ambient.size()) != spec.dim()) {
    throw InputError("plane_point: dimension mismatch");
  }
  group::Vec out(static_cast<std::size_t>(m) + 1);
  if (embedding == Embedding::plane_1m1) {
    out[0] = ambient[0];
    out[1] = ambient[static_cast<std::size_t>(spec.m1())];
  } else {
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = ambient[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(m)] = ambient.back();
  }
  return out;
}

}  // namespace ccf::fractal
