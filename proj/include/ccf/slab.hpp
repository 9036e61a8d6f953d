#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ccf/group.hpp"

namespace ccf::fractal {

inline constexpr std::size_t kDefaultBudget = 1'000'000;

/// Piece budget from CC_FRACTAL_BUDGET if set to a positive integer, else the default.
std::size_t budget_from_env();

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  [[nodiscard]] double length() const noexcept { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Which coordinate plane the slabs live in: the (x_1, x_{m1+1}) plane of a
/// step-2 group (m = 1), or V_{x,t} = {y = 0} in H^m.
enum class Embedding { plane_1m1, heis_xt };

enum class SlabLabel { root, c_type, d_type };

const char* to_string(Embedding e) noexcept;
const char* to_string(SlabLabel l) noexcept;

/// Axis-aligned parallelepiped [a_1,b_1] x ... x [a_m,b_m] x [c,d] in plane coordinates.
struct Slab {
  std::vector<Interval> x;
  Interval t;
  SlabLabel label = SlabLabel::root;
  int level = -1;
};

struct Example1 {
  int m = 1;
};
struct Example2 {
  double M = 2.0;
  int m = 1;
};
struct CustomLevel {
  long long N = 1;
  double lambda = 0.5;
};
struct Custom {
  int m = 1;
  std::vector<CustomLevel> levels;  // levels[k-1] is used at level k
};
using Scheme = std::variant<Example1, Example2, Custom>;

int scheme_dim(const Scheme& scheme);
std::string scheme_name(const Scheme& scheme);

struct LevelParams {
  int k = 0;
  long long N = 1;
  double lambda = 0.5;
  double h = 0.5;  // horizontal side
  double v = 0.5;  // vertical side
};

/// (N_k, lambda_k, h_k, v_k) for k >= 1, with h_0 = v_0 = 1/2,
/// h_k = h_{k-1}/(2N_k), v_k = lambda_k h_{k-1}.
LevelParams schedule_params(const Scheme& scheme, int k);

/// The (2N)^m children of `parent`, ordered lexicographically by grid index
/// (first coordinate most significant). Child with even index sum is c-type.
std::vector<Slab> subdivide(const Slab& parent, long long N, double lambda);

struct Construction {
  Embedding embedding = Embedding::heis_xt;
  Scheme scheme;
  int m = 1;
  int depth = 0;
  std::vector<LevelParams> levels;  // levels[k] for k = 0..depth
  std::vector<Slab> slabs;          // the depth-level slabs

  [[nodiscard]] double h() const { return levels.back().h; }
  [[nodiscard]] double v() const { return levels.back().v; }
};

/// Number of slabs at `depth`: 2^m prod_{j<=depth} (2N_j)^m (saturates at SIZE_MAX).
std::size_t construction_count(const Scheme& scheme, int depth);

/// Level 0 is R([0,1]^{m+1}, 1, 1/2); level k subdivides every level-(k-1)
/// slab with (N_k, lambda_k). Throws ResourceError past `budget` slabs and
/// ConstructionError if lambda_k L > (d - c)/2 at some level.
Construction build_construction(Embedding embedding, const Scheme& scheme, int depth,
                                std::size_t budget = kDefaultBudget);

/// True if the x-projections of `slabs` tile [lo,hi]^m exactly (tolerance 1e-12).
bool covers_x_face(std::span<const Slab> slabs, std::span<const Interval> face);

/// True if no two same-label slabs among `siblings` share an m-dimensional face.
bool same_type_faces_disjoint(std::span<const Slab> siblings);

/// Ambient coordinates of the plane point (x, t) for the given group.
group::Vec embed_point(const group::GroupSpec& spec, Embedding embedding,
                       std::span<const double> x, double t);

/// Inverse of embed_point on the plane: (x_1..x_m, t) read off ambient coordinates.
group::Vec plane_point(const group::GroupSpec& spec, Embedding embedding, int m,
                       std::span<const double> ambient);

/// Throws InputError unless `spec` can host an m-dimensional slab construction in `embedding`.
void check_embedding(const group::GroupSpec& spec, Embedding embedding, int m);

}  // namespace ccf::fractal
