#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ccf/group.hpp"
#include "ccf/slab.hpp"

namespace ccf::fractal {

/// n_1 = 2; n_{t+1} = 2 iff prod_{i<=t} n_i^(2 m2) < 2^(2t(s - m1)), else 1.
std::vector<int> moran_branch_sequence(int m1, int m2, double s, int T);

/// A map F_{a1 a2} with a1 in {0,1}^m1 and a2 in {0,1,2,3}^m2.
struct MoranSymbol {
  std::vector<int> a1;
  std::vector<int> a2;
};

/// Size of the full alphabet I: 2^(m1 + 2 m2).
std::size_t alphabet_size(int m1, int m2);

/// Symbol with 0-based index `index`. Ordering is a2-major, so the first
/// 2^m1 symbols are the a2 = 0 maps (the F_{a1}); within a block a1 runs
/// lexicographically with the first coordinate most significant.
MoranSymbol symbol_at(int m1, int m2, std::size_t index);

/// Number of admissible symbols at a level with branch number n: n^(2 m2) 2^m1.
std::size_t level_alphabet_size(int n, int m1, int m2);

/// F_{a1}(p) = [a1,0] . delta_{1/2}([-a1,0] . p) when a2 is absent, else
/// F_{a1 a2}(p) = [a1,a2] . delta_{1/2}([-a1,-a2] . p), via group operations.
group::Point ifs_map_apply(const group::GroupSpec& spec, std::span<const int> a1,
                           std::optional<std::span<const int>> a2, const group::Point& p);

/// Affine map x -> A x + b on R^n, A row-major.
struct AffineMap {
  int dim = 0;
  group::Vec A;
  group::Vec b;

  [[nodiscard]] group::Vec apply(std::span<const double> x) const;
};

/// Closed form of F_{a1 a2}: p -> [(p1 + a1)/2, 3 a2/4 + p2/4 + P(a1, p1)/4].
AffineMap ifs_affine(const group::GroupSpec& spec, const MoranSymbol& sym);

struct Box {
  group::Vec lo;
  group::Vec hi;
  [[nodiscard]] bool contains(std::span<const double> p, double tol = 0.0) const;
  [[nodiscard]] bool contains(const Box& other, double tol = 0.0) const;
  [[nodiscard]] group::Vec center() const;
};

/// Exact bounding box of the image of `box` under an affine map.
Box affine_image(const AffineMap& map, const Box& box);

/// Upper bound for the d_inf-diameter of any set inside `box`.
double diam_inf_bound(const group::GroupSpec& spec, const Box& box);

struct AttractorBox {
  Box box;
  double diam_inf = 0.0;
  std::vector<double> history;  // diam bound after each refinement, nonincreasing
};

/// Outer box for the attractor E of the full system F_2. Starts from an
/// invariant box (g(B) in B for every map) and applies B -> bbox(U g(B))
/// `iterations` times. Throws ConstructionError if no invariant box is found.
AttractorBox attractor_box(const group::GroupSpec& spec, int iterations);

struct EnumerateOptions {
  std::size_t budget = kDefaultBudget;
  /// Levels t with 3 sqrt(m2) 4^(1-t) < vertical_floor use only the a2 = 0
  /// block. The second-layer translation such a digit adds is at most that
  /// size, so at scale r = vertical_floor the centers still form an r-net.
  double vertical_floor = 0.0;
  int attractor_iterations = 8;
};

class MoranSet;

MoranSet enumerate_cylinders(const group::GroupSpec& spec, double s, int depth,
                             const EnumerateOptions& options = {});
MoranSet enumerate_cylinders(const group::GroupSpec& spec, double s, int depth,
                             const AttractorBox& attractor, const EnumerateOptions& options = {});

/// All depth-n cylinders X_i = g_{i_1} o ... o g_{i_n}(E), i in J_n, in
/// lexicographic address order. Storage is flat: address k occupies
/// digits[k*depth .. (k+1)*depth), box k occupies lo/hi[k*dim ..].
class MoranSet {
 public:
  const group::GroupSpec& spec() const noexcept { return spec_; }
  double s() const noexcept { return s_; }
  int depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return count_; }
  const std::vector<int>& branches() const noexcept { return branches_; }
  const AttractorBox& attractor() const noexcept { return attractor_; }
  /// diam_inf(E)/2^depth: every map is an exact 1/2-similarity for d_inf.
  double diam_inf_bound() const noexcept { return diam_bound_; }

  std::span<const std::uint16_t> address(std::size_t k) const;
  Box box(std::size_t k) const;
  std::span<const double> lo(std::size_t k) const;
  std::span<const double> hi(std::size_t k) const;
  group::Vec center(std::size_t k) const;

 private:
  friend MoranSet enumerate_cylinders(const group::GroupSpec&, double, int,
                                      const EnumerateOptions&);
  friend MoranSet enumerate_cylinders(const group::GroupSpec&, double, int,
                                      const AttractorBox&, const EnumerateOptions&);
  explicit MoranSet(group::GroupSpec spec) : spec_(std::move(spec)) {}

  group::GroupSpec spec_;
  double s_ = 0.0;
  int depth_ = 0;
  std::size_t count_ = 0;
  std::vector<int> branches_;
  AttractorBox attractor_;
  double diam_bound_ = 0.0;
  std::vector<std::uint16_t> digits_;
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Per-level alphabet sizes for the enumeration, honoring the vertical floor.
std::vector<std::size_t> level_sizes(const group::GroupSpec& spec, double s, int depth,
                                     double vertical_floor = 0.0);

/// Count prod_j |alphabet_j| without enumerating (saturating).
std::size_t cylinder_count(const group::GroupSpec& spec, double s, int depth,
                           double vertical_floor = 0.0);


/// Composed affine map g_{i_1} o ... o g_{i_n} for an address of symbol indices.
AffineMap compose_address(const group::GroupSpec& spec, std::span<const std::uint16_t> address);

struct VerticalFactorSet {
  int m2 = 1;
  int depth = 0;
  double side = 2.0;               // 2/4^depth
  std::vector<double> lo;          // box k at lo[k*m2 ..], each [lo, lo + side]^m2
  group::Vec enclosing_lo;         // bounding box of all generated boxes
  group::Vec enclosing_hi;
  [[nodiscard]] std::size_t size() const noexcept {
    return lo.size() / static_cast<std::size_t>(m2);
  }
};

/// Y_i = h_{i_1} o ... o h_{i_n}([0,2]^m2), h(y) = y/4 + 3a/4, i in J'_n. At a
/// level with branch n_j the translations are the lexicographically first
/// n_j^(2 m2) points of {0,1,2,3}^m2.
VerticalFactorSet vertical_factor_set(int m2, double s, int m1, int depth,
                                      std::size_t budget = kDefaultBudget);

}  // namespace ccf::fractal
