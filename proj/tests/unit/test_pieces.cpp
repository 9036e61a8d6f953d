#include <doctest.h>

#include <cmath>

#include "ccf/error.hpp"
#include "ccf/fixtures.hpp"
#include "ccf/pieces.hpp"
#include "generators.hpp"

using namespace ccf;
using namespace ccf::dimlab;
using group::GroupSpec;
using group::Vec;

namespace {

const GroupSpec kH1 = GroupSpec::heisenberg(1, 0.5);

Vec plane_pt(const fractal::Construction& con, std::span<const double> ambient) {
  return fractal::plane_point(kH1, con.embedding, con.m, ambient);
}

}  // namespace

TEST_SUITE("pieces") {

TEST_CASE("covering measure of everything and nothing") {
  for (int depth = 0; depth <= 4; ++depth) {
    const auto con = fractal::build_construction(fractal::Embedding::heis_xt, fractal::Example1{1}, depth);
    const PieceSet pieces = pieces_from(con, kH1);
    CHECK(pieces.size() == con.slabs.size());
    const double all = covering_measure(pieces, region_all(), 1.0, Metric::euclidean);
    CHECK(all >= 1.0);
    CHECK(all <= std::sqrt(2.0));
    CHECK(covering_measure(pieces, region_none(), 1.0, Metric::euclidean) == 0.0);
  }
}

TEST_CASE("piece diameters") {
  const auto con = fractal::build_construction(fractal::Embedding::heis_xt, fractal::Example2{2.0, 1}, 5);
  const PieceSet pieces = pieces_from(con, kH1);
  const double h = con.h(), v = con.v();
  for (std::size_t k = 0; k < pieces.size(); k += 7) {
    CHECK(pieces.diam_e[k] == doctest::Approx(std::sqrt(h * h + v * v)));
    CHECK(pieces.diam_inf[k] == doctest::Approx(std::max(h, kH1.c() * std::sqrt(v))));
  }
}

TEST_CASE("covering measure is additive across a split between slabs") {
  for (const fractal::Scheme& scheme : {fractal::Scheme{fractal::Example1{1}}, fractal::Scheme{fractal::Example2{2.0, 1}}}) {
    const auto con = fractal::build_construction(fractal::Embedding::heis_xt, scheme, 3);
    const PieceSet pieces = pieces_from(con, kH1);
    const double eps = 0.25 * con.h();
    for (double cut : {0.5, 0.25, 0.75}) {
      for (Metric metric : {Metric::euclidean, Metric::homogeneous}) {
        const double total = covering_measure(pieces, region_all(), 1.0, metric);
        const double left = covering_measure(pieces, region_halfspace(0, cut - eps, true), 1.0, metric);
        const double right = covering_measure(pieces, region_halfspace(0, cut + eps, false), 1.0, metric);
        CHECK(left + right == doctest::Approx(total).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("serial and parallel covering sums are identical") {
  const auto con = fractal::build_construction(fractal::Embedding::heis_xt, fractal::Example2{2.0, 1}, 10);
  const PieceSet pieces = pieces_from(con, kH1);
  CounterRng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec p{rng.uniform(), rng.uniform()};
    const double r = std::ldexp(1.0, -static_cast<int>(1 + rng.below(8)));
    for (Metric metric : {Metric::euclidean, Metric::homogeneous}) {
      const Region ball = ball_region(pieces, p, r, metric);
      CHECK(covering_measure(pieces, ball, 1.0, metric) == covering_measure_serial(pieces, ball, 1.0, metric));
    }
  }
}

TEST_CASE("ball regions agree with the metrics on points") {
  CounterRng rng0(5);
  const std::vector<GroupSpec> specs = {kH1, ccf::testing::random_spec(rng0, 3, 2, 2.0, 0.5)};
  for (const auto& spec : specs) {
    PointCloud cloud;
    cloud.dim = spec.dim();
    CounterRng rng(6);
    for (int i = 0; i < 3000; ++i) cloud.push(ccf::testing::random_point(spec, rng, 1.0).coords(), 1.0);
    const PieceSet pieces = pieces_from(cloud, spec);
    for (int trial = 0; trial < 20; ++trial) {
      const group::Point p = ccf::testing::random_point(spec, rng, 1.0);
      const double r = rng.uniform(0.05, 0.8);
      const Region ge = ball_region(pieces, p.coords(), r, Metric::euclidean);
      const Region gh = ball_region(pieces, p.coords(), r, Metric::homogeneous);
      for (std::size_t k = 0; k < cloud.size(); ++k) {
        const auto q = cloud.point(k);
        const group::Point qp(Vec(q.begin(), q.end()), spec.m1());
        const double de = group::dist_euclidean(p, qp);
        const double dh = group::dist_homogeneous(spec, p, qp);
        if (de <= r) CHECK(ge(q, q));
        if (de > r * (1 + 1e-9)) CHECK_FALSE(ge(q, q));
        if (dh <= r) CHECK(gh(q, q));
        if (dh > r * (1 + 1e-9)) CHECK_FALSE(gh(q, q));
      }
    }
  }
}

TEST_CASE("plane-frame homogeneous ball matches the metric") {
  const auto con = fractal::build_construction(fractal::Embedding::heis_xt, fractal::Example1{1}, 2);
  const PieceSet pieces = pieces_from(con, kH1);
  CounterRng rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec p{rng.uniform(), rng.uniform()};
    const Vec q{rng.uniform(), rng.uniform()};
    const double r = rng.uniform(0.01, 0.7);
    const double d = group::dist_homogeneous(kH1, pieces.to_ambient(p), pieces.to_ambient(q));
    const bool hit = ball_region(pieces, p, r, Metric::homogeneous)(q, q);
    if (d <= r) CHECK(hit);
    if (d > r * (1 + 1e-9)) CHECK_FALSE(hit);
  }
}

TEST_CASE("excision vanishes on a horizontal segment") {
  const PointCloud seg = horizontal_segment(4096);
  const PieceSet pieces = pieces_from(seg, kH1);
  const std::vector<ExcisionSpec> modes = {ExcisionSpec::linear_delta(0.125), ExcisionSpec::linear_delta(1e-6),
                                           ExcisionSpec::quadratic_m(2.0), ExcisionSpec::power_eps(0.5)};
  for (std::size_t i = 17; i < seg.size(); i += 401) {
    for (double r : {0.5, 0.1, 0.01, 1e-3}) {
      for (const auto& mode : modes) {
        for (PlaneDistance d : {PlaneDistance::in_plane, PlaneDistance::ambient}) {
          CHECK(excision_ratio(pieces, seg.point(i), r, 1.0, mode, d) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("excision is positive off the plane") {
  const PointCloud seg = vertical_segment(4096);
  const PieceSet pieces = pieces_from(seg, kH1);
  const auto p = seg.point(2048);
  for (double r : {0.25, 0.05}) {
    CHECK(excision_ratio(pieces, p, r, 1.0, ExcisionSpec::linear_delta(0.125)) > 0.3);
  }
}

TEST_CASE("excision is nonincreasing in the width") {
  const auto con = fractal::build_construction(fractal::Embedding::heis_xt, fractal::Example2{2.0, 1}, 9);
  const PieceSet pieces = pieces_from(con, kH1);
  const PointCloud cloud = fractal::sample_set(con, kH1, 30, 4);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec p = plane_pt(con, cloud.point(i));
    for (double r : {0.05, 0.01}) {
      double prev = INFINITY;
      for (double w : {0.0, 1e-4, 1e-3, 3e-3, 1e-2, 0.05}) {
        const double v = excision_ratio_width(pieces, p, r, 1.0, w);
        CHECK(v <= prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("density dominates excision") {
  const auto con = fractal::build_construction(fractal::Embedding::heis_xt, fractal::Example1{1}, 3);
  const PieceSet pieces = pieces_from(con, kH1);
  const PointCloud cloud = fractal::sample_set(con, kH1, 50, 6);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec p = plane_pt(con, cloud.point(i));
    for (double r : {0.25, 0.06, 0.02}) {
      const double dens = density_ratio(pieces, p, r, 1.0, Metric::euclidean);
      for (const auto& mode : {ExcisionSpec::linear_delta(0.125), ExcisionSpec::power_eps(0.3)}) {
        for (PlaneDistance d : {PlaneDistance::in_plane, PlaneDistance::ambient}) {
          CHECK(excision_ratio(pieces, p, r, 1.0, mode, d) <= dens + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("density examples") {
  const PointCloud seg = horizontal_segment(1 << 14);
  const PieceSet pieces = pieces_from(seg, kH1);
  const Vec mid{0.5, 0.0, 0.0};
  for (double r : {0.1, 0.01}) {
    CHECK(density_ratio(pieces, mid, r, 1.0, Metric::euclidean) == doctest::Approx(1.0).epsilon(1e-3));
  }
  CHECK(density_ratio(pieces, Vec{5.0, 5.0, 5.0}, 0.01, 1.0, Metric::euclidean) == 0.0);

  const auto con = fractal::build_construction(fractal::Embedding::heis_xt, fractal::Example1{1}, 3);
  const PieceSet slabs = pieces_from(con, kH1);
  const PointCloud cloud = fractal::sample_set(con, kH1, 100, 2);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec p = plane_pt(con, cloud.point(i));
    for (int j = 2; j <= 6; ++j) {
      const double v = density_ratio(slabs, p, std::ldexp(1.0, -j), 1.0, Metric::euclidean);
      CHECK(v >= 0.5 / 4.0);
      CHECK(v <= 3.0);
    }
  }
}

TEST_CASE("excision parameters are validated") {
  CHECK_THROWS_AS(ExcisionSpec::linear_delta(0.0), InputError);
  CHECK_THROWS_AS(ExcisionSpec::quadratic_m(1.0), InputError);
  CHECK_THROWS_AS(ExcisionSpec::power_eps(1.0), InputError);
  CHECK(ExcisionSpec::quadratic_m(2.0).width(0.1) == doctest::Approx(0.02));
  CHECK(ExcisionSpec::power_eps(0.5).width(0.04) == doctest::Approx(0.008));
}

}  // TEST_SUITE
