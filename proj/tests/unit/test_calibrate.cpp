#include <doctest.h>

#include <cmath>

#include "ccf/calibrate.hpp"
#include "ccf/error.hpp"
#include "ccf/spec_io.hpp"
#include "generators.hpp"

using namespace ccf;
using namespace ccf::group;

TEST_SUITE("calibrate") {

TEST_CASE("abelian spec calibrates near 1") {
  const GroupSpec flat(2, 1, 0.5);
  const Calibration cal = calibrate_metric_constant(flat, 5000, 1.0, 1);
  CHECK(cal.c >= 0.99);
  CHECK(cal.c < 1.0);
  CHECK(cal.violations == 0);
  CHECK(cal.samples == 5000);
}

TEST_CASE("H1 calibration revalidates on a fresh sample") {
  const GroupSpec h1 = GroupSpec::heisenberg(1, 0.5);
  const Calibration cal = calibrate_metric_constant(h1, 20000, 1.0, 2);
  CHECK(cal.c > 0.0);
  CHECK(cal.c < 1.0);
  CHECK(cal.violations == 0);
  const TripleSample fresh = sample_triples(h1.dim(), 100000, 1.0, 99);
  CHECK(count_triangle_violations(h1.with_metric_constant(cal.c), fresh) == 0);
}

TEST_CASE("calibration is deterministic in the seed") {
  const GroupSpec h2 = GroupSpec::heisenberg(2, 0.5);
  const Calibration a = calibrate_metric_constant(h2, 4000, 1.0, 5);
  const Calibration b = calibrate_metric_constant(h2, 4000, 1.0, 5);
  CHECK(a.c == b.c);
  CHECK(a.violations == b.violations);
}

TEST_CASE("violation counting: serial and parallel agree") {
  CounterRng rng(17);
  const GroupSpec spec = ccf::testing::random_spec(rng, 3, 2, 2.0, 0.5);
  const TripleSample t = sample_triples(spec.dim(), 20000, 2.0, 4);
  CHECK(t.size() == 20000);
  for (double c : {0.2, 0.6, 0.95}) {
    const GroupSpec s = spec.with_metric_constant(c);
    CHECK(count_triangle_violations(s, t) == count_triangle_violations_serial(s, t));
  }
}

TEST_CASE("comparison constant is finite and bounds the sample") {
  for (const GroupSpec& spec : {GroupSpec::heisenberg(1, 0.9), GroupSpec::heisenberg(2, 0.9)}) {
    const ComparisonConstant cc = estimate_comparison_constant(spec, 1.0, 20000, 3);
    CHECK(std::isfinite(cc.value));
    CHECK(cc.value >= 1.0);
    CHECK(cc.value >= cc.lower_ratio);
    CHECK(cc.value >= cc.upper_ratio);
    CHECK(cc.samples > 0);
  }
}

TEST_CASE("spec JSON round trip") {
  const nlohmann::json doc = {{"m1", 3}, {"m2", 2}, {"c", 0.4},
                              {"b", {{1, 1, 2, 1.5}, {2, 1, 3, -0.25}, {2, 2, 3, 2.0}}}};
  const GroupSpec spec = spec_from_json(doc);
  CHECK(spec.m1() == 3);
  CHECK(spec.m2() == 2);
  CHECK(spec.c() == 0.4);
  CHECK(spec.coefficient(0, 0, 1) == 1.5);
  CHECK(spec.coefficient(1, 0, 2) == -0.25);
  CHECK(spec.coefficient(1, 1, 2) == 2.0);
  CHECK(spec.coefficient(0, 1, 2) == 0.0);
  CHECK(spec_from_json(spec_to_json(spec)) == spec);

  const GroupSpec h = spec_from_json({{"heisenberg", 2}, {"c", 0.5}});
  CHECK(h == GroupSpec::heisenberg(2, 0.5));

  const GroupSpec calibrated = spec_from_json({{"heisenberg", 1}});
  CHECK(calibrated.c() > 0.0);
  CHECK(calibrated.c() < 1.0);
  CHECK(spec_from_json({{"heisenberg", 1}}).c() == calibrated.c());

  CHECK_THROWS_AS(spec_from_json({{"m1", 2}}), InputError);
  CHECK_THROWS_AS(spec_from_json({{"m1", 2}, {"m2", 1}, {"c", 1.5}}), InputError);
  CHECK_THROWS_AS(spec_from_json({{"m1", 2}, {"m2", 1}, {"b", {{1, 2, 1, 1.0}}}}), InputError);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::array()), InputError);
}

}  // TEST_SUITE
