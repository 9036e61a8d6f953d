// Acceptance checks, one line per criterion. Exit status is nonzero if any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccf/calibrate.hpp"
#include "ccf/fixtures.hpp"
#include "ccf/group.hpp"
#include "ccf/moran.hpp"
#include "ccf/pieces.hpp"
#include "ccf/plane.hpp"
#include "ccf/profile.hpp"
#include "ccf/report.hpp"
#include "ccf/rng.hpp"
#include "ccf/slab.hpp"

namespace fs = std::filesystem;
using namespace ccf;
using group::GroupSpec;
using group::Point;
using group::Vec;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

Point random_point(CounterRng& rng, const GroupSpec& spec, double radius) {
  Vec c(static_cast<std::size_t>(spec.dim()));
  rng.ball(c, radius);
  return Point(std::move(c), spec.m1());
}

double rel_diff(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0;
  double scale = 1.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff = std::max(diff, std::abs(a[k] - b[k]));
    scale = std::max({scale, std::abs(a[k]), std::abs(b[k])});
  }
  return diff / scale;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

GroupSpec generic_spec(int m1, int m2, std::uint64_t seed) {
  GroupSpec spec(m1, m2, 0.5);
  CounterRng rng(seed);
  for (int j = 0; j < m2; ++j) {
    for (int l = 0; l < m1; ++l) {
      for (int i = l + 1; i < m1; ++i) spec.set_coefficient(j, l, i, rng.uniform(-2.0, 2.0));
    }
  }
  const auto cal = group::calibrate_metric_constant(spec, 20000, 1.0, seed + 1);
  return spec.with_metric_constant(cal.c);
}

GroupSpec calibrated_heisenberg(int m) {
  const GroupSpec h = GroupSpec::heisenberg(m, 0.5);
  return h.with_metric_constant(group::calibrate_metric_constant(h, 20000, 1.0, 77).c);
}

// ---- CLI helpers ----

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(CCF_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(CCF_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path only_output(const fs::path& root, const std::string& command) {
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.path().filename().string().rfind(command + "-", 0) == 0) return e.path();
  }
  return {};
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

// ---- criteria ----

Outcome group_axioms() {
  const std::vector<std::pair<std::string, GroupSpec>> specs = {
      {"H1", calibrated_heisenberg(1)}, {"H2", calibrated_heisenberg(2)}, {"generic(3,2)", generic_spec(3, 2, 101)}};
  double worst = 0.0;
  for (const auto& [name, spec] : specs) {
    CounterRng rng(2024);
    for (int k = 0; k < 10000; ++k) {
      const Point p = random_point(rng, spec, 10.0);
      const Point q = random_point(rng, spec, 10.0);
      const Point r = random_point(rng, spec, 10.0);
      const double lambda = std::exp(rng.uniform(-3.0, 3.0));
      const Point left = group::multiply(spec, group::multiply(spec, p, q), r);
      const Point right = group::multiply(spec, p, group::multiply(spec, q, r));
      worst = std::max(worst, rel_diff(left.coords(), right.coords()));
      const Point e = group::multiply(spec, p, group::invert(spec, p));
      const Point e2 = group::multiply(spec, group::invert(spec, p), p);
      const Vec zero(static_cast<std::size_t>(spec.dim()), 0.0);
      worst = std::max({worst, rel_diff(e.coords(), zero), rel_diff(e2.coords(), zero)});
      const double d = group::dist_homogeneous(spec, q, r);
      const double d_left = group::dist_homogeneous(spec, group::multiply(spec, p, q), group::multiply(spec, p, r));
      worst = std::max(worst, rel_diff(d, d_left));
      const double d_dil = group::dist_homogeneous(spec, group::dilate(spec, lambda, q), group::dilate(spec, lambda, r));
      worst = std::max(worst, std::abs(d_dil - lambda * d) / std::max(1e-300, lambda * d));
    }
  }
  return {worst <= 1e-9, "max relative error " + num(worst) + " over 3 groups x 1e4 triples"};
}

Outcome heisenberg_law() {
  double worst = 0.0;
  for (int m = 1; m <= 3; ++m) {
    const GroupSpec spec = GroupSpec::heisenberg(m, 0.5);
    CounterRng rng(31 + m);
    for (int k = 0; k < 10000; ++k) {
      const Point p = random_point(rng, spec, 10.0);
      const Point q = random_point(rng, spec, 10.0);
      const Point prod = group::multiply(spec, p, q);
      // (x,y,t).(x',y',t') = (x+x', y+y', t+t' + 2(<y,x'> - <x,y'>))
      Vec direct(static_cast<std::size_t>(2 * m + 1));
      double cross = 0.0;
      for (int i = 0; i < m; ++i) {
        direct[i] = p[i] + q[i];
        direct[m + i] = p[m + i] + q[m + i];
        cross += p[m + i] * q[i] - p[i] * q[m + i];
      }
      direct[2 * m] = p[2 * m] + q[2 * m] + 2.0 * cross;
      worst = std::max(worst, rel_diff(prod.coords(), direct));
    }
  }
  return {worst <= 1e-12, "max relative deviation " + num(worst) + " for m = 1,2,3"};
}

Outcome bracket_bound() {
  const std::vector<GroupSpec> specs = {GroupSpec::heisenberg(1, 0.5), GroupSpec::heisenberg(2, 0.5),
                                        generic_spec(3, 2, 101), generic_spec(4, 3, 202)};
  std::size_t violations = 0;
  std::size_t checks = 0;
  for (const GroupSpec& spec : specs) {
    for (double R : {1.0, 5.0}) {
      const double cr = group::c_r_bound(spec, R);
      CounterRng rng(static_cast<std::uint64_t>(R * 1000) + static_cast<std::uint64_t>(spec.dim()));
      for (int k = 0; k < 100000; ++k) {
        const Point p = random_point(rng, spec, R);
        const Point q = random_point(rng, spec, R);
        const double bracket = group::norm(group::bracket_polynomial(spec, p.p1(), q.p1()));
        Vec diff(static_cast<std::size_t>(spec.m1()));
        for (int i = 0; i < spec.m1(); ++i) diff[i] = p[i] - q[i];
        const double slack = 1e-12 * (1.0 + bracket);
        if (bracket > cr * group::norm(diff) + slack) ++violations;
        if (bracket > cr * group::norm(q.p1()) + slack) ++violations;
        checks += 2;
      }
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in " + std::to_string(checks) + " checks"};
}

Outcome ball_sandwich() {
  const std::vector<std::pair<std::string, GroupSpec>> specs = {{"H1", calibrated_heisenberg(1)},
                                                                {"generic(3,2)", generic_spec(3, 2, 303)}};
  std::size_t violations = 0;
  std::size_t left_hits = 0;
  std::size_t right_hits = 0;
  std::string consts;
  for (const auto& [name, spec] : specs) {
    const double c_hat = group::estimate_comparison_constant(spec, 4.0, 200000, 404).value;
    consts += " " + name + ": c=" + num(spec.c()) + " c_R=" + num(c_hat);
    const int m1 = spec.m1();
    CounterRng rng(505);
    for (int k = 0; k < 10000; ++k) {
      const Point p = random_point(rng, spec, 1.0);
      const double r = rng.uniform(0.01, 1.0);
      Vec qc(static_cast<std::size_t>(spec.dim()));
      if (k % 2 == 0) {
        // q = p . delta_lambda(u), straddling the homogeneous sphere
        Vec u(qc.size());
        rng.ball(u, 1.0);
        const Point q = group::multiply(spec, p, group::dilate(spec, r * rng.uniform(0.0, 2.0), Point(u, m1)));
        std::copy(q.coords().begin(), q.coords().end(), qc.begin());
      } else {
        // q near V(p): horizontal offset within r, vertical offset of size about r^2 / c_R^2
        Vec h(static_cast<std::size_t>(m1));
        rng.ball(h, r);
        Vec q1(static_cast<std::size_t>(m1));
        for (int i = 0; i < m1; ++i) q1[i] = p[i] + h[i];
        const Vec bracket = group::bracket_polynomial(spec, p.p1(), q1);
        Vec w(static_cast<std::size_t>(spec.m2()));
        rng.ball(w, 2.0 * r * r / (c_hat * c_hat));
        for (int i = 0; i < m1; ++i) qc[i] = q1[i];
        for (int j = 0; j < spec.m2(); ++j) qc[m1 + j] = p[m1 + j] + bracket[j] + w[j];
      }
      const double d_inf = group::dist_homogeneous(spec, p.coords(), qc);
      const double d_e = group::dist_euclidean(p.coords(), qc);
      const double d_plane = group::dist_to_plane(group::horizontal_plane(spec, p), qc);
      constexpr double kRound = 1e-12;
      if (d_plane <= r * r / (c_hat * c_hat) && d_e <= r) {
        ++left_hits;
        if (d_inf > r * (1 + kRound)) ++violations;
      }
      if (d_inf <= r) {
        ++right_hits;
        if (d_plane > r * r / (spec.c() * spec.c()) * (1 + kRound) + kRound) ++violations;
        if (d_e > c_hat * r * (1 + kRound)) ++violations;
      }
    }
  }
  return {violations == 0 && left_hits > 0 && right_hits > 0,
          std::to_string(violations) + " violations; " + std::to_string(left_hits) + " left and " +
              std::to_string(right_hits) + " right inclusion cases;" + consts};
}

Outcome fixture_dims() {
  const GroupSpec spec = calibrated_heisenberg(1);
  const auto scales = dimlab::dyadic_scales(2, 8);
  bool ok = true;
  std::string detail;
  for (const auto& f : dimlab::bundled_fixtures()) {
    const auto rep = dimlab::dimension_comparison_report(dimlab::fixed_cloud(f.cloud, f.name), spec, scales);
    const bool good = std::abs(rep.dim_e.slope - f.dim_e) <= 0.1 && std::abs(rep.dim_g.slope - f.dim_g) <= 0.1;
    ok = ok && good;
    detail += f.name + " (" + num(rep.dim_e.slope) + ", " + num(rep.dim_g.slope) + ") ";
  }
  return {ok, detail};
}

/// Runs `excise` and checks each radius group reaches the quantile.
Outcome excise_run(const std::string& name, const std::string& args) {
  const fs::path dir = scratch(name);
  const int code = run_cli("excise " + args + " --out " + (dir / "out").string(), dir / "log.txt");
  const fs::path out = only_output(dir / "out", "excise");
  if (out.empty()) return {false, "exit " + std::to_string(code) + ", no output"};
  const json summary = read_json(out / "excise.json");
  std::string detail = "bound " + num(summary["bound"].get<double>()) + ";";
  bool ok = code == 0 && !summary["groups"].empty();
  for (const auto& g : summary["groups"]) {
    ok = ok && g["pass"].get<bool>();
    detail += " " + g["group"].get<std::string>() + " " + num(g["fraction"].get<double>());
  }
  return {ok, detail};
}

Outcome example1_bound() {
  return excise_run("c6", "--scheme example1 --m 1 --depth 3 --seed 6");
}

Outcome example2_bound() {
  return excise_run("c7", "--scheme example2 --M 2 --m 1 --depth 12 --seed 7");
}

Outcome moran_dims() {
  const fs::path dir = scratch("c8");
  const int code = run_cli("dims --scheme moran --s 2.5 --depth 6 --seed 8 --out " + (dir / "out").string(),
                           dir / "log.txt");
  const fs::path out = only_output(dir / "out", "dims");
  if (out.empty()) return {false, "dims exit " + std::to_string(code) + ", no output"};
  const json rep = read_json(out / "dims.json");
  const double de = rep["dim_E"].get<double>();
  const double dg = rep["dim_G"].get<double>();
  const group::StrataProfile profile({2, 1});
  const bool dims_ok = code == 0 && std::abs(de - 2.5) <= 0.3 && std::abs(dg - 3.0) <= 0.3 &&
                       dg >= group::beta_minus(profile, std::clamp(de, 0.0, 3.0)) - 0.3;
  const Outcome exc = excise_run("c8x", "--scheme moran --s 2.5 --depth 5 --seed 8");
  return {dims_ok && exc.pass, "dim_E " + num(de) + ", dim_G " + num(dg) + "; excision " + exc.detail};
}

Outcome horizontal_control() {
  const GroupSpec spec = calibrated_heisenberg(1);
  const auto cloud = dimlab::horizontal_segment(std::size_t{1} << 14);
  const auto pieces = dimlab::pieces_from(cloud, spec);
  const std::vector<dimlab::ExcisionSpec> modes = {dimlab::ExcisionSpec::linear_delta(0.125),
                                                   dimlab::ExcisionSpec::quadratic_m(2.0),
                                                   dimlab::ExcisionSpec::power_eps(0.5)};
  double worst = 0.0;
  std::size_t evaluations = 0;
  for (const auto& mode : modes) {
    for (auto distance : {dimlab::PlaneDistance::in_plane, dimlab::PlaneDistance::ambient}) {
      for (std::size_t i = 0; i < cloud.size(); i += 1024) {
        for (int j = 1; j <= 8; ++j) {
          const double r = std::ldexp(1.0, -j);
          worst = std::max(worst, dimlab::excision_ratio(pieces, cloud.point(i), r, 1.0, mode, distance));
          ++evaluations;
        }
      }
    }
  }
  return {worst == 0.0, "max ratio " + num(worst) + " over " + std::to_string(evaluations) + " evaluations"};
}

Outcome measure_brackets() {
  bool ok = true;
  std::string detail;
  const std::size_t budget = 200000;
  for (int m : {1, 2}) {
    const GroupSpec spec = calibrated_heisenberg(m);
    const double upper = std::pow(m, m / 2.0);
    for (int which = 0; which < 2; ++which) {
      const fractal::Scheme scheme =
          which == 0 ? fractal::Scheme{fractal::Example1{m}} : fractal::Scheme{fractal::Example2{2.0, m}};
      double lo = std::numeric_limits<double>::infinity();
      double hi = 0.0;
      int depths = 0;
      for (int depth = 1; fractal::construction_count(scheme, depth) <= budget; ++depth) {
        const auto construction = fractal::build_construction(fractal::Embedding::heis_xt, scheme, depth, budget);
        const auto pieces = dimlab::pieces_from(construction, spec);
        const double h = dimlab::covering_measure(pieces, dimlab::region_all(), m, dimlab::Metric::euclidean);
        lo = std::min(lo, h);
        hi = std::max(hi, h);
        ++depths;
        if (h < 1.0 - 1e-12 || h > upper + 1e-12) ok = false;
      }
      detail += fractal::scheme_name(scheme) + " m=" + std::to_string(m) + " in [" + num(lo) + ", " + num(hi) +
                "] over " + std::to_string(depths) + " depths, target [1, " + num(upper) + "]; ";
    }
  }
  return {ok, detail};
}

/// Recomputes each branch from the full product of the preceding ones.
std::vector<int> brute_force_branches(int m1, int m2, double s, int T) {
  std::vector<int> n;
  for (int t = 0; t < T; ++t) {
    if (t == 0) {
      n.push_back(2);
      continue;
    }
    double prod = 1.0;
    for (int b : n) prod *= std::pow(b, 2 * m2);
    n.push_back(prod < std::pow(2.0, 2.0 * t * (s - m1)) ? 2 : 1);
  }
  return n;
}

Outcome moran_branches() {
  const std::vector<int> expected = {2, 1, 1, 2, 1, 2, 1, 2};
  const auto got = fractal::moran_branch_sequence(2, 1, 2.5, 8);
  bool ok = got == expected && got == brute_force_branches(2, 1, 2.5, 8);
  double worst = 0.0;
  for (double s : {2.1, 2.5, 2.9}) {
    const auto n = fractal::moran_branch_sequence(2, 1, s, 20);
    ok = ok && n == brute_force_branches(2, 1, s, 20);
    double log_prod = 0.0;
    for (int t = 1; t <= 20; ++t) {
      log_prod += 2.0 * std::log2(n[static_cast<std::size_t>(t - 1)]);
      worst = std::max(worst, std::abs(log_prod - 2.0 * t * (s - 2.0)));
    }
  }
  ok = ok && worst <= 2.0 + 1e-9;
  std::string seq;
  for (int b : got) seq += std::to_string(b);
  return {ok, "sequence " + seq + ", max |log2 ratio| " + num(worst)};
}

Outcome determinism() {
  const std::vector<std::string> runs = {
      "gen --scheme example1 --m 1 --depth 3 --seed 12",
      "gen --scheme moran --s 2.5 --depth 4 --seed 12",
      "dims --scheme moran --s 2.5 --depth 5 --seed 12",
      "excise --scheme example2 --M 2 --m 1 --depth 10 --seed 12",
      "density --scheme moran --depth 4 --seed 12",
      "calibrate --heisenberg 1 --seed 12",
      "verify --scheme example1 --depth 3 --seed 12",
  };
  const fs::path dir = scratch("c12");
  std::size_t files = 0;
  std::string mismatch;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const std::string cmd = runs[k].substr(0, runs[k].find(' '));
    for (const char* root : {"a", "b"}) {
      run_cli(runs[k] + " --out " + (dir / root / std::to_string(k)).string(), dir / "log.txt");
    }
    const fs::path a = only_output(dir / "a" / std::to_string(k), cmd);
    const fs::path b = only_output(dir / "b" / std::to_string(k), cmd);
    if (a.empty() || b.empty() || a.filename() != b.filename()) {
      mismatch += " " + runs[k] + " (missing output)";
      continue;
    }
    for (const auto& e : fs::directory_iterator(a)) {
      const auto ext = e.path().extension();
      if (ext != ".csv" && ext != ".json") continue;
      ++files;
      if (slurp(e.path()) != slurp(b / e.path().filename())) mismatch += " " + e.path().filename().string();
    }
  }
  return {mismatch.empty() && files > 0,
          std::to_string(files) + " CSV/JSON files compared" + (mismatch.empty() ? "" : "; differ:" + mismatch)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "group and metric axioms", group_axioms},
      {2, "Heisenberg law cross-check", heisenberg_law},
      {3, "bracket polynomial bound", bracket_bound},
      {4, "Euclidean and homogeneous ball sandwich", ball_sandwich},
      {5, "fixture dimensions", fixture_dims},
      {6, "Example1 excision bound", example1_bound},
      {7, "Example2 excision bound", example2_bound},
      {8, "Moran set dimensions and excision", moran_dims},
      {9, "horizontal segment negative control", horizontal_control},
      {10, "measure brackets for slab constructions", measure_brackets},
      {11, "Moran branch oracle", moran_branches},
      {12, "determinism of CLI outputs", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2d: %s  %s (%.2fs): %s\n", c.id, out.pass ? "PASS" : "FAIL", c.name.c_str(), secs,
                out.detail.c_str());
    std::fflush(stdout);
    failures += out.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
