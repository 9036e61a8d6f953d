#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ccf/commands.hpp"
#include "ccf/config.hpp"
#include "ccf/error.hpp"
#include "ccf/output.hpp"
#include "ccf/rng.hpp"

namespace fs = std::filesystem;
using namespace ccf;
using namespace ccf::cli;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(CCF_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Runs the CLI with `args`; returns its exit status. Output goes to <dir>/log.txt.
int run_cli(const fs::path& dir, const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(CCF_CLI_PATH) + " " + args + " > " +
                          (dir / "log.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// The single <command>-<hash> directory under `root`.
fs::path only_output(const fs::path& root, const std::string& command) {
  fs::path found;
  int n = 0;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.path().filename().string().rfind(command + "-", 0) == 0) {
      found = e.path();
      ++n;
    }
  }
  REQUIRE(n == 1);
  return found;
}

int count_entries(const fs::path& root) {
  if (!fs::exists(root)) return 0;
  int n = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(root)) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing and validation") {
  const ExperimentConfig cfg = parse_config({{"generator", {{"scheme", "example2"}, {"M", 3.0}}}, {"seed", 9}});
  CHECK(cfg.generator.depth == 12);
  CHECK(cfg.generator.M == 3.0);
  CHECK(cfg.seed == 9u);
  CHECK(cfg.spec.m1() == 2);

  Overrides ov;
  ov.scheme = "moran";
  ov.s = 2.25;
  ov.seed = 4;
  const ExperimentConfig m = parse_config(json::object(), ov);
  CHECK(m.generator.scheme == "moran");
  CHECK(m.generator.depth == 6);
  CHECK(m.generator.s == 2.25);

  CHECK_THROWS_AS(parse_config({{"generator", {{"scheme", "nope"}}}}), InputError);
  CHECK_THROWS_AS(parse_config({{"generator", {{"scheme", "custom"}, {"depth", 2}, {"levels", {{1, 0.5}}}}}}), InputError);
  CHECK_THROWS_AS(parse_config({{"generator", {{"embedding", "plane_1m1"}, {"m", 2}}}}), InputError);
  CHECK_THROWS_AS(parse_config({{"generator", {{"scheme", "fixture"}, {"fixture", "circle"}}}}), InputError);
  CHECK_THROWS_AS(parse_config({{"diagnostics", {{{"kind", "magic"}}}}}), InputError);
  CHECK_THROWS_AS(parse_config({{"scales", {0.1, 0.2}}}), InputError);
  CHECK_THROWS_AS(parse_config({{"seed", -1}}), InputError);
  CHECK_THROWS_AS(parse_config(json::array()), InputError);

  const ExperimentConfig sc = parse_config({{"scales", {{"dyadic", {2, 5}}}}});
  CHECK(sc.scales == std::vector<double>{0.25, 0.125, 0.0625, 0.03125});
}

TEST_CASE("canonical config and hashing") {
  const ExperimentConfig a = parse_config({{"seed", 1}, {"generator", {{"scheme", "example1"}}}});
  const ExperimentConfig b = parse_config({{"generator", {{"depth", 3}, {"scheme", "example1"}, {"m", 1}}}, {"seed", 1}});
  CHECK(a.canonical().dump() == b.canonical().dump());
  const ExperimentConfig c = parse_config({{"seed", 2}});
  CHECK(a.canonical().dump() != c.canonical().dump());
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("missing seed is a usage error") {
  std::ostringstream log, err;
  CHECK(run_command("gen", parse_config(json::object()), log, err) == kUsageError);
  CHECK(err.str().find("seed") != std::string::npos);
}

TEST_CASE("gen writes slabs, points and sidecar") {
  const fs::path dir = scratch("gen");
  REQUIRE(run_cli(dir, "gen --scheme example1 --m 1 --depth 3 --seed 7 --out " + (dir / "out").string()) == 0);
  const fs::path out = only_output(dir / "out", "gen");
  const json slabs = json::parse(slurp(out / "slabs.json"));
  CHECK(slabs["count"] == 256);
  CHECK(slabs["slabs"].size() == 256);
  const json meta = json::parse(slurp(out / "meta.json"));
  CHECK(meta["config_hash"].get<std::string>() == out.filename().string().substr(4));
  CHECK(meta["seed"] == 7);
  CHECK(meta["scheme"] == "example1");
  CHECK(meta["depth"] == 3);
  CHECK(meta.contains("spec"));
  CHECK(slurp(out / "points.csv").rfind("x1,x2,x3,weight\n", 0) == 0);
}

TEST_CASE("gen is byte-identical across runs and never rewrites") {
  const fs::path dir = scratch("gen_repeat");
  const std::string args = "gen --scheme moran --s 2.5 --depth 4 --seed 11 --out ";
  REQUIRE(run_cli(dir, args + (dir / "a").string()) == 0);
  REQUIRE(run_cli(dir, args + (dir / "b").string()) == 0);
  const fs::path a = only_output(dir / "a", "gen");
  const fs::path b = only_output(dir / "b", "gen");
  CHECK(a.filename() == b.filename());
  for (const char* f : {"cylinders.json", "points.csv", "meta.json"}) CHECK(slurp(a / f) == slurp(b / f));

  const auto before = fs::last_write_time(a / "points.csv");
  REQUIRE(run_cli(dir, args + (dir / "a").string()) == 0);
  CHECK(slurp(dir / "log.txt").find("exists") != std::string::npos);
  CHECK(fs::last_write_time(a / "points.csv") == before);
}

TEST_CASE("budget overflow exits 3 without files") {
  const fs::path dir = scratch("budget");
  CHECK(run_cli(dir, "gen --scheme example1 --depth 4 --seed 1 --out " + (dir / "out").string(),
                "CC_FRACTAL_BUDGET=1000") == kBudgetExceeded);
  CHECK(count_entries(dir / "out") == 0);
  CHECK(run_cli(dir, "dims --scheme moran --depth 9 --seed 1 --out " + (dir / "out").string(),
                "CC_FRACTAL_BUDGET=5000") == kBudgetExceeded);
  CHECK(count_entries(dir / "out") == 0);
}

TEST_CASE("usage errors exit 2") {
  const fs::path dir = scratch("usage");
  CHECK(run_cli(dir, "gen --scheme example1") == kUsageError);
  CHECK(run_cli(dir, "dims --input /nonexistent/points.csv --seed 1") == kUsageError);
  CHECK(run_cli(dir, "gen --scheme example2 --M 0.5 --seed 1") == kUsageError);
  CHECK(run_cli(dir, "frobnicate") == kUsageError);
  CHECK(run_cli(dir, "gen --config /nonexistent.json --seed 1") == kUsageError);
  std::ofstream(dir / "bad.json") << "{ not json";
  CHECK(run_cli(dir, "gen --seed 1 --config " + (dir / "bad.json").string()) == kUsageError);
}

TEST_CASE("dims on fixtures and Moran") {
  const fs::path dir = scratch("dims");
  const std::string out = " --out " + (dir / "out").string();
  REQUIRE(run_cli(dir, "dims --fixture vertical_segment --seed 1" + out) == 0);
  const json rep = json::parse(slurp(only_output(dir / "out", "dims") / "dims.json"));
  CHECK(rep["dim_G"].get<double>() == doctest::Approx(2.0).epsilon(0.05));
  CHECK(rep["pass"] == true);
  CHECK(run_cli(dir, "dims --scheme moran --s 2.5 --depth 6 --seed 1" + out) == 0);
}

TEST_CASE("dims failure still writes the report") {
  const fs::path dir = scratch("dims_fail");
  {
    std::ofstream csv(dir / "noisy.csv");
    csv << "x1,x2,x3,weight\n";
    CounterRng rng(5);
    for (int i = 0; i < 3000; ++i) {
      csv << rng.uniform() << "," << 0.01 * rng.uniform() << "," << rng.uniform() << ",1\n";
    }
  }
  CHECK(run_cli(dir, "dims --tau 0.0001 --seed 1 --input " + (dir / "noisy.csv").string() + " --out " +
                         (dir / "out").string()) == kDiagnosticFailure);
  const fs::path out = only_output(dir / "out", "dims");
  CHECK(fs::exists(out / "dims.json"));
  CHECK(fs::exists(out / "dims.csv"));
  CHECK(fs::exists(out / "dims.svg"));
  CHECK(json::parse(slurp(out / "dims.json"))["pass"] == false);
}

TEST_CASE("excise verdicts") {
  const fs::path dir = scratch("excise");
  const std::string out = " --out " + (dir / "out").string();
  CHECK(run_cli(dir, "excise --scheme example1 --m 1 --depth 3 --seed 3" + out) == 0);
  CHECK(run_cli(dir, "excise --scheme example2 --M 2 --m 1 --depth 12 --seed 3" + out) == 0);
  CHECK(run_cli(dir, "excise --fixture horizontal_segment --seed 3" + out) == kDiagnosticFailure);
  const fs::path ex1 = dir / "out";
  int csvs = 0;
  for (const auto& e : fs::directory_iterator(ex1)) {
    CHECK(fs::exists(e.path() / "excise.svg"));
    CHECK(slurp(e.path() / "excise.csv").rfind("r,ratio", 0) == 0);
    ++csvs;
  }
  CHECK(csvs == 3);
}

TEST_CASE("config file drives excise with explicit parameters") {
  const fs::path dir = scratch("excise_cfg");
  const json doc = {{"spec", {{"heisenberg", 1}, {"c", 0.5}}},
                    {"generator", {{"scheme", "example1"}, {"m", 1}, {"depth", 3}}},
                    {"diagnostics", {{{"kind", "excise"}, {"mode", "power_eps"}, {"param", 0.5},
                                      {"bound", 0.9}, {"direction", "<="}, {"points", 50}}}},
                    {"seed", 5}};
  std::ofstream(dir / "cfg.json") << doc.dump(2);
  CHECK(run_cli(dir, "excise --config " + (dir / "cfg.json").string() + " --out " + (dir / "out").string()) == 0);
  const json summary = json::parse(slurp(only_output(dir / "out", "excise") / "excise.json"));
  CHECK(summary["excision"] == "power_eps(0.5)");
  CHECK(summary["direction"] == "<=");
  CHECK(summary["groups"].size() == 2);
}

TEST_CASE("calibrate outputs") {
  const fs::path dir = scratch("calibrate");
  std::ofstream(dir / "abelian.json") << R"({"spec": {"m1": 2, "m2": 1, "c": 0.5}, "seed": 3})";
  REQUIRE(run_cli(dir, "calibrate --config " + (dir / "abelian.json").string() + " --out " + (dir / "a").string()) == 0);
  const json ab = json::parse(slurp(only_output(dir / "a", "calibrate") / "calibrate.json"));
  CHECK(ab["c"].get<double>() >= 0.99);
  CHECK(ab["violations"] == 0);
  CHECK(ab.contains("samples"));

  REQUIRE(run_cli(dir, "calibrate --heisenberg 1 --seed 3 --out " + (dir / "h").string()) == 0);
  REQUIRE(run_cli(dir, "calibrate --heisenberg 1 --seed 3 --out " + (dir / "h2").string()) == 0);
  const std::string h = slurp(only_output(dir / "h", "calibrate") / "calibrate.json");
  CHECK(h == slurp(only_output(dir / "h2", "calibrate") / "calibrate.json"));
  const json hj = json::parse(h);
  CHECK(hj["c"].get<double>() > 0.0);
  CHECK(hj["c"].get<double>() < 1.0);
  CHECK(hj["revalidation"]["violations"] == 0);
}

TEST_CASE("density and verify") {
  const fs::path dir = scratch("density");
  const std::string out = " --out " + (dir / "out").string();
  CHECK(run_cli(dir, "density --scheme moran --depth 5 --seed 2" + out) == 0);
  CHECK(run_cli(dir, "verify --scheme example2 --depth 8 --seed 2" + out) == 0);
  CHECK(run_cli(dir, "verify --scheme moran --depth 4 --seed 2" + out) == 0);
}

TEST_CASE("fixture CSVs are generated at build time") {
  for (const char* name : {"horizontal_segment", "vertical_segment", "unit_square"}) {
    const fs::path p = fs::path(CCF_FIXTURE_DIR) / (std::string(name) + ".csv");
    CHECK(fs::exists(p));
  }
}

}  // TEST_SUITE
