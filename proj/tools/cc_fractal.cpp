// cc-fractal: generate fractal objects in step-2 Carnot groups and run
// dimension, excision, density and calibration diagnostics on them.

#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ccf/commands.hpp"
#include "ccf/config.hpp"
#include "ccf/error.hpp"

namespace {

template <class T>
std::optional<T> opt(const CLI::Option* o, const T& value) {
  return o->count() > 0 ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cc-fractal: fractal experiments in step-2 Carnot groups"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  std::string scheme;
  int m = 1;
  double M = 2.0;
  double s = 2.5;
  int depth = 0;
  int heisenberg = 1;
  std::string input;
  std::string fixture;
  std::size_t samples = 0;
  double tau = 0.0;

  struct Opts {
    CLI::Option *seed, *out, *scheme, *m, *M, *s, *depth, *heis, *input, *fixture, *samples, *tau;
  };
  std::map<std::string, Opts> opts;

  for (const char* name : {"gen", "dims", "excise", "density", "calibrate", "verify"}) {
    CLI::App* sub = app.add_subcommand(name, std::string("Run ") + name);
    sub->add_option("--config", config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
    Opts o{};
    o.seed = sub->add_option("--seed", seed, "64-bit seed (required here or in the config)");
    o.out = sub->add_option("--out", out, "Output root (default: out)");
    o.scheme = sub->add_option("--scheme", scheme, "example1 | example2 | custom | moran | fixture");
    o.m = sub->add_option("--m", m, "Slab dimension m");
    o.M = sub->add_option("--M", M, "Example2 constant M");
    o.s = sub->add_option("--s", s, "Moran target dimension s");
    o.depth = sub->add_option("--depth", depth, "Construction depth");
    o.heis = sub->add_option("--heisenberg", heisenberg, "Use the Heisenberg group H^m");
    o.input = sub->add_option("--input", input, "Point cloud CSV to analyse instead of a generator");
    o.fixture = sub->add_option("--fixture", fixture,
                                "horizontal_segment | vertical_segment | unit_square");
    o.samples = sub->add_option("--samples", samples, "Sampled points written by gen");
    o.tau = sub->add_option("--tau", tau, "Tolerance for the dims sandwich");
    opts[name] = o;
  }

  std::string fixtures_dir;
  CLI::App* fix = app.add_subcommand("fixtures", "Write the bundled fixture CSVs");
  fix->add_option("--out", fixtures_dir, "Directory for the CSV files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : ccf::cli::kUsageError;
  }

  if (fix->parsed()) {
    try {
      return ccf::cli::cmd_fixtures(fixtures_dir, std::cout);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return ccf::cli::kBudgetExceeded;
    }
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const Opts& o = opts.at(command);
  ccf::cli::Overrides ov;
  ov.seed = opt(o.seed, seed);
  ov.out = opt(o.out, out);
  ov.scheme = opt(o.scheme, scheme);
  ov.m = opt(o.m, m);
  ov.M = opt(o.M, M);
  ov.s = opt(o.s, s);
  ov.depth = opt(o.depth, depth);
  ov.heisenberg = opt(o.heis, heisenberg);
  ov.input = opt(o.input, input);
  ov.fixture = opt(o.fixture, fixture);
  ov.samples = opt(o.samples, samples);
  ov.tau = opt(o.tau, tau);

  ccf::cli::ExperimentConfig cfg;
  try {
    const nlohmann::json doc =
        config_path.empty() ? nlohmann::json::object() : ccf::cli::load_json_file(config_path);
    cfg = ccf::cli::parse_config(doc, ov);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ccf::cli::kUsageError;
  }
  std::cout << std::unitbuf;
  return ccf::cli::run_command(command, cfg, std::cout, std::cerr);
}
