#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ccf/group.hpp"
#include "ccf/slab.hpp"

namespace ccf::cli {

enum ExitCode : int { kPass = 0, kDiagnosticFailure = 1, kUsageError = 2, kBudgetExceeded = 3 };

struct GeneratorConfig {
  std::string scheme = "example1";  // example1 | example2 | custom | moran | fixture
  std::string embedding = "heis_xt";
  int m = 1;
  double M = 2.0;
  double s = 2.5;
  int depth = 0;
  std::string fixture;  // horizontal_segment | vertical_segment | unit_square
  std::vector<fractal::CustomLevel> levels;
  std::size_t samples = 4096;
};

struct DiagnosticConfig {
  std::string kind;  // dims | excise | density | verify | calibrate
  nlohmann::json params = nlohmann::json::object();
};

struct ExperimentConfig {
  nlohmann::json spec_doc;  // as given, before defaults
  group::GroupSpec spec{1, 1, 0.5};
  GeneratorConfig generator;
  std::vector<DiagnosticConfig> diagnostics;
  std::vector<double> scales;  // empty means per-object default
  std::optional<std::uint64_t> seed;
  std::string output_dir = "out";
  std::optional<std::string> input;

  /// Normalized document with defaults filled in; the hash input.
  [[nodiscard]] nlohmann::json canonical() const;
  /// Parameters of the first diagnostic of this kind, or an empty object.
  [[nodiscard]] nlohmann::json diagnostic(const std::string& kind) const;
};

/// Command-line values that override the config file.
struct Overrides {
  std::optional<std::string> scheme;
  std::optional<int> m;
  std::optional<double> M;
  std::optional<double> s;
  std::optional<int> depth;
  std::optional<int> heisenberg;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> input;
  std::optional<std::string> fixture;
  std::optional<std::size_t> samples;
  std::optional<double> tau;
};

/// Throws InputError on anything malformed. A missing "spec" entry defaults to
/// {"heisenberg": m} for heis_xt slab schemes and {"heisenberg": 1} otherwise.
ExperimentConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {});

nlohmann::json load_json_file(const std::string& path);

fractal::Scheme scheme_of(const GeneratorConfig& g);
fractal::Embedding embedding_of(const GeneratorConfig& g);

}  // namespace ccf::cli
