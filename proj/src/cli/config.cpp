#include "ccf/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "ccf/error.hpp"
#include "ccf/spec_io.hpp"

namespace ccf::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kSchemes = {"example1", "example2", "custom", "moran", "fixture"};
const std::set<std::string> kFixtures = {"horizontal_segment", "vertical_segment", "unit_square"};
const std::set<std::string> kDiagnostics = {"dims", "excise", "density", "verify", "calibrate"};

bool is_slab_scheme(const std::string& scheme) {
  return scheme == "example1" || scheme == "example2" || scheme == "custom";
}

int get_int(const json& obj, const char* key, int fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw InputError(std::string("config: \"") + key + "\" must be an integer");
  return v.get<int>();
}

double get_double(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw InputError(std::string("config: \"") + key + "\" must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw InputError(std::string("config: \"") + key + "\" must be finite");
  return x;
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw InputError(std::string("config: \"") + key + "\" must be a string");
  return v.get<std::string>();
}

GeneratorConfig parse_generator(const json& doc) {
  if (!doc.is_object()) throw InputError("config: \"generator\" must be an object");
  GeneratorConfig g;
  g.scheme = get_string(doc, "scheme", g.scheme);
  if (!kSchemes.contains(g.scheme)) throw InputError("config: unknown scheme \"" + g.scheme + "\"");
  g.embedding = get_string(doc, "embedding", g.embedding);
  if (g.embedding != "heis_xt" && g.embedding != "plane_1m1") {
    throw InputError("config: embedding must be \"heis_xt\" or \"plane_1m1\"");
  }
  g.m = get_int(doc, "m", g.m);
  g.M = get_double(doc, "M", g.M);
  g.s = get_double(doc, "s", g.s);
  g.fixture = get_string(doc, "fixture", g.fixture);
  if (doc.contains("samples")) {
    const int n = get_int(doc, "samples", 0);
    if (n < 1) throw InputError("config: \"samples\" must be >= 1");
    g.samples = static_cast<std::size_t>(n);
  }
  if (doc.contains("levels")) {
    if (!doc["levels"].is_array()) throw InputError("config: \"levels\" must be an array of [N, lambda]");
    for (const json& lv : doc["levels"]) {
      if (!lv.is_array() || lv.size() != 2 || !lv[0].is_number_integer() || !lv[1].is_number()) {
        throw InputError("config: each level must be [N, lambda]");
      }
      g.levels.push_back({lv[0].get<long long>(), lv[1].get<double>()});
    }
  }
  int default_depth = 3;
  if (g.scheme == "example2") default_depth = 12;
  if (g.scheme == "moran") default_depth = 6;
  if (g.scheme == "custom") default_depth = static_cast<int>(g.levels.size());
  g.depth = get_int(doc, "depth", default_depth);
  return g;
}

void validate_generator(const GeneratorConfig& g) {
  if (g.m < 1) throw InputError("config: m must be >= 1");
  if (g.depth < 0) throw InputError("config: depth must be >= 0");
  if (g.scheme == "example2" && !(g.M > 0.0)) throw InputError("config: M must be > 0");
  if (g.scheme == "custom") {
    if (static_cast<int>(g.levels.size()) < g.depth) {
      throw InputError("config: custom scheme needs at least `depth` levels");
    }
    for (const auto& lv : g.levels) {
      if (lv.N < 1 || !(lv.lambda > 0.0) || !std::isfinite(lv.lambda)) {
        throw InputError("config: custom levels need N >= 1 and lambda > 0");
      }
    }
  }
  if (g.scheme == "moran" && g.depth < 1) throw InputError("config: moran depth must be >= 1");
  if (g.scheme == "fixture" && !kFixtures.contains(g.fixture)) {
    throw InputError("config: fixture must be one of horizontal_segment, vertical_segment, unit_square");
  }
  if (g.embedding == "plane_1m1" && g.m != 1) {
    throw InputError("config: plane_1m1 embedding requires m = 1");
  }
}

json default_spec_doc(const GeneratorConfig& g) {
  if (is_slab_scheme(g.scheme) && g.embedding == "heis_xt") return {{"heisenberg", g.m}};
  return {{"heisenberg", 1}};
}

json generator_json(const GeneratorConfig& g) {
  json out = {{"scheme", g.scheme}, {"depth", g.depth}, {"samples", g.samples}};
  if (is_slab_scheme(g.scheme)) {
    out["embedding"] = g.embedding;
    out["m"] = g.m;
  }
  if (g.scheme == "example2") out["M"] = g.M;
  if (g.scheme == "moran") out["s"] = g.s;
  if (g.scheme == "fixture") out["fixture"] = g.fixture;
  if (g.scheme == "custom") {
    json levels = json::array();
    for (int k = 0; k < g.depth; ++k) levels.push_back({g.levels[k].N, g.levels[k].lambda});
    out["levels"] = levels;
  }
  return out;
}

}  // namespace

json ExperimentConfig::canonical() const {
  json diags = json::array();
  for (const auto& d : diagnostics) {
    json entry = d.params;
    entry["kind"] = d.kind;
    diags.push_back(entry);
  }
  json out = {{"spec", group::spec_to_json(spec)},
              {"generator", generator_json(generator)},
              {"diagnostics", diags},
              {"scales", scales}};
  if (seed) out["seed"] = *seed;
  if (input) out["input"] = *input;
  return out;
}

json ExperimentConfig::diagnostic(const std::string& kind) const {
  for (const auto& d : diagnostics) {
    if (d.kind == kind) return d.params;
  }
  return json::object();
}

ExperimentConfig parse_config(const json& doc, const Overrides& ov) {
  if (!doc.is_object()) throw InputError("config: top level must be a JSON object");
  ExperimentConfig cfg;

  json gen = doc.value("generator", json::object());
  if (!gen.is_object()) throw InputError("config: \"generator\" must be an object");
  if (ov.scheme) gen["scheme"] = *ov.scheme;
  if (ov.m) gen["m"] = *ov.m;
  if (ov.M) gen["M"] = *ov.M;
  if (ov.s) gen["s"] = *ov.s;
  if (ov.depth) gen["depth"] = *ov.depth;
  if (ov.samples) gen["samples"] = *ov.samples;
  if (ov.fixture) {
    gen["fixture"] = *ov.fixture;
    if (!ov.scheme) gen["scheme"] = "fixture";
  }
  cfg.generator = parse_generator(gen);
  const GeneratorConfig& g = cfg.generator;
  validate_generator(g);

  cfg.spec_doc = doc.contains("spec") ? doc["spec"] : default_spec_doc(g);
  if (ov.heisenberg) {
    json spec_doc = {{"heisenberg", *ov.heisenberg}};
    if (cfg.spec_doc.is_object() && cfg.spec_doc.contains("c")) spec_doc["c"] = cfg.spec_doc["c"];
    cfg.spec_doc = spec_doc;
  }
  cfg.spec = group::spec_from_json(cfg.spec_doc);

  if (doc.contains("diagnostics")) {
    if (!doc["diagnostics"].is_array()) throw InputError("config: \"diagnostics\" must be an array");
    for (const json& d : doc["diagnostics"]) {
      if (!d.is_object() || !d.contains("kind") || !d["kind"].is_string()) {
        throw InputError("config: each diagnostic needs a string \"kind\"");
      }
      DiagnosticConfig dc;
      dc.kind = d["kind"].get<std::string>();
      if (!kDiagnostics.contains(dc.kind)) throw InputError("config: unknown diagnostic \"" + dc.kind + "\"");
      dc.params = d;
      dc.params.erase("kind");
      cfg.diagnostics.push_back(std::move(dc));
    }
  }
  if (ov.tau) {
    if (!(*ov.tau >= 0.0)) throw InputError("--tau must be >= 0");
    bool found = false;
    for (auto& d : cfg.diagnostics) {
      if (d.kind == "dims") {
        d.params["tau"] = *ov.tau;
        found = true;
      }
    }
    if (!found) cfg.diagnostics.push_back({"dims", {{"tau", *ov.tau}}});
  }

  if (doc.contains("scales")) {
    const json& sc = doc["scales"];
    if (sc.is_array()) {
      for (const json& r : sc) {
        if (!r.is_number() || !(r.get<double>() > 0.0)) {
          throw InputError("config: scales must be positive numbers");
        }
        cfg.scales.push_back(r.get<double>());
      }
    } else if (sc.is_object() && sc.contains("dyadic")) {
      const json& range = sc["dyadic"];
      if (!range.is_array() || range.size() != 2 || !range[0].is_number_integer() ||
          !range[1].is_number_integer()) {
        throw InputError("config: \"dyadic\" must be [j_min, j_max]");
      }
      const int lo = range[0].get<int>();
      const int hi = range[1].get<int>();
      if (lo > hi || hi - lo > 60) throw InputError("config: bad dyadic range");
      for (int j = lo; j <= hi; ++j) cfg.scales.push_back(std::ldexp(1.0, -j));
    } else {
      throw InputError("config: \"scales\" must be a list or {\"dyadic\": [j_min, j_max]}");
    }
    for (std::size_t k = 1; k < cfg.scales.size(); ++k) {
      if (!(cfg.scales[k] < cfg.scales[k - 1])) {
        throw InputError("config: scales must be strictly decreasing");
      }
    }
  }

  if (doc.contains("seed")) {
    const json& s = doc["seed"];
    if (s.is_number_unsigned()) {
      cfg.seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<long long>() >= 0) {
      cfg.seed = static_cast<std::uint64_t>(s.get<long long>());
    } else {
      throw InputError("config: \"seed\" must be a non-negative integer");
    }
  }
  if (ov.seed) cfg.seed = *ov.seed;

  cfg.output_dir = get_string(doc, "output_dir", cfg.output_dir);
  if (ov.out) cfg.output_dir = *ov.out;
  if (doc.contains("input")) cfg.input = get_string(doc, "input", "");
  if (ov.input) cfg.input = *ov.input;
  return cfg;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config \"" + path + "\": " + e.what());
  }
}

fractal::Scheme scheme_of(const GeneratorConfig& g) {
  if (g.scheme == "example1") return fractal::Example1{g.m};
  if (g.scheme == "example2") return fractal::Example2{g.M, g.m};
  if (g.scheme == "custom") {
    fractal::Custom c{g.m, {}};
    c.levels.assign(g.levels.begin(), g.levels.begin() + g.depth);
    return c;
  }
  throw InputError("scheme \"" + g.scheme + "\" is not a slab construction");
}

fractal::Embedding embedding_of(const GeneratorConfig& g) {
  return g.embedding == "plane_1m1" ? fractal::Embedding::plane_1m1 : fractal::Embedding::heis_xt;
}

}  // namespace ccf::cli
