#include "ccf/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "ccf/boxcount.hpp"
#include "ccf/calibrate.hpp"
#include "ccf/error.hpp"
#include "ccf/fixtures.hpp"
#include "ccf/moran.hpp"
#include "ccf/output.hpp"
#include "ccf/pieces.hpp"
#include "ccf/report.hpp"
#include "ccf/rng.hpp"
#include "ccf/sampling.hpp"
#include "ccf/slab.hpp"
#include "ccf/spec_io.hpp"

namespace ccf::cli {

using nlohmann::json;
using dimlab::PieceSet;
using fractal::PointCloud;

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::uint64_t require_seed(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw InputError("a seed is required (--seed or \"seed\" in the config)");
  return *cfg.seed;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open input \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool is_slab(const GeneratorConfig& g) {
  return g.scheme == "example1" || g.scheme == "example2" || g.scheme == "custom";
}

/// The object a diagnostic runs on: a slab construction, Moran cylinders, or a point cloud.
struct Generated {
  std::string kind;  // slab | moran | cloud
  std::string description;
  std::optional<fractal::Construction> construction;
  std::optional<fractal::MoranSet> moran;
  std::optional<PointCloud> cloud;
  double nominal_s = 1.0;  // normalizing exponent for ratio diagnostics
};

Generated generate(const ExperimentConfig& cfg, std::size_t budget) {
  const GeneratorConfig& g = cfg.generator;
  Generated out;
  if (cfg.input) {
    const std::string text = read_file(*cfg.input);
    std::istringstream in(text);
    out.cloud = fractal::read_csv(in);
    if (out.cloud->dim != cfg.spec.dim()) {
      throw InputError("input has " + std::to_string(out.cloud->dim) +
                       " coordinates, group has " + std::to_string(cfg.spec.dim()));
    }
    out.kind = "cloud";
    out.description = "input " + *cfg.input;
    out.nominal_s = cfg.spec.m1();
    return out;
  }
  if (is_slab(g)) {
    const fractal::Scheme scheme = scheme_of(g);
    const fractal::Embedding emb = embedding_of(g);
    fractal::check_embedding(cfg.spec, emb, g.m);
    out.construction = fractal::build_construction(emb, scheme, g.depth, budget);
    out.kind = "slab";
    out.description = fractal::scheme_name(scheme) + " depth " + std::to_string(g.depth);
    out.nominal_s = g.m;
    return out;
  }
  if (g.scheme == "moran") {
    fractal::EnumerateOptions opts;
    opts.budget = budget;
    out.moran = fractal::enumerate_cylinders(cfg.spec, g.s, g.depth, opts);
    out.kind = "moran";
    out.description = "moran s=" + fmt(g.s) + " depth " + std::to_string(g.depth);
    out.nominal_s = g.s;
    return out;
  }
  if (cfg.spec != group::GroupSpec::heisenberg(1, cfg.spec.c())) {
    throw InputError("fixtures live in H^1; the group must be {\"heisenberg\": 1}");
  }
  for (auto& f : dimlab::bundled_fixtures()) {
    if (f.name == g.fixture) {
      out.cloud = std::move(f.cloud);
      out.nominal_s = f.dim_e;
    }
  }
  if (!out.cloud) throw InputError("unknown fixture \"" + g.fixture + "\"");
  out.kind = "cloud";
  out.description = "fixture " + g.fixture;
  return out;
}

json canonical_with_input(const ExperimentConfig& cfg) {
  json doc = cfg.canonical();
  if (cfg.input) doc["input_hash"] = hex64(fnv1a64(read_file(*cfg.input)));
  return doc;
}

json meta_for(const ExperimentConfig& cfg) {
  json meta = {{"scheme", cfg.generator.scheme},
               {"depth", cfg.generator.depth},
               {"spec", group::spec_to_json(cfg.spec)}};
  if (cfg.seed) meta["seed"] = *cfg.seed;
  return meta;
}

int publish(ArtifactDir& dir, const ExperimentConfig& cfg, std::ostream& log) {
  if (dir.commit(meta_for(cfg))) {
    log << "wrote " << dir.path().string() << "\n";
  } else {
    log << "exists " << dir.path().string() << " (left unchanged)\n";
  }
  return 0;
}

std::string csv_of(const PointCloud& cloud) {
  std::ostringstream out;
  fractal::write_csv(out, cloud);
  return out.str();
}

std::string slabs_json(const fractal::Construction& con) {
  std::string out;
  out.reserve(128 + con.slabs.size() * 96);
  out += "{\n  \"scheme\": \"" + fractal::scheme_name(con.scheme) + "\",\n";
  out += "  \"embedding\": \"" + std::string(fractal::to_string(con.embedding)) + "\",\n";
  out += "  \"m\": " + std::to_string(con.m) + ",\n";
  out += "  \"depth\": " + std::to_string(con.depth) + ",\n";
  out += "  \"count\": " + std::to_string(con.slabs.size()) + ",\n";
  out += "  \"levels\": [";
  for (std::size_t k = 0; k < con.levels.size(); ++k) {
    const auto& lv = con.levels[k];
    out += k ? ",\n    " : "\n    ";
    out += "{\"k\": " + std::to_string(lv.k) + ", \"N\": " + std::to_string(lv.N) +
           ", \"lambda\": " + fmt(lv.lambda) + ", \"h\": " + fmt(lv.h) + ", \"v\": " + fmt(lv.v) + "}";
  }
  out += "\n  ],\n  \"slabs\": [";
  for (std::size_t k = 0; k < con.slabs.size(); ++k) {
    const auto& s = con.slabs[k];
    out += k ? ",\n    " : "\n    ";
    out += "{\"x\": [";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i) out += ", ";
      out += "[" + fmt(s.x[i].lo) + ", " + fmt(s.x[i].hi) + "]";
    }
    out += "], \"t\": [" + fmt(s.t.lo) + ", " + fmt(s.t.hi) + "], \"label\": \"" +
           fractal::to_string(s.label) + "\"}";
  }
  out += "\n  ]\n}\n";
  return out;
}

std::string vec_json(std::span<const double> v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out + "]";
}

std::string cylinders_json(const fractal::MoranSet& set) {
  std::string out;
  out.reserve(256 + set.size() * (64 + 24 * set.depth()));
  out += "{\n  \"s\": " + fmt(set.s()) + ",\n";
  out += "  \"depth\": " + std::to_string(set.depth()) + ",\n";
  out += "  \"count\": " + std::to_string(set.size()) + ",\n";
  out += "  \"branches\": [";
  for (std::size_t i = 0; i < set.branches().size(); ++i) {
    out += (i ? ", " : "") + std::to_string(set.branches()[i]);
  }
  out += "],\n";
  const auto& att = set.attractor();
  out += "  \"attractor\": {\"lo\": " + vec_json(att.box.lo) + ", \"hi\": " + vec_json(att.box.hi) +
         ", \"diam_inf\": " + fmt(att.diam_inf) + "},\n";
  out += "  \"diam_inf_bound\": " + fmt(set.diam_inf_bound()) + ",\n";
  out += "  \"cylinders\": [";
  for (std::size_t k = 0; k < set.size(); ++k) {
    out += k ? ",\n    " : "\n    ";
    out += "{\"address\": [";
    const auto addr = set.address(k);
    for (std::size_t i = 0; i < addr.size(); ++i) out += (i ? ", " : "") + std::to_string(addr[i]);
    out += "], \"lo\": " + vec_json(set.lo(k)) + ", \"hi\": " + vec_json(set.hi(k)) + "}";
  }
  out += "\n  ]\n}\n";
  return out;
}

// ---- ratio diagnostics (excise, density) ----

struct Probe {
  PieceSet pieces;
  std::vector<group::Vec> points;  // in the pieces' frame
};

Probe make_probe(const ExperimentConfig& cfg, const Generated& gen, std::size_t count,
                 std::uint64_t seed) {
  Probe probe;
  if (gen.kind == "slab") {
    const auto& con = *gen.construction;
    probe.pieces = dimlab::pieces_from(con, cfg.spec);
    const PointCloud cloud = fractal::sample_set(con, cfg.spec, count, seed);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      probe.points.push_back(fractal::plane_point(cfg.spec, con.embedding, con.m, cloud.point(i)));
    }
  } else if (gen.kind == "moran") {
    probe.pieces = dimlab::pieces_from(*gen.moran);
    const PointCloud cloud = fractal::sample_set(*gen.moran, count, seed);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const auto p = cloud.point(i);
      probe.points.emplace_back(p.begin(), p.end());
    }
  } else {
    const PointCloud& cloud = *gen.cloud;
    if (cloud.size() == 0) throw InputError("point cloud is empty");
    probe.pieces = dimlab::pieces_from(cloud, cfg.spec);
    CounterRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
      const auto p = cloud.point(static_cast<std::size_t>(rng.below(cloud.size())));
      probe.points.emplace_back(p.begin(), p.end());
    }
  }
  return probe;
}

struct RadiusGroup {
  std::string label;
  double r_lo = 0.0;
  double r_hi = 0.0;
  std::vector<double> radii;  // one per point
};

std::vector<RadiusGroup> fixed_groups(const std::vector<double>& rs, std::size_t points) {
  std::vector<RadiusGroup> out;
  for (double r : rs) {
    if (!(r > 0.0)) throw InputError("radii must be positive");
    out.push_back({"r=" + fmt(r), r, r, std::vector<double>(points, r)});
  }
  return out;
}

/// Example1: r_k = 4 h_{k+1}, k = 1..depth-1. Example2: r uniform in
/// [sqrt(m) 2^(1-k), sqrt(m) 2^(2-k)) for 68 M m < 2^k, k <= depth - 1.
std::vector<RadiusGroup> native_groups(const ExperimentConfig& cfg, const Generated& gen,
                                       std::size_t points, std::uint64_t seed) {
  const GeneratorConfig& g = cfg.generator;
  std::vector<RadiusGroup> out;
  if (g.scheme == "example1") {
    const auto& levels = gen.construction->levels;
    for (int k = 1; k + 1 <= g.depth; ++k) {
      const double r = 4.0 * levels[static_cast<std::size_t>(k + 1)].h;
      out.push_back({"k=" + std::to_string(k), r, r, std::vector<double>(points, r)});
    }
  } else if (g.scheme == "example2") {
    const double threshold = 68.0 * g.M * g.m;
    const double root_m = std::sqrt(static_cast<double>(g.m));
    const CounterRng base = CounterRng(seed).split(0x7261646969ULL);
    for (int k = 1; k + 1 <= g.depth; ++k) {
      if (!(std::ldexp(1.0, k) > threshold)) continue;
      const double lo = root_m * std::ldexp(1.0, 1 - k);
      const double hi = root_m * std::ldexp(1.0, 2 - k);
      RadiusGroup grp{"k=" + std::to_string(k), lo, hi, {}};
      CounterRng rng = base.split(static_cast<std::uint64_t>(k));
      for (std::size_t i = 0; i < points; ++i) grp.radii.push_back(rng.uniform(lo, hi));
      out.push_back(std::move(grp));
    }
  } else {
    throw InputError("native radii are defined for example1 and example2 only");
  }
  if (out.empty()) throw InputError("depth too shallow: no native radii");
  return out;
}

std::vector<RadiusGroup> radius_groups(const ExperimentConfig& cfg, const Generated& gen,
                                       const json& params, std::size_t points, std::uint64_t seed) {
  const bool has_native = gen.kind == "slab" &&
                          (cfg.generator.scheme == "example1" || cfg.generator.scheme == "example2");
  if (params.contains("radii")) {
    const json& radii = params["radii"];
    if (radii.is_string() && radii.get<std::string>() == "native") {
      return native_groups(cfg, gen, points, seed);
    }
    if (!radii.is_array()) throw InputError("\"radii\" must be \"native\" or a list of numbers");
    std::vector<double> rs;
    for (const json& r : radii) {
      if (!r.is_number()) throw InputError("\"radii\" entries must be numbers");
      rs.push_back(r.get<double>());
    }
    return fixed_groups(rs, points);
  }
  if (!cfg.scales.empty()) return fixed_groups(cfg.scales, points);
  if (has_native) return native_groups(cfg, gen, points, seed);
  return fixed_groups(dimlab::dyadic_scales(2, 5), points);
}

double param_double(const json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number()) throw InputError(std::string("\"") + key + "\" must be a number");
  return params[key].get<double>();
}

std::string param_string(const json& params, const char* key, const std::string& fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_string()) throw InputError(std::string("\"") + key + "\" must be a string");
  return params[key].get<std::string>();
}

std::size_t param_count(const json& params, const char* key, std::size_t fallback) {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_number_integer() || params[key].get<long long>() < 1) {
    throw InputError(std::string("\"") + key + "\" must be a positive integer");
  }
  return params[key].get<std::size_t>();
}

double quantile_param(const json& params, double fallback) {
  const double q = param_double(params, "quantile", fallback);
  if (!(q > 0.0 && q <= 1.0)) throw InputError("\"quantile\" must lie in (0, 1]");
  return q;
}

/// Shared tail of excise and density: group summaries, CSV, SVG, pass flag.
struct RatioTable {
  std::vector<RadiusGroup> groups;
  std::vector<std::vector<double>> ratios;  // [group][point]
};

template <class Eval>
RatioTable evaluate(const Probe& probe, std::vector<RadiusGroup> groups, Eval eval) {
  RatioTable table;
  table.groups = std::move(groups);
  const std::size_t n = probe.points.size();
  for (const auto& grp : table.groups) {
    std::vector<double> ratios(n, 0.0);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::size_t i = 0; i < n; ++i) ratios[i] = eval(probe.points[i], grp.radii[i]);
    table.ratios.push_back(std::move(ratios));
  }
  return table;
}

template <class Accept>
json summarize(const RatioTable& table, double quantile, Accept accept, bool& pass) {
  json groups = json::array();
  pass = true;
  for (std::size_t g = 0; g < table.groups.size(); ++g) {
    std::vector<double> sorted = table.ratios[g];
    std::size_t passing = 0;
    for (double v : sorted) passing += accept(v) ? 1 : 0;
    std::sort(sorted.begin(), sorted.end());
    const double fraction = sorted.empty() ? 0.0 : static_cast<double>(passing) / sorted.size();
    const bool ok = !sorted.empty() && fraction >= quantile;
    pass = pass && ok;
    groups.push_back({{"group", table.groups[g].label},
                      {"r_lo", table.groups[g].r_lo},
                      {"r_hi", table.groups[g].r_hi},
                      {"points", sorted.size()},
                      {"passing", passing},
                      {"fraction", fraction},
                      {"min", sorted.empty() ? 0.0 : sorted.front()},
                      {"median", sorted.empty() ? 0.0 : sorted[sorted.size() / 2]},
                      {"max", sorted.empty() ? 0.0 : sorted.back()},
                      {"pass", ok}});
  }
  return groups;
}

std::string table_csv(const RatioTable& table) {
  std::string out = "r,ratio,group,point\n";
  for (std::size_t g = 0; g < table.groups.size(); ++g) {
    for (std::size_t i = 0; i < table.ratios[g].size(); ++i) {
      out += fmt(table.groups[g].radii[i]) + "," + fmt(table.ratios[g][i]) + "," +
             table.groups[g].label + "," + std::to_string(i) + "\n";
    }
  }
  return out;
}

std::string table_svg(const std::string& title, const RatioTable& table,
                      const std::vector<std::pair<std::string, double>>& bounds) {
  dimlab::SvgSeries pts{"ratio", "#1f77b4", {}, false, 0.0, 0.0};
  double xmin = std::numeric_limits<double>::infinity();
  double xmax = -xmin;
  for (std::size_t g = 0; g < table.groups.size(); ++g) {
    for (std::size_t i = 0; i < table.ratios[g].size(); ++i) {
      const double x = std::log2(1.0 / table.groups[g].radii[i]);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      pts.points.emplace_back(x, table.ratios[g][i]);
    }
  }
  std::vector<dimlab::SvgSeries> series{pts};
  for (const auto& [label, value] : bounds) {
    if (!std::isfinite(value)) continue;
    series.push_back({label, "#d62728", {{xmin, value}, {xmax, value}}, true, 0.0, value});
  }
  return dimlab::svg_plot(title, "log2(1/r)", "ratio", series);
}

dimlab::PlaneDistance plane_distance_param(const json& params) {
  const std::string d = param_string(params, "distance", "in_plane");
  if (d == "in_plane") return dimlab::PlaneDistance::in_plane;
  if (d == "ambient") return dimlab::PlaneDistance::ambient;
  throw InputError("\"distance\" must be \"in_plane\" or \"ambient\"");
}

dimlab::ExcisionSpec excision_param(const ExperimentConfig& cfg, const json& params) {
  const std::string def_mode = cfg.generator.scheme == "example2" ? "quadratic_m" : "linear_delta";
  const std::string mode = param_string(params, "mode", def_mode);
  if (mode == "linear_delta") return dimlab::ExcisionSpec::linear_delta(param_double(params, "param", 0.125));
  if (mode == "quadratic_m") return dimlab::ExcisionSpec::quadratic_m(param_double(params, "param", cfg.generator.M));
  if (mode == "power_eps") return dimlab::ExcisionSpec::power_eps(param_double(params, "param", 0.5));
  throw InputError("\"mode\" must be linear_delta, quadratic_m or power_eps");
}

double default_excision_bound(const ExperimentConfig& cfg, const Generated& gen) {
  const int m = cfg.generator.m;
  if (gen.kind == "slab" && cfg.generator.scheme == "example1") return std::pow(0.125, m) - 0.02;
  if (gen.kind == "slab" && cfg.generator.scheme == "example2") return std::pow(1.0 / 32.0, m) - 0.01;
  return 0.001;
}

}  // namespace

int cmd_gen(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = require_seed(cfg);
  if (cfg.input) throw InputError("gen does not take an input file");
  const Generated gen = generate(cfg, fractal::budget_from_env());
  ArtifactDir dir(cfg.output_dir, "gen", canonical_with_input(cfg));
  const std::size_t samples = cfg.generator.samples;
  if (gen.kind == "slab") {
    dir.add("slabs.json", slabs_json(*gen.construction));
    dir.add("points.csv", csv_of(fractal::sample_set(*gen.construction, cfg.spec, samples, seed)));
    log << gen.description << ": " << gen.construction->slabs.size() << " slabs\n";
  } else if (gen.kind == "moran") {
    dir.add("cylinders.json", cylinders_json(*gen.moran));
    dir.add("points.csv", csv_of(fractal::sample_set(*gen.moran, samples, seed)));
    log << gen.description << ": " << gen.moran->size() << " cylinders\n";
  } else {
    dir.add("points.csv", csv_of(*gen.cloud));
    log << gen.description << ": " << gen.cloud->size() << " points\n";
  }
  return publish(dir, cfg, log);
}

int cmd_dims(const ExperimentConfig& cfg, std::ostream& log) {
  require_seed(cfg);
  const json params = cfg.diagnostic("dims");
  const double tau = param_double(params, "tau", dimlab::kDefaultTau);
  const std::size_t budget = fractal::budget_from_env();
  const GeneratorConfig& g = cfg.generator;

  dimlab::CloudProvider provider;
  std::vector<double> scales = cfg.scales;
  if (!cfg.input && g.scheme == "moran") {
    if (scales.empty()) scales = dimlab::dyadic_scales(2, g.depth);
    const double finest = scales.back();
    const int depth = static_cast<int>(std::ceil(-std::log2(finest) - 1e-9));
    if (fractal::cylinder_count(cfg.spec, g.s, depth) > budget) {
      throw ResourceError("moran r-net at depth " + std::to_string(depth) + " exceeds the budget");
    }
    provider = dimlab::moran_rnet(cfg.spec, g.s, budget);
  } else {
    const Generated gen = generate(cfg, budget);
    if (gen.kind == "slab") {
      const auto& con = *gen.construction;
      PointCloud centers;
      centers.dim = cfg.spec.dim();
      const double w = 1.0 / static_cast<double>(con.slabs.size());
      for (const auto& s : con.slabs) {
        std::vector<double> x;
        for (const auto& iv : s.x) x.push_back(0.5 * (iv.lo + iv.hi));
        centers.push(fractal::embed_point(cfg.spec, con.embedding, x, 0.5 * (s.t.lo + s.t.hi)), w);
      }
      if (scales.empty()) {
        scales = dimlab::scales_above_feature(std::max(std::sqrt(double(con.m)) * con.h(), con.v()));
      }
      provider = dimlab::fixed_cloud(std::move(centers), gen.description + " slab centers");
    } else {
      if (scales.empty()) scales = dimlab::dyadic_scales(2, 8);
      provider = dimlab::fixed_cloud(*gen.cloud, gen.description);
    }
  }
  if (scales.size() < 3) throw InputError("dims needs at least 3 scales");

  const dimlab::ComparisonReport rep =
      dimlab::dimension_comparison_report(provider, cfg.spec, scales, tau);
  ArtifactDir dir(cfg.output_dir, "dims", canonical_with_input(cfg));
  std::ostringstream csv;
  dimlab::write_report_csv(csv, rep);
  dir.add("dims.csv", csv.str());
  dir.add("dims.json", dump_json(dimlab::report_json(rep)));
  dir.add("dims.svg", dimlab::report_svg(rep));
  publish(dir, cfg, log);
  log << rep.description << ": dim_E " << fmt(rep.dim_e.slope) << ", dim_G " << fmt(rep.dim_g.slope)
      << ", beta range [" << fmt(rep.beta_minus) << ", " << fmt(rep.beta_plus) << "], tau "
      << fmt(tau) << ": " << (rep.pass ? "pass" : "FAIL") << "\n";
  return rep.pass ? kPass : kDiagnosticFailure;
}

int cmd_excise(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = require_seed(cfg);
  const json params = cfg.diagnostic("excise");
  const Generated gen = generate(cfg, fractal::budget_from_env());

  const dimlab::ExcisionSpec exc = excision_param(cfg, params);
  const dimlab::PlaneDistance distance = plane_distance_param(params);
  const double s = param_double(params, "s", gen.nominal_s);
  const double bound = param_double(params, "bound", default_excision_bound(cfg, gen));
  const std::string direction = param_string(params, "direction", ">=");
  if (direction != ">=" && direction != "<=") throw InputError("\"direction\" must be \">=\" or \"<=\"");
  const double quantile =
      quantile_param(params, gen.kind == "moran" && !params.contains("bound") ? 0.5 : 0.9);
  const std::size_t points = param_count(params, "points", 200);

  const Probe probe = make_probe(cfg, gen, points, seed);
  const RatioTable table =
      evaluate(probe, radius_groups(cfg, gen, params, probe.points.size(), seed),
               [&](const group::Vec& p, double r) {
                 return dimlab::excision_ratio(probe.pieces, p, r, s, exc, distance);
               });
  bool pass = false;
  const json groups = summarize(
      table, quantile, [&](double v) { return direction == ">=" ? v >= bound : v <= bound; }, pass);

  json summary = {{"object", gen.description},
                  {"excision", exc.describe()},
                  {"distance", distance == dimlab::PlaneDistance::in_plane ? "in_plane" : "ambient"},
                  {"s", s},
                  {"bound", bound},
                  {"direction", direction},
                  {"quantile", quantile},
                  {"groups", groups},
                  {"pass", pass}};
  ArtifactDir dir(cfg.output_dir, "excise", canonical_with_input(cfg));
  dir.add("excise.csv", table_csv(table));
  dir.add("excise.json", dump_json(summary));
  dir.add("excise.svg", table_svg("excision ratio, " + exc.describe(), table, {{"bound", bound}}));
  publish(dir, cfg, log);
  for (const auto& grp : groups) {
    log << "  " << grp["group"].get<std::string>() << ": " << grp["passing"].get<std::size_t>() << "/"
        << grp["points"].get<std::size_t>() << " with ratio " << direction << " " << fmt(bound)
        << " (min " << fmt(grp["min"].get<double>()) << ")\n";
  }
  log << gen.description << ": excision " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kPass : kDiagnosticFailure;
}

int cmd_density(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = require_seed(cfg);
  const json params = cfg.diagnostic("density");
  const Generated gen = generate(cfg, fractal::budget_from_env());

  const std::string metric_name = param_string(params, "metric", "homogeneous");
  dimlab::Metric metric;
  if (metric_name == "homogeneous") {
    metric = dimlab::Metric::homogeneous;
  } else if (metric_name == "euclidean") {
    metric = dimlab::Metric::euclidean;
  } else {
    throw InputError("\"metric\" must be \"euclidean\" or \"homogeneous\"");
  }
  const double default_s = metric == dimlab::Metric::homogeneous && gen.kind == "moran"
                               ? 2.0 * gen.nominal_s - cfg.spec.m1()
                               : gen.nominal_s;
  const double s = param_double(params, "s", default_s);
  const double lower = param_double(params, "lower", 1e-3);
  const double upper = param_double(params, "upper", 1e3);
  if (!(lower <= upper)) throw InputError("\"lower\" must not exceed \"upper\"");
  const double quantile = quantile_param(params, 0.9);
  const std::size_t points = param_count(params, "points", 200);

  const Probe probe = make_probe(cfg, gen, points, seed);
  const RatioTable table =
      evaluate(probe, radius_groups(cfg, gen, params, probe.points.size(), seed),
               [&](const group::Vec& p, double r) {
                 return dimlab::density_ratio(probe.pieces, p, r, s, metric);
               });
  bool pass = false;
  const json groups =
      summarize(table, quantile, [&](double v) { return v >= lower && v <= upper; }, pass);

  json summary = {{"object", gen.description}, {"metric", metric_name}, {"s", s},
                  {"lower", lower},            {"upper", upper},        {"quantile", quantile},
                  {"groups", groups},          {"pass", pass}};
  ArtifactDir dir(cfg.output_dir, "density", canonical_with_input(cfg));
  dir.add("density.csv", table_csv(table));
  dir.add("density.json", dump_json(summary));
  dir.add("density.svg", table_svg("density ratio, " + metric_name + " balls", table,
                                   {{"lower", lower}, {"upper", upper}}));
  publish(dir, cfg, log);
  log << gen.description << ": density " << (pass ? "pass" : "FAIL") << "\n";
  return pass ? kPass : kDiagnosticFailure;
}

int cmd_calibrate(const ExperimentConfig& cfg, std::ostream& log) {
  const std::uint64_t seed = require_seed(cfg);
  const json params = cfg.diagnostic("calibrate");
  const std::size_t samples = param_count(params, "samples", group::kDefaultCalibrationSamples);
  const double radius = param_double(params, "radius", group::kDefaultCalibrationRadius);

  const group::Calibration cal = group::calibrate_metric_constant(cfg.spec, samples, radius, seed);
  const group::GroupSpec calibrated = cfg.spec.with_metric_constant(cal.c);
  const group::TripleSample fresh =
      group::sample_triples(cfg.spec.dim(), samples, radius, CounterRng(seed).split(1).next_u64());
  const std::size_t revalidation = group::count_triangle_violations(calibrated, fresh);
  const group::ComparisonConstant cmp =
      group::estimate_comparison_constant(calibrated, radius, samples, CounterRng(seed).split(2).next_u64());

  json spec_doc = group::spec_to_json(calibrated);
  json out = {{"c", cal.c},
              {"violations", cal.violations},
              {"samples", cal.samples},
              {"radius", radius},
              {"revalidation", {{"samples", fresh.size()}, {"violations", revalidation}}},
              {"comparison_constant",
               {{"value", cmp.value},
                {"lower_ratio", cmp.lower_ratio},
                {"upper_ratio", cmp.upper_ratio},
                {"samples", cmp.samples}}},
              {"spec", spec_doc}};
  ArtifactDir dir(cfg.output_dir, "calibrate", canonical_with_input(cfg));
  dir.add("calibrate.json", dump_json(out));
  publish(dir, cfg, log);
  const bool pass = cal.violations == 0 && revalidation == 0;
  log << "c = " << fmt(cal.c) << ", violations " << cal.violations << ", revalidation "
      << revalidation << ", c_R ~ " << fmt(cmp.value) << "\n";
  return pass ? kPass : kDiagnosticFailure;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& log) {
  require_seed(cfg);
  const Generated gen = generate(cfg, fractal::budget_from_env());
  json checks = json::array();
  bool pass = true;
  auto check = [&](const std::string& name, bool ok) {
    checks.push_back({{"check", name}, {"pass", ok}});
    log << "  " << name << ": " << (ok ? "ok" : "FAIL") << "\n";
    pass = pass && ok;
  };
  if (gen.kind == "slab") {
    const auto& con = *gen.construction;
    check("slab count", con.slabs.size() == fractal::construction_count(con.scheme, con.depth));
    const std::vector<fractal::Interval> face(static_cast<std::size_t>(con.m), {0.0, 1.0});
    check("x-faces tile the unit cube", fractal::covers_x_face(con.slabs, face));
    const std::size_t family =
        con.depth == 0 ? con.slabs.size()
                       : static_cast<std::size_t>(std::llround(std::pow(2.0 * con.levels.back().N, con.m)));
    bool disjoint = true;
    for (std::size_t k = 0; k + family <= con.slabs.size(); k += family) {
      disjoint = disjoint && fractal::same_type_faces_disjoint(
                                 std::span<const fractal::Slab>(con.slabs).subspan(k, family));
    }
    check("same-type siblings share no face", disjoint);
  } else if (gen.kind == "moran") {
    const auto& set = *gen.moran;
    check("cylinder count", set.size() == fractal::cylinder_count(cfg.spec, set.s(), set.depth()));
    bool inside = true;
    for (std::size_t k = 0; k < set.size(); ++k) inside = inside && set.attractor().box.contains(set.box(k), 1e-12);
    check("cylinders inside attractor box", inside);
  } else {
    bool finite = true;
    for (double x : gen.cloud->coords) finite = finite && std::isfinite(x);
    check("finite coordinates", finite);
  }
  ArtifactDir dir(cfg.output_dir, "verify", canonical_with_input(cfg));
  dir.add("verify.json", dump_json({{"object", gen.description}, {"checks", checks}, {"pass", pass}}));
  publish(dir, cfg, log);
  return pass ? kPass : kDiagnosticFailure;
}

int cmd_fixtures(const std::filesystem::path& dir, std::ostream& log) {
  for (const auto& f : dimlab::bundled_fixtures()) {
    const auto path = dir / (f.name + ".csv");
    write_file_atomic(path, csv_of(f.cloud));
    log << "wrote " << path.string() << "\n";
  }
  return kPass;
}

int run_command(const std::string& command, const ExperimentConfig& cfg, std::ostream& log,
                std::ostream& err) {
  try {
    if (command == "gen") return cmd_gen(cfg, log);
    if (command == "dims") return cmd_dims(cfg, log);
    if (command == "excise") return cmd_excise(cfg, log);
    if (command == "density") return cmd_density(cfg, log);
    if (command == "calibrate") return cmd_calibrate(cfg, log);
    if (command == "verify") return cmd_verify(cfg, log);
    err << "error: unknown command \"" << command << "\"\n";
    return kUsageError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ConstructionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kBudgetExceeded;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kDiagnosticFailure;
  }
}

}  // namespace ccf::cli
