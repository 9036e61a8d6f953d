#include "ccf/sampling.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "ccf/error.hpp"
#include "ccf/rng.hpp"

namespace ccf::fractal {

void PointCloud::push(std::span<const double> p, double w) {
  if (static_cast<int>(p.size()) != dim) throw InputError("PointCloud::push: dimension mismatch");
  coords.insert(coords.end(), p.begin(), p.end());
  weights.push_back(w);
}

double PointCloud::total_weight() const noexcept {
  double acc = 0.0;
  for (double w : weights) acc += w;
  return acc;
}

PointCloud sample_set(const Construction& construction, const group::GroupSpec& spec,
                      std::size_t count, std::uint64_t seed) {
  if (construction.slabs.empty()) throw InputError("sample_set: empty construction");
  if (count < 1) throw InputError("sample_set: count must be >= 1");
  check_embedding(spec, construction.embedding, construction.m);

  double x_measure = 0.0;
  for (const Slab& s : construction.slabs) {
    double face = 1.0;
    for (const Interval& iv : s.x) face *= iv.length();
    x_measure += face;
  }

  PointCloud cloud;
  cloud.dim = spec.dim();
  const auto n = static_cast<std::size_t>(cloud.dim);
  cloud.coords.resize(count * n);
  cloud.weights.assign(count, x_measure / static_cast<double>(count));
  const CounterRng root(seed);
  const auto m = static_cast<std::size_t>(construction.m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(k));
    const Slab& slab = construction.slabs[rng.below(construction.slabs.size())];
    std::vector<double> x(m);
    for (std::size_t a = 0; a < m; ++a) x[a] = rng.uniform(slab.x[a].lo, slab.x[a].hi);
    const double t = rng.uniform(slab.t.lo, slab.t.hi);
    const group::Vec p = embed_point(spec, construction.embedding, x, t);
    std::copy(p.begin(), p.end(), cloud.coords.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(k) * n));
  }
  return cloud;
}

PointCloud sample_set(const MoranSet& set, std::size_t count, std::uint64_t seed) {
  if (set.size() == 0) throw InputError("sample_set: empty Moran set");
  if (count < 1) throw InputError("sample_set: count must be >= 1");
  const double target = 2.0 * set.s() - set.spec().m1();
  const double mass = static_cast<double>(set.size()) * std::pow(set.diam_inf_bound(), target);

  PointCloud cloud;
  cloud.dim = set.spec().dim();
  const auto n = static_cast<std::size_t>(cloud.dim);
  cloud.coords.resize(count * n);
  cloud.weights.assign(count, mass / static_cast<double>(count));
  const CounterRng root(seed);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(count); ++k) {
    CounterRng rng = root.split(static_cast<std::uint64_t>(k));
    const std::size_t idx = rng.below(set.size());
    const auto lo = set.lo(idx);
    const auto hi = set.hi(idx);
    for (std::size_t i = 0; i < n; ++i) {
      cloud.coords[static_cast<std::size_t>(k) * n + i] = 0.5 * (lo[i] + hi[i]);
    }
  }
  return cloud;
}

void write_csv(std::ostream& out, const PointCloud& cloud) {
  for (int i = 1; i <= cloud.dim; ++i) out << 'x' << i << ',';
  out << "weight\n";
  char buf[32];
  for (std::size_t k = 0; k < cloud.size(); ++k) {
    for (double v : cloud.point(k)) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << buf << ',';
    }
    std::snprintf(buf, sizeof buf, "%.17g", cloud.weights[k]);
    out << buf << '\n';
  }
}

PointCloud read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("read_csv: missing header");
  PointCloud cloud;
  {
    std::stringstream header(line);
    std::string field;
    std::vector<std::string> names;
    while (std::getline(header, field, ',')) names.push_back(field);
    if (names.size() < 2 || names.back() != "weight") {
      throw InputError("read_csv: header must be x1,...,xn,weight");
    }
    for (std::size_t i = 0; i + 1 < names.size(); ++i) {
      if (names[i] != "x" + std::to_string(i + 1)) throw InputError("read_csv: bad column " + names[i]);
    }
    cloud.dim = static_cast<int>(names.size() - 1);
  }
  std::size_t row = 1;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    values.clear();
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument(field);
      } catch (const std::exception&) {
        throw InputError("read_csv: row " + std::to_string(row) + ": not a number: '" + field + "'");
      }
    }
    if (values.size() != static_cast<std::size_t>(cloud.dim) + 1) {
      throw InputError("read_csv: row " + std::to_string(row) + " has the wrong number of fields");
    }
    cloud.push(std::span<const double>(values).first(static_cast<std::size_t>(cloud.dim)), values.back());
  }
  if (cloud.size() == 0) throw InputError("read_csv: no points");
  return cloud;
}

}  // namespace ccf::fractal
