// Serial reference vs OpenMP kernels on identical inputs.

#include <benchmark/benchmark.h>

#include <cmath>

#include "ccf/boxcount.hpp"
#include "ccf/calibrate.hpp"
#include "ccf/group.hpp"
#include "ccf/moran.hpp"
#include "ccf/pieces.hpp"
#include "ccf/sampling.hpp"

using namespace ccf;

namespace {

const group::GroupSpec& h1() {
  static const group::GroupSpec spec = group::GroupSpec::heisenberg(1, 0.5);
  return spec;
}

const fractal::PointCloud& moran_cloud() {
  static const fractal::PointCloud cloud = [] {
    const auto set = fractal::enumerate_cylinders(h1(), 2.5, 6);
    return fractal::sample_set(set, std::size_t{1} << 18, 1);
  }();
  return cloud;
}

const dimlab::PieceSet& moran_pieces() {
  static const dimlab::PieceSet pieces = dimlab::pieces_from(fractal::enumerate_cylinders(h1(), 2.5, 6));
  return pieces;
}

const group::TripleSample& triples() {
  static const group::TripleSample t = group::sample_triples(3, 200000, 1.0, 3);
  return t;
}

void BM_BoxCountSerial(benchmark::State& state) {
  const double side = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  const double sides[3] = {side, side, side};
  for (auto _ : state) benchmark::DoNotOptimize(dimlab::count_occupied_cells_serial(moran_cloud(), sides));
}

void BM_BoxCountParallel(benchmark::State& state) {
  const double side = std::ldexp(1.0, -static_cast<int>(state.range(0)));
  const double sides[3] = {side, side, side};
  for (auto _ : state) benchmark::DoNotOptimize(dimlab::count_occupied_cells(moran_cloud(), sides));
}

void BM_CoveringSerial(benchmark::State& state) {
  const auto region = dimlab::region_halfspace(2, 0.0, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dimlab::covering_measure_serial(moran_pieces(), region, 2.5, dimlab::Metric::homogeneous));
  }
}

void BM_CoveringParallel(benchmark::State& state) {
  const auto region = dimlab::region_halfspace(2, 0.0, true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dimlab::covering_measure(moran_pieces(), region, 2.5, dimlab::Metric::homogeneous));
  }
}

void BM_TriangleSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(group::count_triangle_violations_serial(h1(), triples()));
}

void BM_TriangleParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(group::count_triangle_violations(h1(), triples()));
}

}  // namespace

BENCHMARK(BM_BoxCountSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoxCountParallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoveringSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CoveringParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TriangleSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TriangleParallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
