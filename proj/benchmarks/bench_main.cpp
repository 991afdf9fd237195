#include <benchmark/benchmark.h>

#include "rdt/barriers/kummer.hpp"
#include "rdt/flow/flow_config.hpp"
#include "rdt/flow/radial_flow.hpp"
#include "rdt/heat/estimates.hpp"
#include "rdt/heat/kernel.hpp"
#include "rdt/ortho/toy_map.hpp"
#include "rdt/tensor/metrics.hpp"
#include "rdt/tensor/patch_fields.hpp"
#include "rdt/tensor/pointwise.hpp"

using namespace rdt;

static void BM_RdtOperatorPoint(benchmark::State& state) {
  const int n = 4;
  const tensor::RandomMetric g(n, 7);
  const auto jet = tensor::point_jet(g.fn(), tensor::Vec{0.1, -0.2, 0.3, 0.0, 0}, n, 0.05);
  const auto bg = tensor::make_background(tensor::constant_jet(tensor::identity(n), n));
  for (auto _ : state) benchmark::DoNotOptimize(tensor::rdt_operator(jet, bg));
}
BENCHMARK(BM_RdtOperatorPoint);

static void BM_RadialFlowStep(benchmark::State& state) {
  flow::FlowConfig c;
  c.nodes = static_cast<int>(state.range(0));
  const auto s = flow::initial_state(c, flow::make_grid(c));
  const double dt = flow::max_stable_dt(s, c.cfl);
  for (auto _ : state) benchmark::DoNotOptimize(flow::step(s, dt, c.cfl));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_RadialFlowStep)->Arg(160)->Arg(320)->Arg(640)->Complexity();

static void BM_QuotientKernel(benchmark::State& state) {
  const heat::KernelSpec k{4, static_cast<int>(state.range(0)), 0};
  const tensor::Vec x{1, 0.5, -0.3, 0.2, 0}, y{-0.4, 1.2, 0.7, 0.1, 0};
  for (auto _ : state) benchmark::DoNotOptimize(heat::kernel(k, x, y, 0.8));
}
BENCHMARK(BM_QuotientKernel)->Arg(1)->Arg(3)->Arg(8);

static void BM_WeightedKernelNorm(benchmark::State& state) {
  const heat::KernelSpec k;
  for (auto _ : state) benchmark::DoNotOptimize(heat::weighted_kernel_lp_norm(k, {2, 1, 1}, 10, 2));
}
BENCHMARK(BM_WeightedKernelNorm)->Unit(benchmark::kMillisecond);

static void BM_KummerChi(benchmark::State& state) {
  const barriers::KummerParams p{1.75, 0.225};
  const double u = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(barriers::kummer_chi(p, u));
}
BENCHMARK(BM_KummerChi)->Arg(0)->Arg(5)->Arg(200);

static void BM_IntegrabilityProbe(benchmark::State& state) {
  const auto map = ortho::library_map("x2_y");
  const auto s = ortho::split(map);
  ortho::ProbeOptions o;
  o.samples = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(ortho::integrability_probe(map, s, {1e-1, 1e-2}, o));
}
BENCHMARK(BM_IntegrabilityProbe)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
