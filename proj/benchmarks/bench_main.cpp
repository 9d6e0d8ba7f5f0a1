#include <benchmark/benchmark.h>

#include <cmath>

#include "hardyvl/charf.hpp"
#include "hardyvl/ops.hpp"
#include "hardyvl/partition.hpp"
#include "hardyvl/quad.hpp"
#ifdef HARDYVL_WITH_ORACLE
#include "hardyvl/oracle.hpp"
#endif

using namespace hardyvl;

namespace {

ProblemConfig power_config(bool separable_search) {
  ProblemConfig c;
  c.u = Weight2D::power_pair(-2.0, -2.0);
  c.search.exploit_separability = separable_search;
  return c;
}

ProblemConfig bump_config() {
  ProblemConfig c;
  c.u = Weight2D::derived(
      [](double x1, double x2) {
        const double l = std::log(x1 / x2);
        return std::pow(x1 * x2, -2.0) * (1.0 + std::exp(-l * l));
      },
      "bump");
  c.window1 = c.window2 = Window{1e-2, 1e2};
  return c;
}

void BM_build_V(benchmark::State& state) {
  const Weight1D v = Weight1D::exp_scaled(0.5, 1e-5);
  for (auto _ : state) benchmark::DoNotOptimize(build_V(v, 2.0, Window{1e-6, 1e6}, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_build_V)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_integrate_singular(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(integrate_1d([](double x) { return std::pow(x, -0.9); }, 0.0, 1.0, 1e-10).value);
}
BENCHMARK(BM_integrate_singular);

void BM_B1(benchmark::State& state) {
  ProblemConfig1D c;
  c.u = Weight1D::power(-2.0);
  const Problem1D pb(c);
  for (auto _ : state) benchmark::DoNotOptimize(B1(pb, 1.5).value);
}
BENCHMARK(BM_B1)->Unit(benchmark::kMillisecond);

void BM_B2_separable(benchmark::State& state) {
  const Problem pb(power_config(true));
  for (auto _ : state) benchmark::DoNotOptimize(B2(pb, {1.5, 1.5}).value);
}
BENCHMARK(BM_B2_separable)->Unit(benchmark::kMillisecond);

void BM_B2_joint_search(benchmark::State& state) {
  const Problem pb(power_config(false));
  for (auto _ : state) benchmark::DoNotOptimize(B2(pb, {1.5, 1.5}).value);
}
BENCHMARK(BM_B2_joint_search)->Unit(benchmark::kMillisecond);

void BM_B2_nonseparable(benchmark::State& state) {
  const Problem pb(bump_config());
  for (auto _ : state) benchmark::DoNotOptimize(B2(pb, {1.5, 1.5}).value);
}
BENCHMARK(BM_B2_nonseparable)->Unit(benchmark::kMillisecond);

void BM_apply_H2(benchmark::State& state) {
  const auto e = geometric_edges(0.01, 100.0, static_cast<int>(state.range(0)));
  const GridFn f = GridFn::constant(e, e, 1.0);
  const BoundaryPair pair;
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_H2(f, pair, pair, x, 1.0 / x));
    x = x < 50.0 ? x * 1.01 : 0.5;
  }
}
BENCHMARK(BM_apply_H2)->Arg(16)->Arg(64);

void BM_estimate_norm(benchmark::State& state) {
  const Problem pb(power_config(true));
  NormOptions opt;
  opt.resolution = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(estimate_norm(pb, opt).value);
}
BENCHMARK(BM_estimate_norm)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_quadrant_decompose(benchmark::State& state) {
  const Problem pb(power_config(true));
  const auto e = geometric_edges(0.1, 10.0, 16);
  const GridFn f = GridFn::constant(e, e, 1.0);
  const LimitSequence s1 = covering_sequence(pb.boundary(1), 1.0, 0.1, 10.0, 1);
  const LimitSequence s2 = covering_sequence(pb.boundary(2), 1.0, 0.1, 10.0, 2);
  for (auto _ : state) benchmark::DoNotOptimize(quadrant_decompose(f, pb, s1, s2).sum());
}
BENCHMARK(BM_quadrant_decompose)->Unit(benchmark::kMillisecond);

#ifdef HARDYVL_WITH_ORACLE
void BM_oracle_B2(benchmark::State& state) {
  const ProblemConfig c = bump_config();
  oracle::OracleConfig oc;
  oc.mesh = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::oracle_B2(c, {1.5, 1.5}, oc));
}
BENCHMARK(BM_oracle_B2)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
#endif

}  // namespace

BENCHMARK_MAIN();
