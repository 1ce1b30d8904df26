#include <benchmark/benchmark.h>

#include "zo/effdim.hpp"
#include "zo/estimators.hpp"
#include "zo/oracle.hpp"
#include "zo/rng.hpp"
#include "zo/solvers.hpp"

using namespace zo;

namespace {

Vector gaussian(std::size_t d, std::uint64_t index) {
  Vector v(static_cast<Eigen::Index>(d));
  rng::fill_standard_normal(1, 2, index, v.data(), d);
  return v;
}

const SpectrumSpec kDecay = spectrum::PowerLawWithFloor{1.0, 3.0, 0.01};

void BM_OracleQuery(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto q = make_quadratic(kDecay, d, 3, true, BMode::RandomUnit);
  OracleHandle o(q);
  const Vector x = gaussian(d, 0);
  for (auto _ : state) benchmark::DoNotOptimize(o.query(x));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_OracleQuery)->RangeMultiplier(4)->Range(16, 4096);

void BM_Asoe(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const QuarticNormProblem p(d, 1.0, 1.0, 2.0);
  OracleHandle o(p);
  const Vector x = 0.1 * gaussian(d, 1);
  const Vector y = x + 0.01 * gaussian(d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(asoe(o, 13.0, 12.0, x, y, 1e-6));
}
BENCHMARK(BM_Asoe)->RangeMultiplier(4)->Range(16, 1024);

void BM_RgIterations(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto q = make_quadratic(kDecay, d, 4, true, BMode::RandomUnit);
  RgConfig cfg;
  cfg.trace_A = q.trace();
  cfg.max_iters = 1000;
  const Vector x0 = gaussian(d, 3);
  for (auto _ : state) {
    OracleHandle o(q);
    benchmark::DoNotOptimize(rg_rho(o, x0, cfg).x_out);
  }
  state.SetItemsProcessed(state.iterations() * cfg.max_iters);
}
BENCHMARK(BM_RgIterations)->RangeMultiplier(4)->Range(16, 1024);

void BM_ZhbIterations(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const auto q = make_quadratic(kDecay, d, 5, true, BMode::RandomUnit);
  ZhbConfig cfg;
  cfg.mu = q.mu();
  cfg.ed_half = ed_exact(q.eigenvalues(), 0.5);
  cfg.max_iters = 1000;
  const Vector x0 = gaussian(d, 4);
  for (auto _ : state) {
    OracleHandle o(q);
    benchmark::DoNotOptimize(zhb(o, x0, cfg).x_out);
  }
  state.SetItemsProcessed(state.iterations() * cfg.max_iters);
}
BENCHMARK(BM_ZhbIterations)->RangeMultiplier(4)->Range(16, 1024);

void BM_EdExact(benchmark::State& state) {
  const auto eigs = realize(kDecay, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ed_exact(eigs, 0.5));
}
BENCHMARK(BM_EdExact)->RangeMultiplier(10)->Range(100, 100000);

}  // namespace

BENCHMARK_MAIN();
