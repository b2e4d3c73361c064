#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "ftjc/frac_evolution.hpp"
#include "ftjc/hilbert.hpp"
#include "ftjc/observables.hpp"
#include "ftjc/special_fn.hpp"

using namespace ftjc;

// ranges: alpha in hundredths, |z|
static void BM_MlEval(benchmark::State& st) {
  const double alpha = st.range(0) / 100.0;
  const cplx z = std::polar(static_cast<double>(st.range(1)), 2.2);
  for (auto _ : st) benchmark::DoNotOptimize(ml_eval({alpha, z}, 1e-10));
}
BENCHMARK(BM_MlEval)->ArgsProduct({{25, 50, 75, 100}, {1, 4, 10, 25}});

static void BM_BlockTrajectory(benchmark::State& st) {
  const auto order = FractionalOrder::make(st.range(0) / 100.0);
  std::vector<double> times(400);
  for (std::size_t k = 0; k < times.size(); ++k) times[k] = 0.1 * static_cast<double>(k);
  for (auto _ : st) benchmark::DoNotOptimize(block_trajectory(order, 1.0, 9, times, 1e-10));
  st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(times.size()));
}
BENCHMARK(BM_BlockTrajectory)->Arg(50)->Arg(75)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_Husimi(benchmark::State& st) {
  const auto fd = field_density(init_coherent_excited(3.0, 40));
  HusimiSpec spec;
  spec.resolution = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(husimi(fd, spec));
}
BENCHMARK(BM_Husimi)->Arg(101)->Arg(201)->Unit(benchmark::kMillisecond);

static void BM_Concurrence(benchmark::State& st) {
  auto s = init_fock_excited(1);
  s.a_e[0] = 0.6;
  s.a_g[0] = cplx(0.0, 0.8);
  const auto rho = qubit_density(s);
  for (auto _ : st) benchmark::DoNotOptimize(concurrence(rho));
}
BENCHMARK(BM_Concurrence);

BENCHMARK_MAIN();
