#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "herald/analysis.hpp"
#include "herald/dense.hpp"
#include "herald/oracle.hpp"

namespace {

using namespace herald;

dense::DensityMatrix mixed_start(int modes, int cutoff) {
  std::vector<dense::Subsystem> layout;
  for (int m = 0; m < modes; ++m) layout.push_back({std::string(1, static_cast<char>('A' + m)), cutoff + 1});
  std::vector<std::pair<std::vector<int>, double>> entries;
  std::vector<int> one(static_cast<std::size_t>(modes), 0);
  entries.emplace_back(one, 0.5);
  one[0] = 1;
  one[1] = 1;
  entries.emplace_back(one, 0.5);
  return dense::diagonal_mixture(layout, entries);
}

template <bool Parallel>
void BM_ApplyLocal(benchmark::State& state) {
  const int modes = static_cast<int>(state.range(0));
  const auto op = oracle::beam_splitter_operator("A", "B", 0.7, 0.3, 4);
  auto rho = mixed_start(modes, 4);
  for (auto _ : state) {
    if constexpr (Parallel) {
      dense::apply_local_parallel(rho, op);
    } else {
      dense::apply_local_serial(rho, op);
    }
    benchmark::DoNotOptimize(rho.data().data());
  }
  state.SetComplexityN(static_cast<long>(rho.dim()));
}

void BM_Sweep(benchmark::State& state) {
  SweepSpec spec;
  spec.theta0 = {std::numbers::pi / 4.0};
  for (int i = 0; i < 64; ++i) spec.theta1.push_back(i * std::numbers::pi / 64.0);
  spec.beta = {Complex{0.0}, Complex{-1.0}};
  spec.p = {1.0};
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(spec, state.range(0) ? Execution::parallel : Execution::serial));
}

}  // namespace

BENCHMARK(BM_ApplyLocal<false>)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplyLocal<true>)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Sweep)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
