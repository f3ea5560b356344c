#include <cmath>
#include <numbers>
#include <vector>

#include <benchmark/benchmark.h>

#include "sphereosc/dynamics.hpp"

using namespace sphereosc;

namespace {

Execution execution(const benchmark::State& state) {
  return state.range(1) == 0 ? Execution::serial : Execution::parallel;
}

const EigenCouplings& couplings() {
  static const EigenCouplings c = [] {
    const auto ops = build_operator_set({12, 4, 40}, 0.04);
    return eigen_couplings(ops, diagonalize(ops));
  }();
  return c;
}

void BM_PositionAssembly(benchmark::State& state) {
  const BasisSpec spec{int(state.range(0)), 4, 40};
  const PositionQuadrature quad(spec);
  const auto f = [](double x, double y) { return x / std::pow(1.0 + 0.04 * (x * x + y * y), 2); };
  for (auto _ : state) benchmark::DoNotOptimize(quad.assemble(f, execution(state)));
  state.SetLabel(state.range(1) == 0 ? "serial" : "openmp");
}
BENCHMARK(BM_PositionAssembly)->ArgsProduct({{8, 12, 16}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ResonanceScan(benchmark::State& state) {
  const auto& c = couplings();
  std::vector<double> grid(std::size_t(state.range(0)));
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = 0.5 + 4.5 * double(k) / double(grid.size() - 1);
  std::vector<int> targets;
  for (int j = 1; j < c.size(); ++j)
    if (std::abs(c.v1(j, 0)) > 1e-8 || std::abs(c.v1_tilde(j, 0)) > 1e-8) targets.push_back(j);
  const BackgroundModel base(5.0, {});
  for (auto _ : state)
    benchmark::DoNotOptimize(scan_resonances(0, targets, grid, 100.0, 1e-3, c, base, execution(state)));
  state.SetLabel(state.range(1) == 0 ? "serial" : "openmp");
}
BENCHMARK(BM_ResonanceScan)->ArgsProduct({{1000, 10000}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_GoldenRuleTable(benchmark::State& state) {
  const auto& c = couplings();
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < c.size(); ++i)
    for (int j = 0; j < c.size(); ++j)
      if (i != j) pairs.emplace_back(i, j);
  const BackgroundModel model(5.0, {{1e-3, 2.16}, {5e-4, 4.4}});
  const auto kernel = DeltaKernel::parse("lorentzian", 0.01);
  for (auto _ : state) benchmark::DoNotOptimize(golden_rule_table(pairs, c, model, kernel, execution(state)));
  state.SetLabel(state.range(1) == 0 ? "serial" : "openmp");
}
BENCHMARK(BM_GoldenRuleTable)->Args({0, 0})->Args({0, 1})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
