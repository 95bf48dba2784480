#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "subsidylab/equilibrium.hpp"
#include "subsidylab/games.hpp"
#include "subsidylab/learning.hpp"
#include "subsidylab/rng.hpp"
#include "subsidylab/solvers.hpp"
#include "subsidylab/system_function.hpp"

namespace sl = subsidylab;

namespace {

sl::MaintenanceGame random_cnf_game(int n, std::uint64_t seed) {
  auto gen = sl::substream(seed, "bench-game");
  std::vector<std::vector<int>> clauses;
  const int m = n + 2;
  for (int c = 0; c < m; ++c) {
    std::vector<int> clause;
    for (int i = 1; i <= n; ++i) {
      const double u = sl::uniform01(gen);
      if (u < 0.3) clause.push_back(i);
      else if (u < 0.4) clause.push_back(-i);
    }
    if (clause.empty()) clause.push_back(1 + c % n);
    clauses.push_back(std::move(clause));
  }
  std::vector<double> costs, p;
  for (int i = 0; i < n; ++i) {
    costs.push_back(sl::uniform_real(gen, 0.05, 1.0));
    p.push_back(sl::uniform_real(gen, 0.1, 0.9));
  }
  return sl::make_maintenance_game(costs, p,
                                   sl::SystemFunction::from_cnf(n, clauses),
                                   std::nullopt);
}

sl::GameDistribution bench_dist(int n) {
  sl::GameDistribution dist;
  dist.family = sl::GameDistribution::Family::kSeries;
  dist.n = n;
  dist.cost_lo = 0.0;
  dist.cost_hi = 1.0;
  dist.H = 1.0;
  return dist;
}

void bm_reliability_table(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sl::MaintenanceGame g = random_cnf_game(n, 17);
  for (auto _ : state)
    benchmark::DoNotOptimize(sl::reliability_table(g));
  state.SetComplexityN(n);
}
BENCHMARK(bm_reliability_table)->Arg(8)->Arg(12)->Arg(16);

void bm_enumerate_nash(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sl::MaintenanceGame g = random_cnf_game(n, 23);
  const std::vector<double> Phi = sl::reliability_table(g);
  const std::vector<double> sigma(static_cast<size_t>(n), 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(sl::enumerate_nash(g, Phi, sigma));
}
BENCHMARK(bm_enumerate_nash)->Arg(6)->Arg(10)->Arg(14);

void bm_critical_values(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const sl::MaintenanceGame g = random_cnf_game(n, 29);
  const std::vector<double> Phi = sl::reliability_table(g);
  for (auto _ : state)
    benchmark::DoNotOptimize(sl::critical_values(g, Phi));
}
BENCHMARK(bm_critical_values)->Arg(6)->Arg(10)->Arg(14);

void bm_loss_curve(benchmark::State& state) {
  const sl::GameDistribution dist = bench_dist(static_cast<int>(state.range(0)));
  const sl::MaintenanceGame g = sl::sample_maintenance(dist, 31, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(sl::loss_curve(g));
}
BENCHMARK(bm_loss_curve)->Arg(4)->Arg(5)->Arg(6);

void bm_forecaster_run(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  const sl::GameDistribution dist = bench_dist(5);
  std::vector<sl::LossCurve> curves;
  curves.reserve(static_cast<std::size_t>(T));
  for (int i = 0; i < T; ++i)
    curves.push_back(sl::loss_curve(sl::sample_maintenance(dist, 41, i)));
  for (auto _ : state) {
    sl::OnlineForecaster f(curves, 0.1, 7);
    benchmark::DoNotOptimize(f.run());
  }
}
BENCHMARK(bm_forecaster_run)->Arg(500)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
