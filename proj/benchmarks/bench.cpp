#include <benchmark/benchmark.h>

#include "isocm/bracket_audit.hpp"
#include "isocm/dynamics.hpp"
#include "isocm/gauge.hpp"
#include "isocm/oscillator.hpp"
#include "isocm/random_states.hpp"
#include "isocm/superint.hpp"

using namespace isocm;

namespace {

ModelParams gh(int n, int ell) {
  ModelParams p;
  p.family = Family::GibbonsHermsen;
  p.n = n;
  p.ell = ell;
  p.omega = 1.0;
  p.c = 1.0;
  return p;
}

ModelParams bn(int n) {
  ModelParams p;
  p.family = Family::BnType;
  p.n = n;
  p.ell1 = 1;
  p.ell2 = 1;
  p.omega = 1.0;
  p.c1 = 1.0;
  p.c2 = 0.5;
  return p;
}

void BM_IntegratePeriodGH(benchmark::State& state) {
  const auto p = gh(static_cast<int>(state.range(0)), 2);
  const auto r0 = std::get<ReducedStateGH>(random_reduced(p, 1));
  const std::vector<double> grid{0.0, period(p)};
  long steps = 0;
  for (auto _ : state) {
    const auto traj = integrate(r0, p, grid);
    steps = traj.stats.accepted;
    benchmark::DoNotOptimize(traj.states.back().q.data());
  }
  state.counters["steps"] = static_cast<double>(steps);
}
BENCHMARK(BM_IntegratePeriodGH)->Arg(2)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_IntegratePeriodBn(benchmark::State& state) {
  const auto p = bn(static_cast<int>(state.range(0)));
  const auto r0 = std::get<ReducedStateBn>(random_reduced(p, 1));
  const std::vector<double> grid{0.0, period(p)};
  for (auto _ : state) benchmark::DoNotOptimize(integrate(r0, p, grid).states.back().q.data());
}
BENCHMARK(BM_IntegratePeriodBn)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_ProjectGH(benchmark::State& state) {
  const auto p = gh(static_cast<int>(state.range(0)), 2);
  const auto s = randomize_gauge(embed(std::get<ReducedStateGH>(random_reduced(p, 1)), p), 2);
  for (auto _ : state) benchmark::DoNotOptimize(project_GH(s, p.c).q.data());
}
BENCHMARK(BM_ProjectGH)->Arg(2)->Arg(4)->Arg(8);

void BM_RankGH(benchmark::State& state) {
  const auto p = gh(2, 2);
  const ReducedState point = random_reduced(p, 1);
  const auto pool = generate_pool(static_cast<int>(state.range(0)), p);
  for (auto _ : state) benchmark::DoNotOptimize(rank_of_invariants(pool, point, p).rank);
  state.counters["words"] = static_cast<double>(pool.size());
}
BENCHMARK(BM_RankGH)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_BracketAudit(benchmark::State& state) {
  ModelParams p;
  p.family = Family::LieA;
  p.n = 3;
  p.omega = 1.0;
  BracketAuditOptions o;
  o.points = 1;
  for (auto _ : state) benchmark::DoNotOptimize(audit_lie_bracket(p, o).jacobi);
}
BENCHMARK(BM_BracketAudit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
