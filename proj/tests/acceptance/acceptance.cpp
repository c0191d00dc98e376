// Runs every acceptance criterion and prints one [PASS]/[FAIL] line per criterion.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "isocm/bracket_audit.hpp"
#include "isocm/dynamics.hpp"
#include "isocm/gauge.hpp"
#include "isocm/oscillator.hpp"
#include "isocm/random_states.hpp"
#include "isocm/superint.hpp"

using namespace isocm;

namespace {

constexpr double kIntegratorTol = 1e-10;
constexpr double kReturnTol = 1e-6;
constexpr double kGenericFloor = 0.1;
constexpr int kSeeds = 10;
constexpr int kGenericRequired = 9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ModelParams gh(int n, double omega) {
  ModelParams p;
  p.family = Family::GibbonsHermsen;
  p.n = n;
  p.ell = 2;
  p.omega = omega;
  p.c = 1.0;
  return p;
}

ModelParams bn(int n, int ell1, int ell2, double omega) {
  ModelParams p;
  p.family = Family::BnType;
  p.n = n;
  p.ell1 = ell1;
  p.ell2 = ell2;
  p.omega = omega;
  p.c1 = 1.0;
  p.c2 = 0.5;
  return p;
}

ModelParams lie(int n, double omega = 1.0) {
  ModelParams p;
  p.family = Family::LieA;
  p.n = n;
  p.omega = omega;
  return p;
}

template <class Fn>
auto visit_state(const ReducedState& s, Fn&& fn) {
  return std::visit(std::forward<Fn>(fn), s);
}

IntegrateOptions integ_opts() {
  IntegrateOptions o;
  o.tol = kIntegratorTol;
  return o;
}

// Reduced distances from the start at the given times along the integrated reduced flow.
std::vector<double> return_distances(const ModelParams& p, std::uint64_t seed, const std::vector<double>& times) {
  return visit_state(random_reduced(p, seed), [&](const auto& r0) {
    auto traj = integrate(r0, p, times, integ_opts());
    std::vector<double> d;
    for (const auto& s : traj.states) d.push_back(reduced_distance(s, traj.states.front()));
    return d;
  });
}

Outcome isochronicity(const std::vector<ModelParams>& configs) {
  double worst_T = 0.0;
  int generic_total = 0, runs = 0;
  bool pass = true;
  std::string failures;
  for (const auto& p : configs) {
    const double T = period(p);
    int generic = 0;
    for (int seed = 0; seed < kSeeds; ++seed) {
      try {
        const auto d = return_distances(p, static_cast<std::uint64_t>(seed), {0.0, 0.5 * T, T});
        worst_T = std::max(worst_T, d[2]);
        if (d[2] > kReturnTol) pass = false;
        if (d[1] >= kGenericFloor) ++generic;
      } catch (const std::exception& e) {
        pass = false;
        failures += fmt(" [seed %d: %s]", seed, e.what());
      }
      ++runs;
    }
    if (generic < kGenericRequired) {
      pass = false;
      failures += fmt(" [n=%d omega=%g: only %d/%d generic]", p.n, p.omega, generic, kSeeds);
    }
    generic_total += generic;
  }
  return {pass, fmt("max d(T)=%.3g (<= %.0e), d(T/2)>=%.1f in %d/%d runs", worst_T, kReturnTol, kGenericFloor,
                    generic_total, runs) +
                    failures};
}

Outcome c1() {
  std::vector<ModelParams> cfgs;
  for (int n : {2, 3})
    for (double w : {1.0, 2.5}) cfgs.push_back(gh(n, w));
  return isochronicity(cfgs);
}

Outcome c2() {
  std::vector<ModelParams> cfgs;
  for (int n : {2, 3})
    for (double w : {1.0, 2.5}) {
      cfgs.push_back(bn(n, 1, 1, w));
      cfgs.push_back(bn(n, 2, 1, w));
    }
  return isochronicity(cfgs);
}

Outcome c3() {
  double worst = 0.0;
  bool pass = true;
  std::string failures;
  for (const auto& p : {bn(2, 1, 0, 1.0), bn(3, 2, 0, 2.5), lie(2, 1.0), lie(2, 2.5)}) {
    for (int seed = 0; seed < kSeeds; ++seed) {
      try {
        const auto d = return_distances(p, static_cast<std::uint64_t>(seed), {0.0, 0.5 * period(p)});
        worst = std::max(worst, d[1]);
        if (d[1] > kReturnTol) pass = false;
      } catch (const std::exception& e) {
        pass = false;
        failures += fmt(" [%s seed %d: %s]", std::string(to_string(p.family)).c_str(), seed, e.what());
      }
    }
  }
  return {pass, fmt("max d(T/2)=%.3g (<= %.0e) over B_n ell2=0 and A-series n=2", worst, kReturnTol) + failures};
}

Outcome c4() {
  double worst = 0.0;
  bool pass = true;
  std::string failures;
  std::vector<ModelParams> cfgs;
  for (int n : {2, 3}) {
    cfgs.push_back(gh(n, 1.0));
    cfgs.push_back(bn(n, 1, 1, 1.3));
    cfgs.push_back(lie(n, 0.8));
  }
  for (const auto& p : cfgs) {
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
      try {
        const auto grid = uniform_grid(period(p), 101);
        const double d = visit_state(random_reduced(p, seed), [&](const auto& r0) {
          const auto a = integrate(r0, p, grid, integ_opts());
          const auto b = project_flow(randomize_gauge(embed(r0, p), seed + 100), p, grid);
          if (!b.failures.empty()) throw std::runtime_error("projection failed at t=" + std::to_string(b.failures[0].t));
          double m = 0.0;
          for (const auto& [t, dist] : compare_trajectories(a, b)) m = std::max(m, dist);
          return m;
        });
        worst = std::max(worst, d);
        if (d > kReturnTol) pass = false;
      } catch (const std::exception& e) {
        pass = false;
        failures += fmt(" [%s n=%d: %s]", std::string(to_string(p.family)).c_str(), p.n, e.what());
      }
    }
  }
  return {pass, fmt("sup distance integrate vs project_flow = %.3g (<= %.0e), 3 families x n=2,3", worst, kReturnTol) +
                    failures};
}

Outcome c5() {
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto check = [&](const auto& s0, double omega, auto&& J) {
      const auto j0 = J(s0);
      for (int i = 1; i <= 100; ++i) {
        const auto st = exact_flow(s0, 0.173 * i, omega);
        worst = std::max(worst, (J(st) - j0).norm());
      }
    };
    const auto pg = gh(3, 1.7);
    check(randomize_gauge(embed(std::get<ReducedStateGH>(random_reduced(pg, seed)), pg), seed), pg.omega,
          [](const UnreducedStateGH& s) { return moment_map_GH(s); });
    const auto pb = bn(3, 2, 1, 1.1);
    const auto sb = randomize_gauge(embed(std::get<ReducedStateBn>(random_reduced(pb, seed)), pb), seed);
    check(sb, pb.omega, [](const UnreducedStateBn& s) { return moment_map_Bn(s).first; });
    check(sb, pb.omega, [](const UnreducedStateBn& s) { return moment_map_Bn(s).second; });
    const auto pl = lie(3, 0.9);
    check(randomize_gauge(embed(std::get<ReducedStateLie>(random_reduced(pl, seed)), pl), seed), pl.omega,
          [](const UnreducedStateLie& s) { return moment_map_Lie(s); });
  }
  return {worst <= 1e-12, fmt("max ||J(t)-J(0)||_F = %.3g (<= 1e-12) over 100 times, 5 states per family", worst)};
}

Outcome c6() {
  double worst = 0.0;
  bool pass = true;
  std::string failures;
  for (const auto& p : {gh(2, 1.0), gh(3, 2.5), bn(2, 1, 1, 1.0), bn(3, 2, 1, 2.5), bn(3, 1, 2, 1.0)}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      try {
        const double r = visit_state(random_reduced(p, seed), [&](const auto& r0) {
          return integrate(r0, p, uniform_grid(period(p), 51), integ_opts()).max_constraint_residual();
        });
        worst = std::max(worst, r);
      } catch (const std::exception& e) {
        pass = false;
        failures += fmt(" [%s: %s]", std::string(to_string(p.family)).c_str(), e.what());
      }
    }
  }
  return {pass && worst <= 1e-9, fmt("max spin-constraint drift over one period = %.3g (<= 1e-9)", worst) + failures};
}

Outcome c7() {
  double worst = 0.0;
  for (const auto& p : {gh(3, 1.3), bn(3, 1, 2, 0.7), lie(3, 1.9)}) {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
      const double d = visit_state(random_reduced(p, seed), [&](const auto& r0) {
        const auto s = randomize_gauge(embed(r0, p), seed + 7);
        double h_red = 0.0;
        if constexpr (std::is_same_v<std::decay_t<decltype(r0)>, ReducedStateGH>)
          h_red = reduced_hamiltonian(project_GH(s, p.c), p);
        else if constexpr (std::is_same_v<std::decay_t<decltype(r0)>, ReducedStateBn>)
          h_red = reduced_hamiltonian(project_Bn(s, p.c1, p.c2), p);
        else
          h_red = reduced_hamiltonian(project_Lie(s), p);
        return std::abs(h_red - energy(s, p.omega));
      });
      worst = std::max(worst, d);
    }
  }
  return {worst <= 1e-10, fmt("max |H_red(project(s)) - E(s)| = %.3g (<= 1e-10), 500 states per family", worst)};
}

Outcome c8() {
  bool pass = true;
  std::string detail;
  for (const auto& p : {gh(2, 1.0), bn(2, 1, 1, 1.0)}) {
    try {
      const ReducedState point = random_reduced(p, 11);
      SaturationOptions so;
      so.max_len = 6;
      const auto sat = saturate_rank(point, p, so);
      const auto& last = sat.steps.back();
      const int expected = reduced_dimension(p) - 1;
      const auto pool = generate_pool(last.max_len, p);
      RankOptions regauge;
      regauge.chart_seed = 987654321;
      const int r_regauge = rank_of_invariants(pool, point, p, regauge).rank;
      const int r_bigger = rank_of_invariants(generate_pool(last.max_len + 1, p), point, p).rank;
      const bool ok = sat.saturated && sat.rank == expected && last.report.gap_ratio >= 1e3 &&
                      r_regauge == sat.rank && r_bigger == sat.rank;
      pass = pass && ok;
      detail += fmt("%s rank %d/%d gap %.2g regauge %d enlarged %d; ", std::string(to_string(p.family)).c_str(),
                    sat.rank, expected, last.report.gap_ratio, r_regauge, r_bigger);
    } catch (const std::exception& e) {
      pass = false;
      detail += fmt("%s: %s; ", std::string(to_string(p.family)).c_str(), e.what());
    }
  }
  return {pass, detail};
}

Outcome c9() {
  BracketAuditOptions o;
  o.points = 20;
  o.seed = 1;
  const auto r = audit_lie_bracket(lie(3), o);
  const bool pass = r.r_matrix_inverse <= 1e-12 && r.r_matrix_antisymmetry <= 1e-12 && r.jacobi <= 1e-4 &&
                    r.canonical <= 1e-8 && r.casimir <= 1e-6;
  return {pass, fmt("ad_q r(q) %.2g, antisym %.2g (<= 1e-12); Jacobi %.2g (<= 1e-4); canonical %.2g (<= 1e-8); "
                    "Casimir %.2g (<= 1e-6); 20 points",
                    r.r_matrix_inverse, r.r_matrix_antisymmetry, r.jacobi, r.canonical, r.casimir)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome c10() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "isocm_acceptance_determinism";
  fs::remove_all(root);
  const std::vector<nlohmann::json> configs = {
      {{"params", {{"family", "GibbonsHermsen"}, {"n", 3}, {"ell", 2}, {"omega", 1.0}, {"c", 1.0}}}, {"seed", 5}},
      {{"params", {{"family", "BnType"}, {"n", 2}, {"ell1", 1}, {"ell2", 1}, {"omega", 1.0}, {"c1", 1.0}, {"c2", 0.5}}},
       {"seed", 5}},
      {{"params", {{"family", "LieA"}, {"n", 3}, {"omega", 1.0}}}, {"seed", 5}}};
  bool pass = true;
  int compared = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const fs::path a = root / (std::to_string(i) + "a"), b = root / (std::to_string(i) + "b");
    const auto ra = cli::run_command("simulate", configs[i], a, std::nullopt, 1);
    const auto rb = cli::run_command("simulate", configs[i], b, std::nullopt, 2);
    if (ra.exit_code != 0 || rb.exit_code != 0) pass = false;
    for (const char* f : {"integrated.csv", "projected.csv", "comparison.csv"}) {
      const std::string x = slurp(a / f), y = slurp(b / f);
      if (x.empty() || x != y) pass = false;
      ++compared;
    }
  }
  fs::remove_all(root);
  return {pass, fmt("%d CSV files compared byte for byte across repeated simulate runs", compared)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"C1 isochronicity GH", c1},
      {"C2 isochronicity B_n", c2},
      {"C3 half-period regimes", c3},
      {"C4 oracle equivalence", c4},
      {"C5 moment map exactness", c5},
      {"C6 constraint persistence", c6},
      {"C7 energy consistency", c7},
      {"C8 superintegrability rank", c8},
      {"C9 r-matrix and bracket", c9},
      {"C10 determinism", c10},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("[%s] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
