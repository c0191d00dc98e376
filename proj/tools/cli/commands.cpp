#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

#include "isocm/bracket_audit.hpp"
#include "isocm/dynamics.hpp"
#include "isocm/gauge.hpp"
#include "isocm/io.hpp"
#include "isocm/random_states.hpp"
#include "isocm/superint.hpp"

namespace isocm::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Runs fn(i) for i in [0, count) on up to `workers` threads. Results are written by index, so
// the outcome does not depend on scheduling; the lowest-index exception is rethrown.
template <class Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int nthreads = std::max(1, std::min(workers, count));
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

ReducedState initial_state(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.initial_state) return reduced_state_from_json(*cfg.initial_state, cfg.params);
  return random_reduced(cfg.params, seed);
}

void write_json(const fs::path& out, const std::string& name, const json& j) {
  write_file_atomic(out / name, j.dump(2) + "\n");
}

IntegrateOptions integrate_options(const ExperimentConfig& cfg) {
  IntegrateOptions o;
  o.tol = cfg.tolerances.integrator;
  return o;
}

double max_distance(const std::vector<std::pair<double, double>>& table) {
  double m = 0.0;
  for (const auto& [t, d] : table) m = std::max(m, d);
  return m;
}

}  // namespace

CommandResult cmd_simulate(const ExperimentConfig& cfg, const fs::path& out, int) {
  fs::create_directories(out);
  const ReducedState start = initial_state(cfg, cfg.seed);
  const std::vector<double> grid = uniform_grid(cfg.resolved_t_end(), cfg.sample_count);
  json summary;
  std::visit(
      [&](const auto& r0) {
        const auto integrated = integrate(r0, cfg.params, grid, integrate_options(cfg));
        const auto projected = project_flow(embed(r0, cfg.params), cfg.params, grid);
        const auto table = compare_trajectories(integrated, projected);
        write_file_atomic(out / "integrated.csv", trajectory_csv(integrated, cfg.params));
        write_file_atomic(out / "projected.csv", trajectory_csv(projected, cfg.params));
        write_file_atomic(out / "comparison.csv", distance_csv(table));
        summary["integrated"] = trajectory_summary(integrated);
        summary["projected"] = trajectory_summary(projected);
        summary["max_reduced_distance"] = max_distance(table);
        summary["compared_samples"] = table.size();
      },
      start);
  summary["command"] = "simulate";
  summary["status"] = "ok";
  summary["config"] = config_to_json(cfg);
  summary["initial_state"] = to_json(start);
  summary["files"] = {"integrated.csv", "projected.csv", "comparison.csv"};
  write_json(out, "summary.json", summary);
  return {kExitOk, summary};
}

CommandResult cmd_verify_period(const ExperimentConfig& cfg, const fs::path& out, int workers) {
  fs::create_directories(out);
  const double T = period(cfg.params);
  const bool half = half_period_regime(cfg.params);
  const std::vector<double> grid{0.0, T / 4, T / 2, 3 * T / 4, T};
  const Tolerances& tol = cfg.tolerances;
  std::vector<json> trials(static_cast<std::size_t>(cfg.trials));

  parallel_for(cfg.trials, workers, [&](int i) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
    const ReducedState start = initial_state(cfg, seed);
    json t;
    t["seed"] = seed;
    std::visit(
        [&](const auto& r0) {
          const auto traj = integrate(r0, cfg.params, grid, integrate_options(cfg));
          const auto oracle = project_flow(embed(r0, cfg.params), cfg.params, grid);
          json d = json::array(), o = json::array();
          for (std::size_t k = 1; k < grid.size(); ++k) d.push_back(reduced_distance(traj.states[k], traj.states[0]));
          for (const auto& [tt, dist] : compare_trajectories(traj, oracle)) o.push_back(dist);
          t["distance"] = {{"T/4", d[0]}, {"T/2", d[1]}, {"3T/4", d[2]}, {"T", d[3]}};
          t["oracle_distance"] = o;
          t["energy_drift"] = traj.energy_drift();
        },
        start);
    const double dT = t["distance"]["T"].get<double>();
    const double dHalf = t["distance"]["T/2"].get<double>();
    t["returns_at_T"] = dT <= tol.period;
    t["generic_at_T/2"] = dHalf >= tol.genericity_floor;
    t["returns_at_T/2"] = dHalf <= tol.period;
    trials[static_cast<std::size_t>(i)] = std::move(t);
  });

  int returned = 0, generic = 0, half_returned = 0;
  for (const json& t : trials) {
    returned += t["returns_at_T"].get<bool>();
    generic += t["generic_at_T/2"].get<bool>();
    half_returned += t["returns_at_T/2"].get<bool>();
  }
  const int n = cfg.trials;
  const int generic_needed = static_cast<int>(std::ceil(tol.genericity_fraction * n - 1e-9));
  bool pass = returned == n;
  if (half) pass = pass && half_returned == n;
  else pass = pass && generic >= generic_needed;

  json report;
  report["command"] = "verify-period";
  report["status"] = pass ? "pass" : "fail";
  report["period"] = T;
  report["half_period_regime"] = half;
  report["expected_reduced_period"] = expected_reduced_period(cfg.params);
  report["trials"] = trials;
  report["returned_at_T"] = returned;
  report["generic_at_T/2"] = generic;
  report["generic_required"] = half ? 0 : generic_needed;
  report["returned_at_T/2"] = half_returned;
  report["config"] = config_to_json(cfg);
  write_json(out, "period.json", report);
  return {pass ? kExitOk : kExitPeriod, report};
}

CommandResult cmd_rank(const ExperimentConfig& cfg, const fs::path& out, int) {
  fs::create_directories(out);
  if (cfg.params.family == Family::LieA)
    throw Error(ErrorKind::InvalidConfig, "rank is computed for the symplectic families (GibbonsHermsen, BnType)");
  const ReducedState point = initial_state(cfg, cfg.seed);
  SaturationOptions so;
  so.min_len = cfg.min_len;
  so.max_len = cfg.max_len;
  so.pool.alphabet = cfg.pool_alphabet;
  so.rank.fd_step = cfg.tolerances.fd_step;
  so.rank.svd_tol = cfg.tolerances.svd_tol;
  so.rank.min_gap = cfg.tolerances.rank_gap;
  const SaturationReport sat = saturate_rank(point, cfg.params, so);

  // Same pool at a re-gauged chart.
  const int final_len = sat.steps.back().max_len;
  const std::vector<InvariantWord> pool = generate_pool(final_len, cfg.params, so.pool);
  RankOptions regauged = so.rank;
  regauged.chart_seed = cfg.seed * 2654435761ULL + 1;
  const RankReport alt = rank_of_invariants(pool, point, cfg.params, regauged);

  json report = to_json(sat);
  report["command"] = "rank";
  report["status"] = "ok";
  report["maximal"] = sat.rank == sat.dimension - 1;
  report["regauged_rank"] = alt.rank;
  report["regauged_gap_ratio"] = std::isfinite(alt.gap_ratio) ? json(alt.gap_ratio) : json(nullptr);
  report["stable_under_regauge"] = alt.rank == sat.rank;
  json alphabet = json::array();
  for (const Letter& l : pool_alphabet(cfg.params, so.pool)) alphabet.push_back(l.to_string());
  json words = json::array();
  for (const InvariantWord& w : pool) words.push_back(w.to_string());
  report["pool"] = {{"alphabet", alphabet}, {"max_len", final_len}, {"size", pool.size()}, {"words", words}};
  report["point"] = to_json(point);
  report["config"] = config_to_json(cfg);
  write_json(out, "rank.json", report);
  return {kExitOk, report};
}

CommandResult cmd_bracket_audit(const ExperimentConfig& cfg, const fs::path& out, int workers) {
  fs::create_directories(out);
  if (cfg.params.family != Family::LieA) throw Error(ErrorKind::InvalidConfig, "bracket-audit requires family LieA");
  std::vector<BracketAuditReport> parts(static_cast<std::size_t>(cfg.audit_points));
  parallel_for(cfg.audit_points, workers, [&](int i) {
    BracketAuditOptions o;
    o.points = 1;
    o.seed = cfg.seed + static_cast<std::uint64_t>(i);
    parts[static_cast<std::size_t>(i)] = audit_lie_bracket(cfg.params, o);
  });
  BracketAuditReport r;
  r.points = cfg.audit_points;
  for (const auto& p : parts) {
    r.r_matrix_inverse = std::max(r.r_matrix_inverse, p.r_matrix_inverse);
    r.r_matrix_antisymmetry = std::max(r.r_matrix_antisymmetry, p.r_matrix_antisymmetry);
    r.bracket_antisymmetry = std::max(r.bracket_antisymmetry, p.bracket_antisymmetry);
    r.canonical = std::max(r.canonical, p.canonical);
    r.jacobi = std::max(r.jacobi, p.jacobi);
    r.casimir = std::max(r.casimir, p.casimir);
  }
  const Tolerances& tol = cfg.tolerances;
  json checks = json::array();
  bool pass = true;
  auto check = [&](const char* name, double residual, double bound) {
    const bool ok = residual <= bound;
    pass = pass && ok;
    checks.push_back({{"name", name}, {"residual", residual}, {"tolerance", bound}, {"pass", ok}});
  };
  check("r_matrix_inverse", r.r_matrix_inverse, tol.r_matrix);
  check("r_matrix_antisymmetry", r.r_matrix_antisymmetry, tol.r_matrix);
  check("bracket_antisymmetry", r.bracket_antisymmetry, tol.canonical);
  check("canonical_pairs", r.canonical, tol.canonical);
  check("jacobi", r.jacobi, tol.bracket);
  check("casimir_tr_xi2", r.casimir, tol.casimir);

  json report;
  report["command"] = "bracket-audit";
  report["status"] = pass ? "pass" : "fail";
  report["residuals"] = to_json(r);
  report["checks"] = checks;
  report["config"] = config_to_json(cfg);
  write_json(out, "bracket_audit.json", report);
  return {pass ? kExitOk : kExitBracketAudit, report};
}

CommandResult cmd_validate(const json& doc, const fs::path& out) {
  fs::create_directories(out);
  json report;
  report["command"] = "validate";
  int code = kExitOk;
  if (!doc.is_object() || !doc.contains("params")) throw Error(ErrorKind::InvalidConfig, "config.params is required");
  const ModelParams params = params_from_json(doc.at("params"));
  const ValidationReport v = validate(params);
  json violations = json::array();
  for (const Violation& x : v.violations) violations.push_back({{"field", x.field}, {"message", x.message}});
  report["params"] = params_to_json(params);
  report["violations"] = violations;
  report["half_period_regime"] = v.half_period_regime;
  if (v.ok()) {
    report["period"] = period(params);
    report["expected_reduced_period"] = expected_reduced_period(params);
    if (params.family != Family::LieA) report["reduced_dimension"] = reduced_dimension(params);
    try {
      (void)config_from_json(doc);
    } catch (const Error& e) {
      violations.push_back({{"field", "config"}, {"message", e.what()}});
      report["violations"] = violations;
    }
  }
  const bool ok = report["violations"].empty();
  if (!ok) code = kExitConfig;
  report["status"] = ok ? "valid" : "invalid";
  write_json(out, "validation.json", report);
  return {code, report};
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::ConstraintViolation:
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::PhaseFixFailure:
    case ErrorKind::UnbalancedWord: return kExitConfig;
    case ErrorKind::ChamberBoundary: return kExitChamberBoundary;
    case ErrorKind::RankUnstable: return kExitRankUnstable;
    default: return kExitInternal;
  }
}

json diagnostics(const std::exception& e, int exit_code) {
  json d;
  d["status"] = "error";
  d["exit_code"] = exit_code;
  d["message"] = e.what();
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    d["kind"] = std::string(to_string(err->kind()));
    if (const auto* cb = dynamic_cast<const ChamberBoundaryError*>(err)) d["exit_time"] = cb->exit_time();
  } else {
    d["kind"] = "Internal";
  }
  return d;
}

CommandResult run_command(const std::string& name, json doc, const fs::path& out,
                          std::optional<std::uint64_t> seed_override, int workers) {
  CommandResult res;
  try {
    if (!doc.is_object()) throw Error(ErrorKind::InvalidConfig, "config must be a JSON object");
    if (seed_override) doc["seed"] = *seed_override;
    if (name == "validate") return cmd_validate(doc, out);
    const ExperimentConfig cfg = config_from_json(doc);
    if (name == "simulate") return cmd_simulate(cfg, out, workers);
    if (name == "verify-period") return cmd_verify_period(cfg, out, workers);
    if (name == "rank") return cmd_rank(cfg, out, workers);
    if (name == "bracket-audit") return cmd_bracket_audit(cfg, out, workers);
    throw Error(ErrorKind::InvalidConfig, "unknown command '" + name + "'");
  } catch (const Error& e) {
    res.exit_code = exit_code_for(e.kind());
    res.report = diagnostics(e, res.exit_code);
  } catch (const json::exception& e) {
    res.exit_code = kExitConfig;
    res.report = diagnostics(e, res.exit_code);
  } catch (const std::exception& e) {
    res.exit_code = kExitInternal;
    res.report = diagnostics(e, res.exit_code);
  }
  res.report["command"] = name;
  try {
    fs::create_directories(out);
    write_file_atomic(out / "error.json", res.report.dump(2) + "\n");
  } catch (const std::exception&) {
    // Diagnostics still go to stdout.
  }
  return res;
}

int workers_from_env() {
  const char* v = std::getenv("ISOCM_WORKERS");
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1) return 1;
  return static_cast<int>(std::min(n, 64L));
}

}  // namespace isocm::cli
