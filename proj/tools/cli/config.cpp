#include "config.hpp"

#include <cmath>
#include <set>

#include "isocm/errors.hpp"

namespace isocm::cli {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, msg); }

void check_keys(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) fail(where + " must be a JSON object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) fail("unknown " + where + " key '" + key + "'");
}

double read_positive(const nlohmann::json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) fail(where + "." + key + " must be a number");
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) fail(where + "." + key + " must be positive and finite");
  return v;
}

int read_int(const nlohmann::json& j, const char* key, int fallback, int minimum) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer()) fail(std::string(key) + " must be an integer");
  const auto v = j.at(key).get<long long>();
  if (v < minimum || v > 1'000'000'000) fail(std::string(key) + " must be >= " + std::to_string(minimum));
  return static_cast<int>(v);
}

}  // namespace

double ExperimentConfig::resolved_t_end() const { return t_end ? *t_end : period(params); }

ExperimentConfig config_from_json(const nlohmann::json& j) {
  check_keys(j,
             {"params", "seed", "initial_condition", "sample_count", "t_end", "trials", "tolerances", "min_len",
              "max_len", "pool_alphabet", "audit_points"},
             "config");
  ExperimentConfig cfg;
  if (!j.contains("params")) fail("config.params is required");
  cfg.params = params_from_json(j.at("params"));
  const ValidationReport report = validate(cfg.params);
  if (!report.ok()) {
    std::string msg = "invalid params:";
    for (const Violation& v : report.violations) msg += " " + v.field + ": " + v.message + ";";
    fail(msg);
  }

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !(j.at("seed").is_number_integer() && j.at("seed").get<long long>() >= 0))
      fail("seed must be a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("initial_condition")) {
    const auto& ic = j.at("initial_condition");
    if (ic.is_string()) {
      if (ic.get<std::string>() != "random") fail("initial_condition must be \"random\" or a reduced state object");
    } else if (ic.is_object()) {
      cfg.initial_state = ic;
    } else {
      fail("initial_condition must be \"random\" or a reduced state object");
    }
  }
  cfg.sample_count = read_int(j, "sample_count", cfg.sample_count, 2);
  if (j.contains("t_end")) {
    if (!j.at("t_end").is_number()) fail("t_end must be a number");
    const double t = j.at("t_end").get<double>();
    if (!(t > 0.0) || !std::isfinite(t)) fail("t_end must be positive");
    cfg.t_end = t;
  }
  cfg.trials = read_int(j, "trials", cfg.trials, 1);
  cfg.min_len = read_int(j, "min_len", cfg.min_len, 2);
  cfg.max_len = read_int(j, "max_len", cfg.max_len, 2);
  if (cfg.max_len < cfg.min_len) fail("max_len must be >= min_len");
  if (cfg.max_len > 8) fail("max_len above 8 is not supported (pool size grows exponentially)");
  cfg.audit_points = read_int(j, "audit_points", cfg.audit_points, 1);
  if (j.contains("pool_alphabet")) {
    if (!j.at("pool_alphabet").is_string()) fail("pool_alphabet must be a string");
    const std::string a = j.at("pool_alphabet").get<std::string>();
    if (a == "resolved") cfg.pool_alphabet = PoolAlphabet::Resolved;
    else if (a == "aggregate") cfg.pool_alphabet = PoolAlphabet::Aggregate;
    else fail("pool_alphabet must be \"resolved\" or \"aggregate\"");
  }
  if (j.contains("tolerances")) {
    const auto& t = j.at("tolerances");
    check_keys(t,
               {"integrator", "period", "genericity_floor", "genericity_fraction", "fd_step", "svd_tol", "rank_gap",
                "bracket", "canonical", "casimir", "r_matrix"},
               "tolerances");
    Tolerances& tol = cfg.tolerances;
    tol.integrator = read_positive(t, "integrator", tol.integrator, "tolerances");
    tol.period = read_positive(t, "period", tol.period, "tolerances");
    tol.genericity_floor = read_positive(t, "genericity_floor", tol.genericity_floor, "tolerances");
    tol.genericity_fraction = read_positive(t, "genericity_fraction", tol.genericity_fraction, "tolerances");
    if (tol.genericity_fraction > 1.0) fail("tolerances.genericity_fraction must be <= 1");
    tol.fd_step = read_positive(t, "fd_step", tol.fd_step, "tolerances");
    tol.svd_tol = read_positive(t, "svd_tol", tol.svd_tol, "tolerances");
    tol.rank_gap = read_positive(t, "rank_gap", tol.rank_gap, "tolerances");
    tol.bracket = read_positive(t, "bracket", tol.bracket, "tolerances");
    tol.canonical = read_positive(t, "canonical", tol.canonical, "tolerances");
    tol.casimir = read_positive(t, "casimir", tol.casimir, "tolerances");
    tol.r_matrix = read_positive(t, "r_matrix", tol.r_matrix, "tolerances");
  }
  if (cfg.initial_state && cfg.trials != 1) fail("trials must be 1 with an explicit initial_condition");
  return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["params"] = params_to_json(cfg.params);
  j["seed"] = cfg.seed;
  j["initial_condition"] = cfg.initial_state ? *cfg.initial_state : nlohmann::json("random");
  j["sample_count"] = cfg.sample_count;
  j["t_end"] = cfg.resolved_t_end();
  j["trials"] = cfg.trials;
  j["min_len"] = cfg.min_len;
  j["max_len"] = cfg.max_len;
  j["pool_alphabet"] = cfg.pool_alphabet == PoolAlphabet::Resolved ? "resolved" : "aggregate";
  j["audit_points"] = cfg.audit_points;
  const Tolerances& t = cfg.tolerances;
  j["tolerances"] = {{"integrator", t.integrator}, {"period", t.period},
                     {"genericity_floor", t.genericity_floor}, {"genericity_fraction", t.genericity_fraction},
                     {"fd_step", t.fd_step}, {"svd_tol", t.svd_tol}, {"rank_gap", t.rank_gap},
                     {"bracket", t.bracket}, {"canonical", t.canonical}, {"casimir", t.casimir},
                     {"r_matrix", t.r_matrix}};
  return j;
}

}  // namespace isocm::cli
