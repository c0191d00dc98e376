#include "isocm/params.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "isocm/errors.hpp"

namespace isocm {

std::string_view to_string(Family family) {
  switch (family) {
    case Family::LieA: return "LieA";
    case Family::GibbonsHermsen: return "GibbonsHermsen";
    case Family::BnType: return "BnType";
  }
  return "Unknown";
}

Family family_from_string(std::string_view name) {
  if (name == "LieA") return Family::LieA;
  if (name == "GibbonsHermsen") return Family::GibbonsHermsen;
  if (name == "BnType") return Family::BnType;
  throw Error(ErrorKind::InvalidConfig, "unknown family '" + std::string(name) + "'");
}

namespace {

// c1/c2 = -1 + 1/k  <=>  1/(c1/c2 + 1) = k.
bool is_excluded_ratio(double c1, double c2, const ValidationOptions& opts) {
  const double ratio = c1 / c2;
  const double denom = ratio + 1.0;
  if (denom == 0.0) return false;  // k -> infinity; c1 + c2 = 0 is reported on its own
  const double m = 1.0 / denom;
  if (!std::isfinite(m)) return false;
  const double k = std::round(m);
  if (std::abs(k) > static_cast<double>(opts.ratio_bound)) return false;
  if (k == 0.0 || k == 1.0) return false;
  return std::abs(m - k) <= opts.ratio_rel_tol * std::max(1.0, std::abs(m));
}

}  // namespace

ValidationReport validate(const ModelParams& p, const ValidationOptions& opts) {
  ValidationReport report;
  auto fail = [&](std::string field, std::string msg) {
    report.violations.push_back({std::move(field), std::move(msg)});
  };

  if (!(p.omega > 0.0) || !std::isfinite(p.omega)) fail("omega", "must be a positive finite number");
  if (p.n < 1) fail("n", "must be at least 1");

  switch (p.family) {
    case Family::LieA:
      break;
    case Family::GibbonsHermsen:
      if (!(p.c > 0.0) || !std::isfinite(p.c)) fail("c", "moment level must be a positive constant");
      if (p.ell < 1) fail("ell", "must be at least 1");
      break;
    case Family::BnType:
      if (p.ell1 < 0) fail("ell1", "must be non-negative");
      if (p.ell2 < 0) fail("ell2", "must be non-negative");
      if (p.ell1 + p.ell2 <= 0) fail("ell1+ell2", "at least one spin column is required");
      if (!std::isfinite(p.c1) || !std::isfinite(p.c2)) {
        fail("c1,c2", "must be finite");
        break;
      }
      if (!(p.c1 + p.c2 > 0.0)) fail("c1+c2", "must be positive");
      if (p.c1 * p.c2 == 0.0) fail("c1*c2", "must be non-zero");
      else if (is_excluded_ratio(p.c1, p.c2, opts))
        fail("c1/c2", "equals -1 + 1/k for an integer k outside {0, 1}; the gauge action is not free");
      break;
  }
  report.half_period_regime = half_period_regime(p);
  return report;
}

double period(const ModelParams& p) { return 2.0 * std::numbers::pi / p.omega; }

bool half_period_regime(const ModelParams& p) {
  return (p.family == Family::BnType && p.ell2 == 0) || (p.family == Family::LieA && p.n == 2);
}

double expected_reduced_period(const ModelParams& p) {
  return half_period_regime(p) ? 0.5 * period(p) : period(p);
}

int reduced_dimension(const ModelParams& p) {
  switch (p.family) {
    case Family::GibbonsHermsen: return 2 * p.n * p.ell;
    case Family::BnType: return 2 * p.n * (p.ell1 + p.ell2);
    case Family::LieA: break;
  }
  throw Error(ErrorKind::InvalidConfig, "reduced dimension is only defined for GibbonsHermsen and BnType");
}

ModelParams params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidConfig, "params must be a JSON object");
  static const std::set<std::string> known = {"family", "omega", "n", "ell", "ell1", "ell2", "c", "c1", "c2"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error(ErrorKind::InvalidConfig, "unknown params key '" + key + "'");
  }
  ModelParams p;
  try {
    if (!j.contains("family")) throw Error(ErrorKind::InvalidConfig, "params.family is required");
    p.family = family_from_string(j.at("family").get<std::string>());
    auto read_real = [&](const char* key, double& dst) {
      if (!j.contains(key)) return;
      if (!j.at(key).is_number()) throw Error(ErrorKind::InvalidConfig, std::string("params.") + key + " must be a number");
      dst = j.at(key).get<double>();
    };
    auto read_int = [&](const char* key, int& dst) {
      if (!j.contains(key)) return;
      if (!j.at(key).is_number_integer())
        throw Error(ErrorKind::InvalidConfig, std::string("params.") + key + " must be an integer");
      dst = j.at(key).get<int>();
    };
    read_real("omega", p.omega);
    read_int("n", p.n);
    read_int("ell", p.ell);
    read_int("ell1", p.ell1);
    read_int("ell2", p.ell2);
    read_real("c", p.c);
    read_real("c1", p.c1);
    read_real("c2", p.c2);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, e.what());
  }
  return p;
}

nlohmann::json params_to_json(const ModelParams& p) {
  nlohmann::json j;
  j["family"] = std::string(to_string(p.family));
  j["omega"] = p.omega;
  j["n"] = p.n;
  switch (p.family) {
    case Family::LieA:
      break;
    case Family::GibbonsHermsen:
      j["ell"] = p.ell;
      j["c"] = p.c;
      break;
    case Family::BnType:
      j["ell1"] = p.ell1;
      j["ell2"] = p.ell2;
      j["c1"] = p.c1;
      j["c2"] = p.c2;
      break;
  }
  return j;
}

}  // namespace isocm
