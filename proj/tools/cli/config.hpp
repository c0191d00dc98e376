#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "isocm/params.hpp"
#include "isocm/superint.hpp"

namespace isocm::cli {

struct Tolerances {
  double integrator = 1e-10;
  /// Return distance allowed at the period.
  double period = 1e-6;
  /// Minimum distance at T/2 for a trial to count as generic.
  double genericity_floor = 0.1;
  /// Fraction of trials that must clear the genericity floor.
  double genericity_fraction = 0.9;
  double fd_step = 1e-3;
  double svd_tol = 1e-8;
  double rank_gap = 1e3;
  /// Jacobi identity residual.
  double bracket = 1e-4;
  double canonical = 1e-8;
  double casimir = 1e-6;
  double r_matrix = 1e-12;
};

struct ExperimentConfig {
  ModelParams params;
  std::uint64_t seed = 0;
  /// Explicit reduced initial state; random (from `seed`) when empty.
  std::optional<nlohmann::json> initial_state;
  int sample_count = 201;
  /// One period 2 pi / omega when not given.
  std::optional<double> t_end;
  int trials = 1;
  Tolerances tolerances;
  int min_len = 2;
  int max_len = 6;
  PoolAlphabet pool_alphabet = PoolAlphabet::Resolved;
  int audit_points = 20;

  double resolved_t_end() const;
};

/// Parses and checks a configuration document. Unknown keys, ill-typed values, and violated
/// constraints (sample_count >= 2, t_end > 0, positive tolerances, invalid model parameters)
/// raise Error(InvalidConfig).
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace isocm::cli
