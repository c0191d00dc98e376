#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isocm/dynamics.hpp"
#include "isocm/params.hpp"
#include "isocm/state.hpp"

namespace isocm {

/// Shortest round-trip text for a double ("%.17g"); non-finite values print as nan/inf.
std::string format_double(double x);

/// Reduced states as JSON objects {"q": [...], "p": [...], "zeta": [[[re, im], ...], ...], ...}.
nlohmann::json to_json(const ReducedStateGH& s);
nlohmann::json to_json(const ReducedStateBn& s);
nlohmann::json to_json(const ReducedStateLie& s);
nlohmann::json to_json(const ReducedState& s);

/// Parses a reduced state for `params` and re-validates it: sizes, chamber ordering, spin
/// constraints (to `constraint_tol`) and, for LieA, anti-Hermitian zero-diagonal xi.
/// The result is phase-fixed. Throws InvalidConfig, DimensionMismatch, DegenerateSpectrum or
/// ConstraintViolation.
ReducedState reduced_state_from_json(const nlohmann::json& j, const ModelParams& params,
                                     double constraint_tol = 1e-10);

/// CSV header for a family: t, q1..qn, p1..pn, spin re/im interleaved row-major
/// (zeta then eta; the full xi matrix for LieA), energy, constraint_residual.
std::vector<std::string> csv_columns(const ModelParams& params);

std::string trajectory_csv(const Trajectory<ReducedStateGH>& traj, const ModelParams& params);
std::string trajectory_csv(const Trajectory<ReducedStateBn>& traj, const ModelParams& params);
std::string trajectory_csv(const Trajectory<ReducedStateLie>& traj, const ModelParams& params);

/// Two-column CSV "t,reduced_distance".
std::string distance_csv(const std::vector<std::pair<double, double>>& table);

/// Summary of a trajectory (sample count, energy drift, constraint residual, step statistics,
/// failures) without the state data.
template <class State>
nlohmann::json trajectory_summary(const Trajectory<State>& traj);

/// Writes through a temporary file in the same directory followed by a rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace isocm
