#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "isocm/gauge.hpp"
#include "isocm/integrator.hpp"
#include "isocm/linalg.hpp"
#include "isocm/params.hpp"
#include "isocm/state.hpp"

namespace isocm {

/// Sign sigma in the spin equations zeta_dot_j = -i sigma dH/d(conj zeta_j).
/// Fixed by comparing integrated trajectories with the projected oscillator flow.
inline constexpr double kSpinFlowSign = 1.0;

/// H = 1/2 sum (p^2 + omega^2 q^2) + sum_{j<k} |zeta_j zeta_k^dagger|^2 / (q_j - q_k)^2.
double H_spin_GH(const ReducedStateGH& s, double omega);

/// H = 1/2 sum [p^2 + omega^2 q^2 + (c2 - |eta_j|^2)^2 / q_j^2]
///   + 1/2 sum_{j != k} [ |A+B|_jk^2 / (q_j - q_k)^2 + |A-B|_jk^2 / (q_j + q_k)^2 ],
/// with A = zeta zeta^dagger and B = eta eta^dagger.
double H_Bn(const ReducedStateBn& s, double omega, double c2);

/// Reduced Hamiltonian for the family of `params`.
double reduced_hamiltonian(const ReducedStateGH& s, const ModelParams& params);
double reduced_hamiltonian(const ReducedStateBn& s, const ModelParams& params);
double reduced_hamiltonian(const ReducedStateLie& s, const ModelParams& params);
double reduced_hamiltonian(const ReducedState& s, const ModelParams& params);

struct EomOptions {
  double spin_sign = kSpinFlowSign;
  /// Chamber margin relative to max(1, max|q|).
  double chamber_margin = 1e-6;
};

/// Velocity field at a reduced state. For the Lie family `spin_dot` holds xi_dot and
/// `spin2_dot` is empty; for GH `spin2_dot` is empty.
struct Tangent {
  RVector q_dot;
  RVector p_dot;
  CMatrix spin_dot;
  CMatrix spin2_dot;
};

Tangent eom(const ReducedStateGH& s, const ModelParams& params, const EomOptions& opts = {});
Tangent eom(const ReducedStateBn& s, const ModelParams& params, const EomOptions& opts = {});
Tangent eom(const ReducedStateLie& s, const ModelParams& params, const EomOptions& opts = {});

/// Flat real coordinates: q, p, then spin entries as (re, im) pairs in row-major order
/// (zeta then eta; for Lie the strict upper triangle of xi).
RVector pack(const ReducedStateGH& s);
RVector pack(const ReducedStateBn& s);
RVector pack(const ReducedStateLie& s);
RVector pack(const Tangent& t, Family family);
void unpack(const RVector& v, ReducedStateGH& s);
void unpack(const RVector& v, ReducedStateBn& s);
void unpack(const RVector& v, ReducedStateLie& s);

struct SampleFailure {
  double t = 0.0;
  std::string kind;
  std::string message;
};

template <class State>
struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> energy;
  std::vector<double> constraint_residual;
  IntegrationStats stats;
  /// Samples that could not be produced (project_flow only).
  std::vector<SampleFailure> failures;

  /// max |E(t) - E(0)| / max(1, |E(0)|).
  double energy_drift() const {
    double d = 0.0;
    for (double e : energy) d = std::max(d, std::abs(e - energy.front()));
    return energy.empty() ? 0.0 : d / std::max(1.0, std::abs(energy.front()));
  }
  double max_constraint_residual() const {
    double r = 0.0;
    for (double x : constraint_residual) r = std::max(r, x);
    return r;
  }
};

struct IntegrateOptions {
  /// Bound on the local error per step.
  double tol = 1e-10;
  /// The step controller targets tol * local_safety so that error accumulated over a
  /// period of several hundred steps stays near tol.
  double local_safety = 0.05;
  EomOptions eom;
  long max_steps = 5'000'000;
};

/// Uniform grid 0, t_end/(count-1), ..., t_end; {0} when t_end == 0 or count == 1.
std::vector<double> uniform_grid(double t_end, int count);

/// Integrates the reduced equations of motion and samples at `sample_times`
/// (non-decreasing, starting at or after 0). Stored states are phase-fixed.
Trajectory<ReducedStateGH> integrate(const ReducedStateGH& s0, const ModelParams& params,
                                     const std::vector<double>& sample_times, const IntegrateOptions& opts = {});
Trajectory<ReducedStateBn> integrate(const ReducedStateBn& s0, const ModelParams& params,
                                     const std::vector<double>& sample_times, const IntegrateOptions& opts = {});
Trajectory<ReducedStateLie> integrate(const ReducedStateLie& s0, const ModelParams& params,
                                      const std::vector<double>& sample_times, const IntegrateOptions& opts = {});

/// Convenience form sampling a uniform grid with `sample_count` points on [0, t_end].
template <class State>
Trajectory<State> integrate(const State& s0, const ModelParams& params, double t_end, double tol,
                            int sample_count = 2) {
  IntegrateOptions opts;
  opts.tol = tol;
  return integrate(s0, params, uniform_grid(t_end, sample_count), opts);
}

/// project(exact_flow(s0, t)) at each sample time. A DegenerateSpectrum (or other
/// projection failure) at one sample is recorded in `failures` and sampling continues.
Trajectory<ReducedStateGH> project_flow(const UnreducedStateGH& s0, const ModelParams& params,
                                        const std::vector<double>& sample_times);
Trajectory<ReducedStateBn> project_flow(const UnreducedStateBn& s0, const ModelParams& params,
                                        const std::vector<double>& sample_times);
Trajectory<ReducedStateLie> project_flow(const UnreducedStateLie& s0, const ModelParams& params,
                                         const std::vector<double>& sample_times);

/// Pointwise reduced_distance between two trajectories sampled on the same grid. Times present
/// in only one of them (failed projections) are skipped. Entries are (t, distance).
template <class State>
std::vector<std::pair<double, double>> compare_trajectories(const Trajectory<State>& a, const Trajectory<State>& b) {
  std::vector<std::pair<double, double>> out;
  std::size_t j = 0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    while (j < b.times.size() && b.times[j] < a.times[i]) ++j;
    if (j < b.times.size() && b.times[j] == a.times[i])
      out.emplace_back(a.times[i], reduced_distance(a.states[i], b.states[j]));
  }
  return out;
}

}  // namespace isocm
