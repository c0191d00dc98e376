#pragma once

#include <functional>
#include <span>
#include <vector>

#include "isocm/linalg.hpp"

namespace isocm {

struct DormandPrinceOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  /// Initial step; 0 selects one automatically.
  double h_init = 0.0;
  /// Smallest admissible step relative to max(1, |t_end - t0|).
  double h_min_rel = 1e-13;
  long max_steps = 5'000'000;
  /// Keep per-step error estimates and sizes in IntegrationStats.
  bool record_steps = true;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  std::vector<double> step_sizes;
  std::vector<double> step_errors;  // scaled error norm of each accepted step (<= 1)
};

using OdeRhs = std::function<void(double t, const RVector& y, RVector& dydt)>;
/// Called after every accepted step; may throw to abort the integration.
using StepObserver = std::function<void(double t, const RVector& y)>;

/// Adaptive Dormand-Prince 5(4) integration with Hairer's continuous extension.
/// Returns the solution at each requested sample time (non-decreasing, >= t0).
///
/// A ChamberBoundaryError thrown by the right-hand side is treated as a failed trial
/// step; if the step size collapses below the minimum it is rethrown with the exit time.
std::vector<RVector> integrate_dopri5(const OdeRhs& rhs, const RVector& y0, double t0,
                                      std::span<const double> sample_times, const DormandPrinceOptions& opts,
                                      IntegrationStats* stats = nullptr, const StepObserver& observer = {});

}  // namespace isocm
