#pragma once

#include "isocm/linalg.hpp"
#include "isocm/params.hpp"
#include "isocm/state.hpp"

namespace isocm {

struct GaugeOptions {
  /// Moment-map residual allowed on input, relative to max(1, |c|).
  double constraint_tol = 1e-8;
  /// Eigenvalue / singular value separation, relative to max(1, largest |q|).
  double gap_rel_tol = 1e-8;
  /// Agreement of the transformed momentum block with the slice formulas.
  double slice_tol = 1e-8;
};

/// Multiplies each row of `spin` by a unit phase so that its largest-magnitude
/// component is real and positive (lowest index wins among ties within 1e-12).
/// Throws PhaseFixFailure on a numerically zero row.
void fix_row_phases(CMatrix& spin);

/// Same as fix_row_phases, applied jointly to the concatenated rows (zeta_j, eta_j).
void fix_row_phases(CMatrix& zeta, CMatrix& eta);

/// Conjugates xi by a diagonal unitary so that every superdiagonal entry
/// xi_{j,j+1} is real and non-negative. Entries below 1e-12 * max|xi| leave the
/// corresponding phase unfixed.
void fix_torus_gauge(CMatrix& xi);

/// Gauge fixing X = U diag(q) U^dagger, q strictly decreasing.
ReducedStateGH project_GH(const UnreducedStateGH& s, double c, const GaugeOptions& opts = {});

/// Gauge fixing via the SVD x = u diag(q/sqrt 2) v^dagger, q strictly decreasing and positive.
ReducedStateBn project_Bn(const UnreducedStateBn& s, double c1, double c2, const GaugeOptions& opts = {});

/// Gauge fixing for the Lie-algebraic model: diagonalize X, read p = diag(U^dagger Y U) and
/// xi = -[diag(q), U^dagger Y U], then fix the torus gauge of xi.
ReducedStateLie project_Lie(const UnreducedStateLie& s, const GaugeOptions& opts = {});

/// Re-embeds a reduced state on the slice (inverse of project up to gauge).
UnreducedStateGH embed(const ReducedStateGH& r, const ModelParams& params);
UnreducedStateBn embed(const ReducedStateBn& r, const ModelParams& params);
UnreducedStateLie embed(const ReducedStateLie& r, const ModelParams& params);

/// Canonical representative of a reduced state (sorted chamber coordinates are assumed;
/// only the residual phases are fixed).
ReducedStateGH canonicalize(ReducedStateGH r);
ReducedStateBn canonicalize(ReducedStateBn r);
ReducedStateLie canonicalize(ReducedStateLie r);

/// Gauge-invariant distance on the quotient:
///   max( max_j |q_j - q'_j|, max_j |p_j - p'_j|, max_j || s_j^dagger s_j - s'_j^dagger s'_j ||_F )
/// where s_j is the spin row (GH), the concatenated (zeta_j, eta_j) row (B_n). For the
/// Lie model the spin term is the entrywise max difference of torus-fixed xi.
double reduced_distance(const ReducedStateGH& a, const ReducedStateGH& b);
double reduced_distance(const ReducedStateBn& a, const ReducedStateBn& b);
double reduced_distance(const ReducedStateLie& a, const ReducedStateLie& b);
double reduced_distance(const ReducedState& a, const ReducedState& b);

/// Largest violation of the chamber/constraint invariants of a reduced state, or 0.
/// Returned as a residual rather than thrown so trajectories can record it.
double constraint_residual(const ReducedStateGH& r, const ModelParams& params);
double constraint_residual(const ReducedStateBn& r, const ModelParams& params);
double constraint_residual(const ReducedStateLie& r, const ModelParams& params);

}  // namespace isocm
