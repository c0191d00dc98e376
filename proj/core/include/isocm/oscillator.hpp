#pragma once

#include <utility>

#include "isocm/linalg.hpp"
#include "isocm/state.hpp"

namespace isocm {

/// Complex oscillator coordinate Z = omega X - i Y. For the B_n model Z is the full
/// 2n x 2n block matrix built from (x, y).
struct OscCoordinate {
  CMatrix Z;
};

OscCoordinate to_osc(const CMatrix& X, const CMatrix& Y, double omega);
/// Inverse of to_osc: X = (Z + Z^dagger) / (2 omega), Y = i (Z - Z^dagger) / 2.
std::pair<CMatrix, CMatrix> from_osc(const OscCoordinate& z, double omega);

/// Block embedding [[0, a], [a^dagger, 0]].
CMatrix block_offdiag(const CMatrix& a);

OscCoordinate to_osc(const UnreducedStateGH& s, double omega);
OscCoordinate to_osc(const UnreducedStateBn& s, double omega);
OscCoordinate to_osc(const UnreducedStateLie& s, double omega);

/// Oscillator flow: Z -> e^{i omega t} Z.
OscCoordinate exact_flow(const OscCoordinate& z0, double t, double omega);

/// Flow of a full state; spin matrices are left untouched.
UnreducedStateGH exact_flow(const UnreducedStateGH& s, double t, double omega);
UnreducedStateBn exact_flow(const UnreducedStateBn& s, double t, double omega);
UnreducedStateLie exact_flow(const UnreducedStateLie& s, double t, double omega);

/// (1/2) tr Y^2 + (1/2) omega^2 tr X^2 (B_n: traces over the 2n x 2n blocks).
double energy(const UnreducedStateGH& s, double omega);
double energy(const UnreducedStateBn& s, double omega);
double energy(const UnreducedStateLie& s, double omega);

/// [X, Y] + i zeta zeta^dagger (anti-Hermitian n x n).
CMatrix moment_map_GH(const UnreducedStateGH& s);
/// The two diagonal blocks x y^dagger - y x^dagger + i zeta zeta^dagger and
/// x^dagger y - y^dagger x + i eta eta^dagger.
std::pair<CMatrix, CMatrix> moment_map_Bn(const UnreducedStateBn& s);
/// [X, Y].
CMatrix moment_map_Lie(const UnreducedStateLie& s);

struct SliceOptions {
  /// Distinctness threshold for q: min |q_j - q_k| (and |q_j|, |q_j + q_k| for B_n)
  /// must exceed gap_rel_tol * max|q|.
  double gap_rel_tol = 1e-8;
  /// Row constraint tolerance, relative to max(1, |c|).
  double constraint_tol = 1e-10;
};

/// Gauge slice of the GH constraint surface:
///   X = diag(q),  Y_jk = p_j delta_jk - i (1 - delta_jk) zeta_j zeta_k^dagger / (q_j - q_k).
/// Requires distinct q and |zeta_j|^2 = c.
UnreducedStateGH build_slice_Y(const RVector& q, const RVector& p, const CMatrix& zeta, double c,
                               const SliceOptions& opts = {});

/// Diagonal gauge of the B_n model: x = diag(q)/sqrt(2) and y from the constraint J = mu_0.
UnreducedStateBn build_slice_y_Bn(const RVector& q, const RVector& p, const CMatrix& zeta, const CMatrix& eta,
                                  double c1, double c2, const SliceOptions& opts = {});

/// Applies g in U(n): (X, Y, zeta) -> (g X g^-1, g Y g^-1, g zeta).
UnreducedStateGH apply_gauge(const UnreducedStateGH& s, const CMatrix& g);
/// Applies (g1, g2) in U(n) x U(n): (x, y, zeta, eta) -> (g1 x g2^-1, g1 y g2^-1, g1 zeta, g2 eta).
UnreducedStateBn apply_gauge(const UnreducedStateBn& s, const CMatrix& g1, const CMatrix& g2);
UnreducedStateLie apply_gauge(const UnreducedStateLie& s, const CMatrix& g);

/// Random gauge transformation drawn from a seeded generator.
UnreducedStateGH randomize_gauge(const UnreducedStateGH& s, std::uint64_t seed);
UnreducedStateBn randomize_gauge(const UnreducedStateBn& s, std::uint64_t seed);
UnreducedStateLie randomize_gauge(const UnreducedStateLie& s, std::uint64_t seed);

}  // namespace isocm
