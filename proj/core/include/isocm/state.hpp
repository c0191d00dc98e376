#pragma once

#include <variant>

#include "isocm/linalg.hpp"

namespace isocm {

// ---------------------------------------------------------------------------
// Unreduced (matrix oscillator) states
// ---------------------------------------------------------------------------

/// Point (X, Y, zeta) of Herm(n) x Herm(n) x C^{n x ell}.
/// X and Y are Hermitian-symmetrized on construction.
struct UnreducedStateGH {
  CMatrix X;
  CMatrix Y;
  CMatrix zeta;

  UnreducedStateGH() = default;
  UnreducedStateGH(const CMatrix& X_, const CMatrix& Y_, CMatrix zeta_);

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index ell() const { return zeta.cols(); }
};

/// Point (x, y, zeta, eta) of the U(n,n) model. The 2n x 2n matrices are
///   X = [[0, x], [x^dagger, 0]],  Y = [[0, y], [y^dagger, 0]].
struct UnreducedStateBn {
  CMatrix x;
  CMatrix y;
  CMatrix zeta;  // n x ell1
  CMatrix eta;   // n x ell2 (may have zero columns)

  Eigen::Index n() const { return x.rows(); }
};

/// Point (X, Y) of the matrix oscillator underlying the Lie-algebraic model.
/// For sl(n) data both matrices are traceless Hermitian.
struct UnreducedStateLie {
  CMatrix X;
  CMatrix Y;

  UnreducedStateLie() = default;
  UnreducedStateLie(const CMatrix& X_, const CMatrix& Y_);

  Eigen::Index n() const { return X.rows(); }
};

// ---------------------------------------------------------------------------
// Reduced (gauge-fixed) states
// ---------------------------------------------------------------------------

/// q strictly decreasing, |zeta_j|^2 = c, dominant component of each zeta row real positive.
struct ReducedStateGH {
  RVector q;
  RVector p;
  CMatrix zeta;
};

/// q strictly decreasing and positive, |zeta_j|^2 + |eta_j|^2 = c1 + c2,
/// dominant component of each concatenated row (zeta_j, eta_j) real positive.
struct ReducedStateBn {
  RVector q;
  RVector p;
  CMatrix zeta;
  CMatrix eta;
};

/// (q, p, xi) with xi anti-Hermitian and zero on the diagonal.
struct ReducedStateLie {
  RVector q;
  RVector p;
  CMatrix xi;
};

using ReducedState = std::variant<ReducedStateGH, ReducedStateBn, ReducedStateLie>;
using UnreducedState = std::variant<UnreducedStateGH, UnreducedStateBn, UnreducedStateLie>;

}  // namespace isocm
