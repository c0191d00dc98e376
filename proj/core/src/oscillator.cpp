#include "isocm/oscillator.hpp"

#include <cmath>
#include <string>

#include "isocm/errors.hpp"

namespace isocm {

namespace {

void require_square_pair(const CMatrix& a, const CMatrix& b, const char* what) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": position/momentum blocks must be equal square matrices");
}

double pair_gap_scale(const RVector& q, double rel_tol) { return rel_tol * max_abs(q); }

void check_distinct(const RVector& q, double rel_tol, const char* what) {
  const double tol = pair_gap_scale(q, rel_tol);
  for (Eigen::Index j = 0; j < q.size(); ++j) {
    for (Eigen::Index k = j + 1; k < q.size(); ++k) {
      if (std::abs(q(j) - q(k)) <= tol)
        throw Error(ErrorKind::DegenerateSpectrum, std::string(what) + ": q_" + std::to_string(j + 1) + " and q_" +
                                                       std::to_string(k + 1) + " coincide within tolerance");
    }
  }
}

}  // namespace

UnreducedStateGH::UnreducedStateGH(const CMatrix& X_, const CMatrix& Y_, CMatrix zeta_)
    : X(hermitian_part(X_)), Y(hermitian_part(Y_)), zeta(std::move(zeta_)) {
  require_square_pair(X_, Y_, "UnreducedStateGH");
  if (zeta.rows() != X.rows()) throw Error(ErrorKind::DimensionMismatch, "UnreducedStateGH: zeta must have n rows");
}

UnreducedStateLie::UnreducedStateLie(const CMatrix& X_, const CMatrix& Y_)
    : X(hermitian_part(X_)), Y(hermitian_part(Y_)) {
  require_square_pair(X_, Y_, "UnreducedStateLie");
}

OscCoordinate to_osc(const CMatrix& X, const CMatrix& Y, double omega) { return {omega * X - kI * Y}; }

std::pair<CMatrix, CMatrix> from_osc(const OscCoordinate& z, double omega) {
  const CMatrix zd = z.Z.adjoint();
  CMatrix X = (z.Z + zd) / (2.0 * omega);
  CMatrix Y = (kI * 0.5) * (z.Z - zd);
  return {hermitian_part(X), hermitian_part(Y)};
}

CMatrix block_offdiag(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  CMatrix out = CMatrix::Zero(2 * n, 2 * n);
  out.topRightCorner(n, n) = a;
  out.bottomLeftCorner(n, n) = a.adjoint();
  return out;
}

OscCoordinate to_osc(const UnreducedStateGH& s, double omega) { return to_osc(s.X, s.Y, omega); }
OscCoordinate to_osc(const UnreducedStateLie& s, double omega) { return to_osc(s.X, s.Y, omega); }
OscCoordinate to_osc(const UnreducedStateBn& s, double omega) {
  return to_osc(block_offdiag(s.x), block_offdiag(s.y), omega);
}

OscCoordinate exact_flow(const OscCoordinate& z0, double t, double omega) {
  return {std::polar(1.0, omega * t) * z0.Z};
}

UnreducedStateGH exact_flow(const UnreducedStateGH& s, double t, double omega) {
  auto [X, Y] = from_osc(exact_flow(to_osc(s, omega), t, omega), omega);
  return UnreducedStateGH(X, Y, s.zeta);
}

UnreducedStateLie exact_flow(const UnreducedStateLie& s, double t, double omega) {
  auto [X, Y] = from_osc(exact_flow(to_osc(s, omega), t, omega), omega);
  return UnreducedStateLie(X, Y);
}

UnreducedStateBn exact_flow(const UnreducedStateBn& s, double t, double omega) {
  auto [X, Y] = from_osc(exact_flow(to_osc(s, omega), t, omega), omega);
  const Eigen::Index n = s.n();
  return UnreducedStateBn{X.topRightCorner(n, n), Y.topRightCorner(n, n), s.zeta, s.eta};
}

double energy(const UnreducedStateGH& s, double omega) {
  return 0.5 * (s.Y * s.Y).trace().real() + 0.5 * omega * omega * (s.X * s.X).trace().real();
}

double energy(const UnreducedStateLie& s, double omega) {
  return 0.5 * (s.Y * s.Y).trace().real() + 0.5 * omega * omega * (s.X * s.X).trace().real();
}

double energy(const UnreducedStateBn& s, double omega) {
  // tr(X^2) = 2 tr(x x^dagger) for the block off-diagonal embedding.
  return s.y.squaredNorm() + omega * omega * s.x.squaredNorm();
}

CMatrix moment_map_GH(const UnreducedStateGH& s) {
  return commutator(s.X, s.Y) + kI * (s.zeta * s.zeta.adjoint());
}

std::pair<CMatrix, CMatrix> moment_map_Bn(const UnreducedStateBn& s) {
  CMatrix j1 = s.x * s.y.adjoint() - s.y * s.x.adjoint() + kI * (s.zeta * s.zeta.adjoint());
  CMatrix j2 = s.x.adjoint() * s.y - s.y.adjoint() * s.x + kI * (s.eta * s.eta.adjoint());
  return {std::move(j1), std::move(j2)};
}

CMatrix moment_map_Lie(const UnreducedStateLie& s) { return commutator(s.X, s.Y); }

UnreducedStateGH build_slice_Y(const RVector& q, const RVector& p, const CMatrix& zeta, double c,
                               const SliceOptions& opts) {
  const Eigen::Index n = q.size();
  if (p.size() != n || zeta.rows() != n)
    throw Error(ErrorKind::DimensionMismatch, "build_slice_Y: q, p and zeta must describe the same n");
  check_distinct(q, opts.gap_rel_tol, "build_slice_Y");
  const double ctol = opts.constraint_tol * std::max(1.0, std::abs(c));
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm2 = zeta.row(j).squaredNorm();
    if (std::abs(norm2 - c) > ctol)
      throw Error(ErrorKind::ConstraintViolation, "build_slice_Y: |zeta_" + std::to_string(j + 1) +
                                                      "|^2 = " + std::to_string(norm2) + " differs from c");
  }

  const CMatrix gram = zeta * zeta.adjoint();  // (zeta_j zeta_k^dagger)
  CMatrix Y = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Y(j, j) = p(j);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k != j) Y(j, k) = -kI * gram(j, k) / (q(j) - q(k));
    }
  }
  CMatrix X = CMatrix::Zero(n, n);
  X.diagonal() = q.cast<cplx>();
  return UnreducedStateGH(X, Y, zeta);
}

UnreducedStateBn build_slice_y_Bn(const RVector& q, const RVector& p, const CMatrix& zeta, const CMatrix& eta,
                                  double c1, double c2, const SliceOptions& opts) {
  const Eigen::Index n = q.size();
  if (p.size() != n || zeta.rows() != n || eta.rows() != n)
    throw Error(ErrorKind::DimensionMismatch, "build_slice_y_Bn: q, p, zeta, eta must describe the same n");

  const double tol = pair_gap_scale(q, opts.gap_rel_tol);
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(q(j)) <= tol)
      throw Error(ErrorKind::DegenerateSpectrum, "build_slice_y_Bn: q_" + std::to_string(j + 1) + " vanishes");
    for (Eigen::Index k = j + 1; k < n; ++k) {
      if (std::abs(q(j) - q(k)) <= tol || std::abs(q(j) + q(k)) <= tol)
        throw Error(ErrorKind::DegenerateSpectrum, "build_slice_y_Bn: q_j +/- q_k vanishes for j=" +
                                                       std::to_string(j + 1) + ", k=" + std::to_string(k + 1));
    }
  }

  const double c = c1 + c2;
  const double ctol = opts.constraint_tol * std::max(1.0, std::abs(c));
  for (Eigen::Index j = 0; j < n; ++j) {
    const double norm2 = zeta.row(j).squaredNorm() + eta.row(j).squaredNorm();
    if (std::abs(norm2 - c) > ctol)
      throw Error(ErrorKind::ConstraintViolation, "build_slice_y_Bn: row " + std::to_string(j + 1) +
                                                      " has |zeta|^2 + |eta|^2 = " + std::to_string(norm2) +
                                                      ", expected c1 + c2");
  }

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const CMatrix a = zeta * zeta.adjoint();
  const CMatrix b = eta * eta.adjoint();
  CMatrix y = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double eta2 = eta.row(j).squaredNorm();
    y(j, j) = inv_sqrt2 * cplx(p(j), (c2 - eta2) / q(j));
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      y(j, k) = -kI * inv_sqrt2 * (a(j, k) + b(j, k)) / (q(j) - q(k)) +
                kI * inv_sqrt2 * (a(j, k) - b(j, k)) / (q(j) + q(k));
    }
  }
  CMatrix x = CMatrix::Zero(n, n);
  x.diagonal() = (q * inv_sqrt2).cast<cplx>();
  return UnreducedStateBn{std::move(x), std::move(y), zeta, eta};
}

UnreducedStateGH apply_gauge(const UnreducedStateGH& s, const CMatrix& g) {
  const CMatrix gi = g.adjoint();
  return UnreducedStateGH(g * s.X * gi, g * s.Y * gi, g * s.zeta);
}

UnreducedStateBn apply_gauge(const UnreducedStateBn& s, const CMatrix& g1, const CMatrix& g2) {
  const CMatrix g2i = g2.adjoint();
  return UnreducedStateBn{g1 * s.x * g2i, g1 * s.y * g2i, g1 * s.zeta, g2 * s.eta};
}

UnreducedStateLie apply_gauge(const UnreducedStateLie& s, const CMatrix& g) {
  const CMatrix gi = g.adjoint();
  return UnreducedStateLie(g * s.X * gi, g * s.Y * gi);
}

UnreducedStateGH randomize_gauge(const UnreducedStateGH& s, std::uint64_t seed) {
  Rng rng(seed);
  return apply_gauge(s, random_unitary(s.n(), rng));
}

UnreducedStateBn randomize_gauge(const UnreducedStateBn& s, std::uint64_t seed) {
  Rng rng(seed);
  const CMatrix g1 = random_unitary(s.n(), rng);
  const CMatrix g2 = random_unitary(s.n(), rng);
  return apply_gauge(s, g1, g2);
}

UnreducedStateLie randomize_gauge(const UnreducedStateLie& s, std::uint64_t seed) {
  Rng rng(seed);
  return apply_gauge(s, random_unitary(s.n(), rng));
}

}  // namespace isocm
