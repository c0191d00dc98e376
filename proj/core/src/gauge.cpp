#include "isocm/gauge.hpp"

#include <cmath>
#include <string>

#include "isocm/errors.hpp"
#include "isocm/oscillator.hpp"
#include "isocm/rootdata.hpp"

namespace isocm {

namespace {

constexpr double kPhaseTieTol = 1e-12;
constexpr double kZeroRow = 1e-14;

template <class Row>
Eigen::Index dominant_index(const Row& row) {
  const double m = row.cwiseAbs().maxCoeff();
  for (Eigen::Index a = 0; a < row.size(); ++a) {
    if (std::abs(row(a)) >= m - kPhaseTieTol * m) return a;
  }
  return 0;
}

void require_near_scalar(const CMatrix& j, double level, double tol, const char* what) {
  CMatrix diff = j;
  diff.diagonal().array() -= cplx(0.0, level);
  const double res = max_abs(diff);
  if (!(res <= tol))
    throw Error(ErrorKind::ConstraintViolation,
                std::string(what) + ": moment map deviates from its level by " + std::to_string(res));
}

struct SortedEigen {
  RVector q;
  CMatrix U;
};

SortedEigen decreasing_eigen(const CMatrix& X, double gap_rel_tol, const char* what) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(X);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::DegenerateSpectrum, std::string(what) + ": eigensolver failed");
  const Eigen::Index n = X.rows();
  SortedEigen out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    out.q(j) = es.eigenvalues()(n - 1 - j);
    out.U.col(j) = es.eigenvectors().col(n - 1 - j);
  }
  if (n > 1 && !(min_gap_decreasing(out.q) > gap_rel_tol * std::max(1.0, max_abs(out.q))))
    throw Error(ErrorKind::DegenerateSpectrum, std::string(what) + ": position matrix has a (near-)repeated eigenvalue");
  return out;
}

double spin_projector_distance(const CMatrix& a, const CMatrix& b) {
  double d = 0.0;
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    const CMatrix pa = a.row(j).adjoint() * a.row(j);
    const CMatrix pb = b.row(j).adjoint() * b.row(j);
    d = std::max(d, (pa - pb).norm());
  }
  return d;
}

CMatrix concat_cols(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace

void fix_row_phases(CMatrix& spin) {
  for (Eigen::Index j = 0; j < spin.rows(); ++j) {
    const double m = spin.row(j).cwiseAbs().maxCoeff();
    if (!(m > kZeroRow))
      throw Error(ErrorKind::PhaseFixFailure, "spin row " + std::to_string(j + 1) + " is numerically zero");
    const Eigen::Index a = dominant_index(spin.row(j));
    const cplx phase = std::conj(spin(j, a)) / std::abs(spin(j, a));
    spin.row(j) *= phase;
    spin(j, a) = std::abs(spin(j, a));
  }
}

void fix_row_phases(CMatrix& zeta, CMatrix& eta) {
  CMatrix joint = concat_cols(zeta, eta);
  fix_row_phases(joint);
  zeta = joint.leftCols(zeta.cols());
  eta = joint.rightCols(eta.cols());
}

void fix_torus_gauge(CMatrix& xi) {
  const Eigen::Index n = xi.rows();
  if (n < 2) return;
  const double scale = max_abs(xi);
  CVector d = CVector::Ones(n);
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    const cplx e = xi(j, j + 1);
    const double m = std::abs(e);
    d(j + 1) = (m > 1e-12 * scale && m > 0.0) ? d(j) * e / m : d(j);
  }
  xi = d.asDiagonal() * xi * d.conjugate().asDiagonal();
  for (Eigen::Index j = 0; j + 1 < n; ++j) {
    xi(j, j + 1) = cplx(std::abs(xi(j, j + 1)), 0.0);
    xi(j + 1, j) = -xi(j, j + 1);
  }
}

ReducedStateGH project_GH(const UnreducedStateGH& s, double c, const GaugeOptions& opts) {
  const double ctol = opts.constraint_tol * std::max(1.0, std::abs(c));
  require_near_scalar(moment_map_GH(s), c, ctol, "project_GH");

  const auto [q, U] = decreasing_eigen(s.X, opts.gap_rel_tol, "project_GH");
  const Eigen::Index n = s.n();
  const CMatrix Yp = U.adjoint() * s.Y * U;
  CMatrix zeta = U.adjoint() * s.zeta;

  const CMatrix gram = zeta * zeta.adjoint();
  const double stol = opts.slice_tol * std::max(1.0, std::abs(c));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (j == k) continue;
      const cplx expected = -kI * gram(j, k);
      if (std::abs(Yp(j, k) * (q(j) - q(k)) - expected) > stol)
        throw Error(ErrorKind::ConstraintViolation, "project_GH: momentum block does not match the slice form");
    }
  }

  ReducedStateGH r{q, Yp.diagonal().real(), std::move(zeta)};
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(r.zeta.row(j).squaredNorm() - c) > ctol)
      throw Error(ErrorKind::ConstraintViolation, "project_GH: spin row norm differs from c");
  }
  fix_row_phases(r.zeta);
  return r;
}

ReducedStateBn project_Bn(const UnreducedStateBn& s, double c1, double c2, const GaugeOptions& opts) {
  const double c = c1 + c2;
  const double ctol = opts.constraint_tol * std::max(1.0, std::abs(c));
  const auto [j1, j2] = moment_map_Bn(s);
  require_near_scalar(j1, c1, ctol, "project_Bn");
  require_near_scalar(j2, c2, ctol, "project_Bn");

  const Eigen::Index n = s.n();
  Eigen::JacobiSVD<CMatrix> svd(s.x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector sigma = svd.singularValues();
  const double smax = sigma.size() ? sigma(0) : 0.0;
  const double gtol = opts.gap_rel_tol * std::max(1.0, smax);
  if (!(sigma(n - 1) > gtol) || (n > 1 && !(min_gap_decreasing(sigma) > gtol)))
    throw Error(ErrorKind::DegenerateSpectrum, "project_Bn: singular values of x are repeated or vanish");

  const double sqrt2 = std::sqrt(2.0);
  const CMatrix& u = svd.matrixU();
  const CMatrix& v = svd.matrixV();
  const CMatrix yp = u.adjoint() * s.y * v;
  ReducedStateBn r{sqrt2 * sigma, sqrt2 * yp.diagonal().real(), u.adjoint() * s.zeta, v.adjoint() * s.eta};

  const CMatrix a = r.zeta * r.zeta.adjoint();
  const CMatrix b = r.eta * r.eta.adjoint();
  const double stol = opts.slice_tol * std::max(1.0, std::abs(c));
  for (Eigen::Index j = 0; j < n; ++j) {
    const double im_expected = c2 - r.eta.row(j).squaredNorm();
    if (std::abs(sqrt2 * yp(j, j).imag() * r.q(j) - im_expected) > stol)
      throw Error(ErrorKind::ConstraintViolation, "project_Bn: diagonal of y does not match the slice form");
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const cplx expected = (-kI * (a(j, k) + b(j, k)) / (r.q(j) - r.q(k)) +
                             kI * (a(j, k) - b(j, k)) / (r.q(j) + r.q(k))) / sqrt2;
      const double scale = 1.0 / std::min(std::abs(r.q(j) - r.q(k)), std::abs(r.q(j) + r.q(k)));
      if (std::abs(yp(j, k) - expected) > stol * std::max(1.0, scale))
        throw Error(ErrorKind::ConstraintViolation, "project_Bn: off-diagonal y does not match the slice form");
    }
    if (std::abs(r.zeta.row(j).squaredNorm() + r.eta.row(j).squaredNorm() - c) > ctol)
      throw Error(ErrorKind::ConstraintViolation, "project_Bn: spin row sum differs from c1 + c2");
  }
  fix_row_phases(r.zeta, r.eta);
  return r;
}

ReducedStateLie project_Lie(const UnreducedStateLie& s, const GaugeOptions& opts) {
  const auto [q, U] = decreasing_eigen(s.X, opts.gap_rel_tol, "project_Lie");
  const Eigen::Index n = s.n();
  const CMatrix Yp = U.adjoint() * s.Y * U;
  CMatrix xi = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k)
      if (j != k) xi(j, k) = -(q(j) - q(k)) * Yp(j, k);
  xi = 0.5 * (xi - xi.adjoint()).eval();
  fix_torus_gauge(xi);
  return ReducedStateLie{q, Yp.diagonal().real(), std::move(xi)};
}

UnreducedStateGH embed(const ReducedStateGH& r, const ModelParams& params) {
  return build_slice_Y(r.q, r.p, r.zeta, params.c);
}

UnreducedStateBn embed(const ReducedStateBn& r, const ModelParams& params) {
  return build_slice_y_Bn(r.q, r.p, r.zeta, r.eta, params.c1, params.c2);
}

UnreducedStateLie embed(const ReducedStateLie& r, const ModelParams&) {
  CMatrix X = CMatrix::Zero(r.q.size(), r.q.size());
  X.diagonal() = r.q.cast<cplx>();
  return UnreducedStateLie(X, parametrize_Y_lie(r.q, r.p, r.xi));
}

ReducedStateGH canonicalize(ReducedStateGH r) {
  fix_row_phases(r.zeta);
  return r;
}

ReducedStateBn canonicalize(ReducedStateBn r) {
  fix_row_phases(r.zeta, r.eta);
  return r;
}

ReducedStateLie canonicalize(ReducedStateLie r) {
  fix_torus_gauge(r.xi);
  return r;
}

namespace {

void require_same_shape(const RVector& qa, const RVector& qb, const RVector& pa, const RVector& pb) {
  if (qa.size() != qb.size() || pa.size() != pb.size() || qa.size() != pa.size())
    throw Error(ErrorKind::DimensionMismatch, "reduced_distance: particle numbers differ");
}

void require_same_shape(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "reduced_distance: spin dimensions differ");
}

double base_distance(const RVector& qa, const RVector& qb, const RVector& pa, const RVector& pb) {
  double d = 0.0;
  if (qa.size()) d = std::max(d, (qa - qb).cwiseAbs().maxCoeff());
  if (pa.size()) d = std::max(d, (pa - pb).cwiseAbs().maxCoeff());
  return d;
}

}  // namespace

double reduced_distance(const ReducedStateGH& a, const ReducedStateGH& b) {
  require_same_shape(a.q, b.q, a.p, b.p);
  require_same_shape(a.zeta, b.zeta);
  return std::max(base_distance(a.q, b.q, a.p, b.p), spin_projector_distance(a.zeta, b.zeta));
}

double reduced_distance(const ReducedStateBn& a, const ReducedStateBn& b) {
  require_same_shape(a.q, b.q, a.p, b.p);
  require_same_shape(a.zeta, b.zeta);
  require_same_shape(a.eta, b.eta);
  return std::max(base_distance(a.q, b.q, a.p, b.p),
                  spin_projector_distance(concat_cols(a.zeta, a.eta), concat_cols(b.zeta, b.eta)));
}

double reduced_distance(const ReducedStateLie& a, const ReducedStateLie& b) {
  require_same_shape(a.q, b.q, a.p, b.p);
  require_same_shape(a.xi, b.xi);
  CMatrix xa = a.xi;
  CMatrix xb = b.xi;
  fix_torus_gauge(xa);
  fix_torus_gauge(xb);
  return std::max(base_distance(a.q, b.q, a.p, b.p), max_abs(CMatrix(xa - xb)));
}

double reduced_distance(const ReducedState& a, const ReducedState& b) {
  if (a.index() != b.index()) throw Error(ErrorKind::DimensionMismatch, "reduced_distance: different model families");
  return std::visit(
      [&](const auto& sa) {
        using T = std::decay_t<decltype(sa)>;
        return reduced_distance(sa, std::get<T>(b));
      },
      a);
}

namespace {

double chamber_violation(const RVector& q) {
  double v = 0.0;
  for (Eigen::Index j = 0; j + 1 < q.size(); ++j) v = std::max(v, q(j + 1) - q(j));
  return v;
}

}  // namespace

double constraint_residual(const ReducedStateGH& r, const ModelParams& params) {
  double res = chamber_violation(r.q);
  for (Eigen::Index j = 0; j < r.zeta.rows(); ++j)
    res = std::max(res, std::abs(r.zeta.row(j).squaredNorm() - params.c));
  return res;
}

double constraint_residual(const ReducedStateBn& r, const ModelParams& params) {
  double res = chamber_violation(r.q);
  if (r.q.size()) res = std::max(res, -r.q(r.q.size() - 1));
  const double c = params.c1 + params.c2;
  for (Eigen::Index j = 0; j < r.zeta.rows(); ++j)
    res = std::max(res, std::abs(r.zeta.row(j).squaredNorm() + r.eta.row(j).squaredNorm() - c));
  return res;
}

double constraint_residual(const ReducedStateLie& r, const ModelParams&) {
  double res = chamber_violation(r.q);
  res = std::max(res, max_abs(CMatrix(r.xi + r.xi.adjoint())));
  if (r.xi.size()) res = std::max(res, r.xi.diagonal().cwiseAbs().maxCoeff());
  return res;
}

}  // namespace isocm
