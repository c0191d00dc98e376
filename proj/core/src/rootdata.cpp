#include "isocm/rootdata.hpp"

#include <cmath>
#include <exception>
#include <string>

#include "isocm/errors.hpp"

namespace isocm {

RootSystemA::RootSystemA(Eigen::Index n) : n_(n) {
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) roots_.emplace_back(j, k);
}

double RootSystemA::value(std::size_t root, const RVector& q) const {
  const auto [j, k] = roots_[root];
  return q(j) - q(k);
}

CMatrix RootSystemA::root_vector(std::size_t root, bool negative) const {
  const auto [j, k] = roots_[root];
  CMatrix e = CMatrix::Zero(n_, n_);
  if (negative) e(k, j) = 1.0;
  else e(j, k) = 1.0;
  return e;
}

CMatrix r_matrix_apply(const RootSystem& roots, const RVector& q, const CMatrix& xi, double gap_tol) {
  const Eigen::Index n = roots.matrix_size();
  if (q.size() != n || xi.rows() != n || xi.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "r_matrix_apply: q and xi must match the root system");
  const double tol = gap_tol * max_abs(q);
  CMatrix out = CMatrix::Zero(n, n);
  for (std::size_t r = 0; r < roots.num_positive_roots(); ++r) {
    const double a = roots.value(r, q);
    if (!(std::abs(a) > tol)) throw Error(ErrorKind::DegenerateSpectrum, "r_matrix_apply: q lies on a root hyperplane");
    const CMatrix ep = roots.root_vector(r, false);
    const CMatrix em = roots.root_vector(r, true);
    const double norm = roots.normalization(r);
    const cplx coef_pos = (xi * em).trace() / norm;  // xi^alpha
    const cplx coef_neg = (xi * ep).trace() / norm;  // xi^{-alpha}
    out += (coef_pos / a) * ep - (coef_neg / a) * em;
  }
  return out;
}

CMatrix r_matrix_apply(const RVector& q, const CMatrix& xi, double gap_tol) {
  return r_matrix_apply(RootSystemA(q.size()), q, xi, gap_tol);
}

CMatrix parametrize_Y_lie(const RVector& q, const RVector& p, const CMatrix& xi) {
  if (p.size() != q.size()) throw Error(ErrorKind::DimensionMismatch, "parametrize_Y_lie: q and p differ in size");
  CMatrix Y = -r_matrix_apply(q, xi);
  Y.diagonal() += p.cast<cplx>();
  return Y;
}

double H_red_lie(const RVector& q, const RVector& p, const CMatrix& xi, double omega) {
  const RootSystemA roots(q.size());
  if (xi.rows() != q.size() || xi.cols() != q.size())
    throw Error(ErrorKind::DimensionMismatch, "H_red_lie: xi must be n x n");
  const double tol = 1e-8 * max_abs(q);
  double h = 0.5 * p.squaredNorm() + 0.5 * omega * omega * q.squaredNorm();
  for (std::size_t r = 0; r < roots.num_positive_roots(); ++r) {
    const double a = roots.value(r, q);
    if (!(std::abs(a) > tol)) throw Error(ErrorKind::DegenerateSpectrum, "H_red_lie: q lies on a root hyperplane");
    const auto [j, k] = roots.indices(r);
    h += roots.normalization(r) * std::norm(xi(j, k)) / (a * a);
  }
  return h;
}

double H_red_lie(const ReducedStateLie& s, double omega) { return H_red_lie(s.q, s.p, s.xi, omega); }

namespace {

double evaluate(const LieObservable& f, const ReducedStateLie& x) {
  double v = 0.0;
  try {
    v = f(x);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorKind::EvaluationFailure, std::string("observable threw: ") + e.what());
  }
  if (!std::isfinite(v)) throw Error(ErrorKind::EvaluationFailure, "observable returned a non-finite value");
  return v;
}

double step_for(double x, double fd_step) { return std::max(fd_step * std::max(1.0, std::abs(x)), 1e-7); }

template <class Perturb>
double central_difference(const LieObservable& f, const ReducedStateLie& base, double h, Perturb&& perturb) {
  ReducedStateLie plus = base;
  ReducedStateLie minus = base;
  perturb(plus, h);
  perturb(minus, -h);
  return (evaluate(f, plus) - evaluate(f, minus)) / (2.0 * h);
}

}  // namespace

LieGradient lie_gradient(const LieObservable& f, const ReducedStateLie& x, double fd_step) {
  const Eigen::Index n = x.q.size();
  LieGradient g{RVector(n), RVector(n), CMatrix::Zero(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    g.dq(j) = central_difference(f, x, step_for(x.q(j), fd_step), [j](ReducedStateLie& s, double d) { s.q(j) += d; });
    g.dp(j) = central_difference(f, x, step_for(x.p(j), fd_step), [j](ReducedStateLie& s, double d) { s.p(j) += d; });
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double fa = central_difference(f, x, step_for(x.xi(j, k).real(), fd_step),
                                           [j, k](ReducedStateLie& s, double d) {
                                             s.xi(j, k) += d;
                                             s.xi(k, j) = -std::conj(s.xi(j, k));
                                           });
      const double fb = central_difference(f, x, step_for(x.xi(j, k).imag(), fd_step),
                                           [j, k](ReducedStateLie& s, double d) {
                                             s.xi(j, k) += cplx(0.0, d);
                                             s.xi(k, j) = -std::conj(s.xi(j, k));
                                           });
      // Pairing tr(U G) over T_perp: G_jk = -(F_a + i F_b)/2, G_kj = -conj(G_jk).
      g.dxi(j, k) = -0.5 * cplx(fa, fb);
      g.dxi(k, j) = -std::conj(g.dxi(j, k));
    }
  }
  return g;
}

double reduced_bracket_lie(const LieObservable& f, const LieObservable& h, const ReducedStateLie& point,
                           double fd_step) {
  const LieGradient gf = lie_gradient(f, point, fd_step);
  const LieGradient gh = lie_gradient(h, point, fd_step);
  const double canonical = gf.dq.dot(gh.dp) - gf.dp.dot(gh.dq);
  const double spin = (point.xi * commutator(gf.dxi, gh.dxi)).trace().real();
  return canonical + spin;
}

}  // namespace isocm
