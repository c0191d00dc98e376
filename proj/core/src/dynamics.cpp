#include "isocm/dynamics.hpp"

#include <cmath>
#include <limits>
#include <variant>

#include "isocm/errors.hpp"
#include "isocm/oscillator.hpp"
#include "isocm/rootdata.hpp"

namespace isocm {

namespace {

void check_chamber(const RVector& q, bool positive, double margin) {
  const double tol = margin * std::max(1.0, max_abs(q));
  const Eigen::Index n = q.size();
  for (Eigen::Index j = 0; j < n; ++j)
    if (!std::isfinite(q(j))) throw ChamberBoundaryError(std::numeric_limits<double>::quiet_NaN(), "non-finite position");
  // Signed gaps: a step that jumps across a collision leaves q out of order.
  for (Eigen::Index j = 0; j + 1 < n; ++j)
    if (q(j) - q(j + 1) < tol)
      throw ChamberBoundaryError(std::numeric_limits<double>::quiet_NaN(), "positions collided");
  if (positive && n > 0 && q(n - 1) < tol)
    throw ChamberBoundaryError(std::numeric_limits<double>::quiet_NaN(), "position reached the B_n wall");
}

void pack_matrix(const CMatrix& m, RVector& v, Eigen::Index& at) {
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    for (Eigen::Index a = 0; a < m.cols(); ++a) {
      v(at++) = m(j, a).real();
      v(at++) = m(j, a).imag();
    }
}

void unpack_matrix(const RVector& v, CMatrix& m, Eigen::Index& at) {
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    for (Eigen::Index a = 0; a < m.cols(); ++a) {
      m(j, a) = cplx(v(at), v(at + 1));
      at += 2;
    }
}

void pack_upper(const CMatrix& m, RVector& v, Eigen::Index& at) {
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    for (Eigen::Index k = j + 1; k < m.cols(); ++k) {
      v(at++) = m(j, k).real();
      v(at++) = m(j, k).imag();
    }
}

}  // namespace

double H_spin_GH(const ReducedStateGH& s, double omega) {
  const Eigen::Index n = s.q.size();
  double h = 0.5 * s.p.squaredNorm() + 0.5 * omega * omega * s.q.squaredNorm();
  const CMatrix A = s.zeta * s.zeta.adjoint();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double d = s.q(j) - s.q(k);
      h += std::norm(A(j, k)) / (d * d);
    }
  return h;
}

double H_Bn(const ReducedStateBn& s, double omega, double c2) {
  const Eigen::Index n = s.q.size();
  const CMatrix A = s.zeta * s.zeta.adjoint();
  const CMatrix B = s.eta * s.eta.adjoint();
  double h = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double q = s.q(j);
    const double w = c2 - B(j, j).real();
    h += 0.5 * (s.p(j) * s.p(j) + omega * omega * q * q + w * w / (q * q));
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double d = q - s.q(k);
      const double sum = q + s.q(k);
      h += std::norm(A(j, k) + B(j, k)) / (d * d) + std::norm(A(j, k) - B(j, k)) / (sum * sum);
    }
  }
  return h;
}

double reduced_hamiltonian(const ReducedStateGH& s, const ModelParams& params) { return H_spin_GH(s, params.omega); }
double reduced_hamiltonian(const ReducedStateBn& s, const ModelParams& params) {
  return H_Bn(s, params.omega, params.c2);
}
double reduced_hamiltonian(const ReducedStateLie& s, const ModelParams& params) { return H_red_lie(s, params.omega); }
double reduced_hamiltonian(const ReducedState& s, const ModelParams& params) {
  return std::visit([&](const auto& r) { return reduced_hamiltonian(r, params); }, s);
}

Tangent eom(const ReducedStateGH& s, const ModelParams& params, const EomOptions& opts) {
  check_chamber(s.q, false, opts.chamber_margin);
  const Eigen::Index n = s.q.size();
  const double w2 = params.omega * params.omega;
  const CMatrix A = s.zeta * s.zeta.adjoint();
  Tangent t{s.p, -w2 * s.q, CMatrix::Zero(n, s.zeta.cols()), CMatrix()};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = s.q(j) - s.q(k);
      const double d2 = d * d;
      t.p_dot(j) += 2.0 * std::norm(A(j, k)) / (d2 * d);
      t.spin_dot.row(j) += (A(j, k) / d2) * s.zeta.row(k);
    }
  }
  t.spin_dot *= -kI * opts.spin_sign;
  return t;
}

Tangent eom(const ReducedStateBn& s, const ModelParams& params, const EomOptions& opts) {
  check_chamber(s.q, true, opts.chamber_margin);
  const Eigen::Index n = s.q.size();
  const double w2 = params.omega * params.omega;
  const CMatrix A = s.zeta * s.zeta.adjoint();
  const CMatrix B = s.eta * s.eta.adjoint();
  Tangent t{s.p, RVector(n), CMatrix::Zero(n, s.zeta.cols()), CMatrix::Zero(n, s.eta.cols())};
  for (Eigen::Index j = 0; j < n; ++j) {
    const double q = s.q(j);
    const double w = params.c2 - B(j, j).real();
    double dHdq = w2 * q - w * w / (q * q * q);
    t.spin2_dot.row(j) -= (w / (q * q)) * s.eta.row(j);
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = q - s.q(k);
      const double sum = q + s.q(k);
      const cplx plus = A(j, k) + B(j, k);
      const cplx minus = A(j, k) - B(j, k);
      dHdq -= 2.0 * std::norm(plus) / (d * d * d) + 2.0 * std::norm(minus) / (sum * sum * sum);
      t.spin_dot.row(j) += (plus / (d * d) + minus / (sum * sum)) * s.zeta.row(k);
      t.spin2_dot.row(j) += (plus / (d * d) - minus / (sum * sum)) * s.eta.row(k);
    }
    t.p_dot(j) = -dHdq;
  }
  t.spin_dot *= -kI * opts.spin_sign;
  t.spin2_dot *= -kI * opts.spin_sign;
  return t;
}

Tangent eom(const ReducedStateLie& s, const ModelParams& params, const EomOptions& opts) {
  check_chamber(s.q, false, opts.chamber_margin);
  const Eigen::Index n = s.q.size();
  const double w2 = params.omega * params.omega;
  Tangent t{s.p, -w2 * s.q, CMatrix(), CMatrix()};
  CMatrix grad = CMatrix::Zero(n, n);  // xi-gradient of H
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = s.q(j) - s.q(k);
      t.p_dot(j) += 2.0 * std::norm(s.xi(j, k)) / (d * d * d);
      grad(j, k) = -s.xi(j, k) / (d * d);
    }
  t.spin_dot = off_diagonal(commutator(grad, s.xi));
  return t;
}

RVector pack(const ReducedStateGH& s) {
  const Eigen::Index n = s.q.size();
  RVector v(2 * n + 2 * s.zeta.size());
  v << s.q, s.p, RVector::Zero(2 * s.zeta.size());
  Eigen::Index at = 2 * n;
  pack_matrix(s.zeta, v, at);
  return v;
}

RVector pack(const ReducedStateBn& s) {
  const Eigen::Index n = s.q.size();
  RVector v(2 * n + 2 * s.zeta.size() + 2 * s.eta.size());
  v.head(n) = s.q;
  v.segment(n, n) = s.p;
  Eigen::Index at = 2 * n;
  pack_matrix(s.zeta, v, at);
  pack_matrix(s.eta, v, at);
  return v;
}

RVector pack(const ReducedStateLie& s) {
  const Eigen::Index n = s.q.size();
  RVector v(2 * n + n * (n - 1));
  v.head(n) = s.q;
  v.segment(n, n) = s.p;
  Eigen::Index at = 2 * n;
  pack_upper(s.xi, v, at);
  return v;
}

RVector pack(const Tangent& t, Family family) {
  const Eigen::Index n = t.q_dot.size();
  const Eigen::Index spin = family == Family::LieA ? n * (n - 1) : 2 * (t.spin_dot.size() + t.spin2_dot.size());
  RVector v(2 * n + spin);
  v.head(n) = t.q_dot;
  v.segment(n, n) = t.p_dot;
  Eigen::Index at = 2 * n;
  if (family == Family::LieA) {
    pack_upper(t.spin_dot, v, at);
  } else {
    pack_matrix(t.spin_dot, v, at);
    pack_matrix(t.spin2_dot, v, at);
  }
  return v;
}

void unpack(const RVector& v, ReducedStateGH& s) {
  const Eigen::Index n = s.q.size();
  if (v.size() != 2 * n + 2 * s.zeta.size()) throw Error(ErrorKind::DimensionMismatch, "unpack: wrong vector length");
  s.q = v.head(n);
  s.p = v.segment(n, n);
  Eigen::Index at = 2 * n;
  unpack_matrix(v, s.zeta, at);
}

void unpack(const RVector& v, ReducedStateBn& s) {
  const Eigen::Index n = s.q.size();
  if (v.size() != 2 * n + 2 * s.zeta.size() + 2 * s.eta.size())
    throw Error(ErrorKind::DimensionMismatch, "unpack: wrong vector length");
  s.q = v.head(n);
  s.p = v.segment(n, n);
  Eigen::Index at = 2 * n;
  unpack_matrix(v, s.zeta, at);
  unpack_matrix(v, s.eta, at);
}

void unpack(const RVector& v, ReducedStateLie& s) {
  const Eigen::Index n = s.q.size();
  if (v.size() != 2 * n + n * (n - 1)) throw Error(ErrorKind::DimensionMismatch, "unpack: wrong vector length");
  s.q = v.head(n);
  s.p = v.segment(n, n);
  Eigen::Index at = 2 * n;
  s.xi = CMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      s.xi(j, k) = cplx(v(at), v(at + 1));
      s.xi(k, j) = -std::conj(s.xi(j, k));
      at += 2;
    }
}

std::vector<double> uniform_grid(double t_end, int count) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(ErrorKind::InvalidConfig, "uniform_grid: t_end must be >= 0");
  if (count < 1) throw Error(ErrorKind::InvalidConfig, "uniform_grid: count must be >= 1");
  if (t_end == 0.0 || count == 1) return {0.0};
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = t_end * i / (count - 1);
  g.back() = t_end;
  return g;
}

namespace {

Family family_of(const ReducedStateGH&) { return Family::GibbonsHermsen; }
Family family_of(const ReducedStateBn&) { return Family::BnType; }
Family family_of(const ReducedStateLie&) { return Family::LieA; }

template <class State>
Trajectory<State> integrate_impl(const State& s0, const ModelParams& params, const std::vector<double>& sample_times,
                                 const IntegrateOptions& opts) {
  if (!(opts.tol > 0.0) || !(opts.local_safety > 0.0) || opts.local_safety > 1.0) throw Error(ErrorKind::InvalidConfig, "integrate: tol must be positive");
  if (!sample_times.empty() && sample_times.front() < 0.0)
    throw Error(ErrorKind::InvalidConfig, "integrate: sample times must be >= 0");
  const Family family = family_of(s0);
  // Validate the start point once so a bad initial state is reported at t = 0.
  try {
    (void)eom(s0, params, opts.eom);
  } catch (const ChamberBoundaryError& e) {
    throw ChamberBoundaryError(0.0, std::string("initial state is not regular: ") + e.what());
  }

  State scratch = s0;
  const OdeRhs rhs = [&](double, const RVector& y, RVector& dy) {
    unpack(y, scratch);
    dy = pack(eom(scratch, params, opts.eom), family);
  };
  DormandPrinceOptions dp;
  dp.rtol = opts.tol * opts.local_safety;
  dp.atol = opts.tol * opts.local_safety;
  dp.max_steps = opts.max_steps;

  Trajectory<State> traj;
  const std::vector<RVector> ys = integrate_dopri5(rhs, pack(s0), 0.0, sample_times, dp, &traj.stats);
  traj.times = sample_times;
  traj.states.reserve(ys.size());
  for (const RVector& y : ys) {
    State s = s0;
    unpack(y, s);
    s = canonicalize(std::move(s));
    traj.energy.push_back(reduced_hamiltonian(s, params));
    traj.constraint_residual.push_back(constraint_residual(s, params));
    traj.states.push_back(std::move(s));
  }
  return traj;
}

ReducedStateGH project_one(const UnreducedStateGH& s, const ModelParams& p) { return project_GH(s, p.c); }
ReducedStateBn project_one(const UnreducedStateBn& s, const ModelParams& p) { return project_Bn(s, p.c1, p.c2); }
ReducedStateLie project_one(const UnreducedStateLie& s, const ModelParams&) { return project_Lie(s); }

template <class Unreduced>
auto project_flow_impl(const Unreduced& s0, const ModelParams& params, const std::vector<double>& sample_times) {
  using State = decltype(project_one(s0, params));
  Trajectory<State> traj;
  for (double t : sample_times) {
    try {
      State r = project_one(exact_flow(s0, t, params.omega), params);
      traj.energy.push_back(reduced_hamiltonian(r, params));
      traj.constraint_residual.push_back(constraint_residual(r, params));
      traj.states.push_back(std::move(r));
      traj.times.push_back(t);
    } catch (const Error& e) {
      traj.failures.push_back({t, std::string(to_string(e.kind())), e.what()});
    }
  }
  return traj;
}

}  // namespace

Trajectory<ReducedStateGH> integrate(const ReducedStateGH& s0, const ModelParams& params,
                                     const std::vector<double>& sample_times, const IntegrateOptions& opts) {
  return integrate_impl(s0, params, sample_times, opts);
}
Trajectory<ReducedStateBn> integrate(const ReducedStateBn& s0, const ModelParams& params,
                                     const std::vector<double>& sample_times, const IntegrateOptions& opts) {
  return integrate_impl(s0, params, sample_times, opts);
}
Trajectory<ReducedStateLie> integrate(const ReducedStateLie& s0, const ModelParams& params,
                                      const std::vector<double>& sample_times, const IntegrateOptions& opts) {
  return integrate_impl(s0, params, sample_times, opts);
}

Trajectory<ReducedStateGH> project_flow(const UnreducedStateGH& s0, const ModelParams& params,
                                        const std::vector<double>& sample_times) {
  return project_flow_impl(s0, params, sample_times);
}
Trajectory<ReducedStateBn> project_flow(const UnreducedStateBn& s0, const ModelParams& params,
                                        const std::vector<double>& sample_times) {
  return project_flow_impl(s0, params, sample_times);
}
Trajectory<ReducedStateLie> project_flow(const UnreducedStateLie& s0, const ModelParams& params,
                                         const std::vector<double>& sample_times) {
  return project_flow_impl(s0, params, sample_times);
}

}  // namespace isocm
