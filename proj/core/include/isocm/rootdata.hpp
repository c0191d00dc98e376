#pragma once

#include <cstddef>
#include <functional>

#include "isocm/linalg.hpp"
#include "isocm/state.hpp"

namespace isocm {

/// Root data needed by the dynamical r-matrix: positive roots alpha, their values
/// alpha(q) on the Cartan subalgebra, root vectors E_alpha with E_{-alpha} = E_alpha^dagger,
/// and the normalization <E_alpha, E_{-alpha}> = 2/|alpha|^2 under the trace form.
class RootSystem {
 public:
  virtual ~RootSystem() = default;

  /// Size of the defining matrix representation.
  virtual Eigen::Index matrix_size() const = 0;
  virtual std::size_t num_positive_roots() const = 0;
  /// alpha(q) for positive root `root`.
  virtual double value(std::size_t root, const RVector& q) const = 0;
  /// E_alpha (negative = false) or E_{-alpha} (negative = true).
  virtual CMatrix root_vector(std::size_t root, bool negative) const = 0;
  /// <E_alpha, E_{-alpha}>.
  virtual double normalization(std::size_t root) const = 0;
};

/// A_{n-1}: alpha_{jk} = e_j - e_k (j < k), E_alpha = E_{jk}, tr(E_jk E_kj) = 1.
class RootSystemA final : public RootSystem {
 public:
  explicit RootSystemA(Eigen::Index n);

  Eigen::Index matrix_size() const override { return n_; }
  std::size_t num_positive_roots() const override { return roots_.size(); }
  double value(std::size_t root, const RVector& q) const override;
  CMatrix root_vector(std::size_t root, bool negative) const override;
  double normalization(std::size_t) const override { return 1.0; }

  /// (j, k) with j < k for positive root `root`.
  std::pair<Eigen::Index, Eigen::Index> indices(std::size_t root) const { return roots_[root]; }

 private:
  Eigen::Index n_;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> roots_;
};

/// r(q) xi = sum_alpha xi^alpha / alpha(q) E_alpha, zero on the Cartan part.
/// Throws DegenerateSpectrum when some |alpha(q)| falls below gap_tol * max|q|.
CMatrix r_matrix_apply(const RootSystem& roots, const RVector& q, const CMatrix& xi, double gap_tol = 1e-8);
/// A-series shortcut: entries xi_jk / (q_j - q_k) off the diagonal.
CMatrix r_matrix_apply(const RVector& q, const CMatrix& xi, double gap_tol = 1e-8);

/// Y(q, p, xi) = diag(p) - r(q) xi; Hermitian for xi in T_perp.
CMatrix parametrize_Y_lie(const RVector& q, const RVector& p, const CMatrix& xi);

/// 1/2 |p|^2 + 1/2 omega^2 |q|^2 + sum_{alpha > 0} (2/|alpha|^2) |xi^alpha|^2 / alpha(q)^2.
double H_red_lie(const RVector& q, const RVector& p, const CMatrix& xi, double omega);
double H_red_lie(const ReducedStateLie& s, double omega);

/// Observable on the (q, p, xi) reduced phase space.
using LieObservable = std::function<double(const ReducedStateLie&)>;

struct LieGradient {
  RVector dq;
  RVector dp;
  CMatrix dxi;  // element of T_perp: anti-Hermitian with zero diagonal
};

/// Central finite-difference gradient. The xi-gradient is the T_perp element G with
/// tr(U G) = d/dt F(xi + t U) for all U in T_perp. Step: max(fd_step * max(1, |x|), 1e-7).
LieGradient lie_gradient(const LieObservable& f, const ReducedStateLie& point, double fd_step = 1e-5);

/// Reduced Poisson bracket
///   {F, H} = <grad_q F, grad_p H> - <grad_p F, grad_q H> + <xi, [grad_xi F, grad_xi H]>.
double reduced_bracket_lie(const LieObservable& f, const LieObservable& h, const ReducedStateLie& point,
                           double fd_step = 1e-5);

}  // namespace isocm
