#include "isocm/linalg.hpp"

#include <cmath>
#include <limits>

namespace isocm {

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

double max_abs(const RVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  const CMatrix g = complex_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mod = std::abs(r(j, j));
    const cplx phase = mod > 0.0 ? r(j, j) / mod : cplx(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

CMatrix off_diagonal(const CMatrix& a) {
  CMatrix out = a;
  out.diagonal().setZero();
  return out;
}

double min_gap_decreasing(const RVector& q) {
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j + 1 < q.size(); ++j) gap = std::min(gap, q(j) - q(j + 1));
  return gap;
}

}  // namespace isocm
