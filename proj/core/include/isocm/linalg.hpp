#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace isocm {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Seeded generator used everywhere randomness is needed.
using Rng = std::mt19937_64;

inline constexpr cplx kI{0.0, 1.0};

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

/// (A + A†)/2
inline CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

/// Largest entry modulus; 0 for empty matrices.
double max_abs(const CMatrix& a);
double max_abs(const RVector& v);

/// Matrix with i.i.d. standard complex Gaussian entries (real and imaginary parts N(0, 1/2)).
CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases of R's
/// diagonal absorbed into Q.
CMatrix random_unitary(Eigen::Index n, Rng& rng);

/// Off-diagonal projector: returns a copy with the diagonal zeroed.
CMatrix off_diagonal(const CMatrix& a);

/// Smallest spacing between consecutive entries of a sorted (decreasing) vector;
/// +inf for fewer than two entries.
double min_gap_decreasing(const RVector& q);

}  // namespace isocm
