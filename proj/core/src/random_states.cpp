#include "isocm/random_states.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "isocm/errors.hpp"
#include "isocm/gauge.hpp"

namespace isocm {

namespace {

RVector gaussian_vector(Eigen::Index n, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, scale);
  RVector v(n);
  for (Eigen::Index j = 0; j < n; ++j) v(j) = normal(rng);
  return v;
}

RVector sorted_decreasing(RVector v) {
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

// Rejection sampling of chamber positions.
template <class Accept>
RVector draw_positions(Eigen::Index n, const RandomStateOptions& opts, Rng& rng, Accept&& accept, bool positive) {
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    RVector q = gaussian_vector(n, opts.q_scale, rng);
    if (positive) q = q.cwiseAbs().array() + opts.min_gap * opts.q_scale;
    q = sorted_decreasing(q);
    if (accept(q)) return q;
  }
  throw Error(ErrorKind::DegenerateSpectrum, "random positions: rejection sampling did not find a regular point");
}

CMatrix sphere_rows(Eigen::Index rows, Eigen::Index cols, double radius, Rng& rng) {
  CMatrix m = complex_gaussian(rows, cols, rng);
  for (Eigen::Index j = 0; j < rows; ++j) m.row(j) *= radius / m.row(j).norm();
  return m;
}

}  // namespace

ReducedStateGH random_reduced_gh(const ModelParams& params, Rng& rng, const RandomStateOptions& opts) {
  const Eigen::Index n = params.n;
  const double min_gap = opts.min_gap * opts.q_scale;
  RVector q = draw_positions(n, opts, rng, [&](const RVector& x) { return min_gap_decreasing(x) >= min_gap; }, false);
  RVector p = gaussian_vector(n, opts.p_scale, rng);
  CMatrix zeta = sphere_rows(n, params.ell, std::sqrt(params.c), rng);
  return canonicalize(ReducedStateGH{std::move(q), std::move(p), std::move(zeta)});
}

ReducedStateBn random_reduced_bn(const ModelParams& params, Rng& rng, const RandomStateOptions& opts) {
  const Eigen::Index n = params.n;
  const double min_gap = opts.min_gap * opts.q_scale;
  RVector q = draw_positions(
      n, opts, rng, [&](const RVector& x) { return min_gap_decreasing(x) >= min_gap && x(n - 1) >= min_gap; }, true);
  RVector p = gaussian_vector(n, opts.p_scale, rng);
  const CMatrix joint = sphere_rows(n, params.ell1 + params.ell2, std::sqrt(params.c1 + params.c2), rng);
  return canonicalize(ReducedStateBn{std::move(q), std::move(p), joint.leftCols(params.ell1),
                                     joint.rightCols(params.ell2)});
}

ReducedStateLie random_reduced_lie(const ModelParams& params, Rng& rng, const RandomStateOptions& opts) {
  const Eigen::Index n = params.n;
  const double min_gap = opts.min_gap * opts.q_scale;
  RVector q = draw_positions(n, opts, rng, [&](const RVector& x) { return min_gap_decreasing(x) >= min_gap; }, false);
  q.array() -= q.mean();
  RVector p = gaussian_vector(n, opts.p_scale, rng);
  p.array() -= p.mean();
  CMatrix g = complex_gaussian(n, n, rng);
  CMatrix xi = off_diagonal(0.5 * (g - g.adjoint()));
  return canonicalize(ReducedStateLie{std::move(q), std::move(p), std::move(xi)});
}

ReducedState random_reduced(const ModelParams& params, std::uint64_t seed, const RandomStateOptions& opts) {
  Rng rng(seed);
  switch (params.family) {
    case Family::GibbonsHermsen: return random_reduced_gh(params, rng, opts);
    case Family::BnType: return random_reduced_bn(params, rng, opts);
    case Family::LieA: return random_reduced_lie(params, rng, opts);
  }
  throw Error(ErrorKind::InvalidConfig, "unknown family");
}

}  // namespace isocm
