#include "isocm/bracket_audit.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "isocm/errors.hpp"
#include "isocm/random_states.hpp"

namespace isocm {

RandomLieObservable::RandomLieObservable(Eigen::Index n, std::uint64_t seed) : n_(n) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto vec = [&] {
    RVector v(n);
    for (Eigen::Index j = 0; j < n; ++j) v(j) = g(rng);
    return v;
  };
  auto mat = [&] {
    RMatrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) m(j, k) = g(rng);
    return m;
  };
  a_ = vec();
  b_ = vec();
  c_ = vec();
  d_ = mat();
  e_ = mat();
  f_ = mat();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k)
      for (Eigen::Index l = k + 1; l < n; ++l) {
        cycles_.push_back({j, k, l});
        cycle_coef_.emplace_back(g(rng), g(rng));
      }
}

double RandomLieObservable::operator()(const ReducedStateLie& s) const {
  double v = a_.dot(s.q) + b_.dot(s.p) + 0.5 * (c_.array() * s.q.array() * s.p.array()).sum();
  for (Eigen::Index j = 0; j < n_; ++j)
    for (Eigen::Index k = j + 1; k < n_; ++k) {
      const double w = std::norm(s.xi(j, k));
      v += w * (d_(j, k) + 0.5 * e_(j, k) * s.q(j) + 0.5 * f_(j, k) * s.p(k));
    }
  for (std::size_t i = 0; i < cycles_.size(); ++i) {
    const auto [j, k, l] = cycles_[i];
    v += (cycle_coef_[i] * s.xi(j, k) * s.xi(k, l) * s.xi(l, j)).real();
  }
  return v;
}

BracketAuditReport audit_lie_bracket(const ModelParams& params, const BracketAuditOptions& opts) {
  if (params.family != Family::LieA) throw Error(ErrorKind::InvalidConfig, "bracket audit requires the LieA family");
  if (opts.points < 1) throw Error(ErrorKind::InvalidConfig, "bracket audit needs at least one point");
  const Eigen::Index n = params.n;
  const double h = opts.fd_step;
  BracketAuditReport rep;
  rep.points = opts.points;

  for (int i = 0; i < opts.points; ++i) {
    const std::uint64_t seed = opts.seed + static_cast<std::uint64_t>(i);
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    const ReducedStateLie x = random_reduced_lie(params, rng);

    // r-matrix identities on general complex off-diagonal matrices.
    const CMatrix X = off_diagonal(complex_gaussian(n, n, rng));
    const CMatrix A = off_diagonal(complex_gaussian(n, n, rng));
    const CMatrix B = off_diagonal(complex_gaussian(n, n, rng));
    const CMatrix Q = x.q.cast<cplx>().asDiagonal();
    const CMatrix rX = r_matrix_apply(x.q, X);
    if (n > 1) rep.r_matrix_inverse = std::max(rep.r_matrix_inverse, max_abs(CMatrix(commutator(Q, rX) - X)) / max_abs(X));
    double inv_alpha = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = j + 1; k < n; ++k) inv_alpha = std::max(inv_alpha, 1.0 / std::abs(x.q(j) - x.q(k)));
    if (n > 1) {
      const cplx anti = (r_matrix_apply(x.q, A) * B).trace() + (A * r_matrix_apply(x.q, B)).trace();
      rep.r_matrix_antisymmetry = std::max(rep.r_matrix_antisymmetry, std::abs(anti) / (A.norm() * B.norm() * inv_alpha));
    }

    // Bracket checks.
    const RandomLieObservable F(n, seed * 3 + 1), G(n, seed * 3 + 2), H(n, seed * 3 + 3);
    const LieObservable f = F, g = G, hh = H;
    rep.bracket_antisymmetry = std::max(
        rep.bracket_antisymmetry, std::abs(reduced_bracket_lie(f, g, x, h) + reduced_bracket_lie(g, f, x, h)));

    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        const LieObservable qj = [j](const ReducedStateLie& s) { return s.q(j); };
        const LieObservable qk = [k](const ReducedStateLie& s) { return s.q(k); };
        const LieObservable pj = [j](const ReducedStateLie& s) { return s.p(j); };
        const LieObservable pk = [k](const ReducedStateLie& s) { return s.p(k); };
        const double delta = j == k ? 1.0 : 0.0;
        rep.canonical = std::max({rep.canonical, std::abs(reduced_bracket_lie(qj, pk, x, h) - delta),
                                  std::abs(reduced_bracket_lie(qj, qk, x, h)), std::abs(reduced_bracket_lie(pj, pk, x, h))});
      }

    auto nested = [h](const LieObservable& u, const LieObservable& v) -> LieObservable {
      return [u, v, h](const ReducedStateLie& s) { return reduced_bracket_lie(u, v, s, h); };
    };
    const double jac = reduced_bracket_lie(f, nested(g, hh), x, h) + reduced_bracket_lie(g, nested(hh, f), x, h) +
                       reduced_bracket_lie(hh, nested(f, g), x, h);
    rep.jacobi = std::max(rep.jacobi, std::abs(jac));

    const LieObservable casimir = [](const ReducedStateLie& s) { return (s.xi * s.xi).trace().real(); };
    rep.casimir = std::max(rep.casimir, std::abs(reduced_bracket_lie(casimir, f, x, h)));
  }
  return rep;
}

nlohmann::json to_json(const BracketAuditReport& r) {
  return nlohmann::json{{"points", r.points},
                        {"r_matrix_inverse", r.r_matrix_inverse},
                        {"r_matrix_antisymmetry", r.r_matrix_antisymmetry},
                        {"bracket_antisymmetry", r.bracket_antisymmetry},
                        {"canonical", r.canonical},
                        {"jacobi", r.jacobi},
                        {"casimir", r.casimir}};
}

}  // namespace isocm
