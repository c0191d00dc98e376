#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isocm/params.hpp"
#include "isocm/rootdata.hpp"

namespace isocm {

/// Seeded random torus-invariant polynomial on (q, p, xi): linear and bilinear terms in q, p,
/// weights on |xi_jk|^2 coupled to q and p, and Re/Im of the 3-cycles xi_jk xi_kl xi_lj.
class RandomLieObservable {
 public:
  RandomLieObservable(Eigen::Index n, std::uint64_t seed);
  double operator()(const ReducedStateLie& s) const;

 private:
  Eigen::Index n_;
  RVector a_, b_, c_;
  RMatrix d_, e_, f_;
  std::vector<std::array<Eigen::Index, 3>> cycles_;
  std::vector<cplx> cycle_coef_;
};

struct BracketAuditOptions {
  int points = 20;
  std::uint64_t seed = 0;
  double fd_step = 1e-3;
};

/// Worst residuals over all audit points.
struct BracketAuditReport {
  int points = 0;
  /// max |[diag q, r(q) X] - offdiag X| / max|X| over random complex off-diagonal X.
  double r_matrix_inverse = 0.0;
  /// max |tr(r(q)A B) + tr(A r(q)B)| / (|A|_F |B|_F max_alpha 1/|alpha(q)|).
  double r_matrix_antisymmetry = 0.0;
  /// max |{F,G} + {G,F}|.
  double bracket_antisymmetry = 0.0;
  /// max |{q_j,p_k} - delta_jk|, |{q_j,q_k}|, |{p_j,p_k}|.
  double canonical = 0.0;
  /// max |{F,{G,H}} + {G,{H,F}} + {H,{F,G}}|.
  double jacobi = 0.0;
  /// max |{tr xi^2, F}|.
  double casimir = 0.0;
};

/// Runs all checks at `points` seeded random regular sl(n) points. Requires the LieA family.
BracketAuditReport audit_lie_bracket(const ModelParams& params, const BracketAuditOptions& opts = {});

nlohmann::json to_json(const BracketAuditReport& report);

}  // namespace isocm
