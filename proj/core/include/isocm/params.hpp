#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace isocm {

/// The three reduced model families.
///  - LieA: Lie-algebraic spin model for g = sl(n, C), K = SU(n) (Poisson reduction).
///  - GibbonsHermsen: U(n) reduction of Herm(n) x Herm(n) x C^{n x ell} at J = i c 1.
///  - BnType: U(n) x U(n) reduction of the U(n,n) oscillator with two spin blocks.
enum class Family { LieA, GibbonsHermsen, BnType };

std::string_view to_string(Family family);
Family family_from_string(std::string_view name);

struct ModelParams {
  Family family = Family::GibbonsHermsen;
  double omega = 1.0;
  int n = 2;
  int ell = 2;    // GH spin columns
  int ell1 = 1;   // BnType: columns of zeta
  int ell2 = 1;   // BnType: columns of eta (0 allowed)
  double c = 1.0; // GH moment level
  double c1 = 1.0;
  double c2 = 1.0;
};

struct Violation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  /// Set when the model is known to close up after half of 2*pi/omega
  /// (BnType with ell2 = 0, LieA with n = 2).
  bool half_period_regime = false;

  bool ok() const { return violations.empty(); }
};

struct ValidationOptions {
  /// Largest |k| for which c1/c2 = -1 + 1/k is treated as excluded.
  long long ratio_bound = 1'000'000;
  /// Relative tolerance of the integrality test for 1/(c1/c2 + 1).
  double ratio_rel_tol = 1e-12;
};

ValidationReport validate(const ModelParams& params, const ValidationOptions& opts = {});

/// 2*pi/omega, the period of the unreduced oscillator.
double period(const ModelParams& params);

/// True for the regimes where the reduced flow has basic period T/2.
bool half_period_regime(const ModelParams& params);

/// Period the reduced system is expected to have: T, or T/2 in the half-period regimes.
double expected_reduced_period(const ModelParams& params);

/// Real dimension of the regular reduced phase space (GH: 2 n ell, BnType: 2 n (ell1+ell2)).
/// Not defined for LieA, whose reduced space is a Poisson manifold.
int reduced_dimension(const ModelParams& params);

/// Parses a ModelParams object; unknown keys and ill-typed values raise Error(InvalidConfig).
/// Semantic constraints are checked separately by validate().
ModelParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const ModelParams& params);

}  // namespace isocm
