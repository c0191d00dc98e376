#pragma once

#include <cstdint>

#include "isocm/params.hpp"
#include "isocm/state.hpp"

namespace isocm {

struct RandomStateOptions {
  double q_scale = 1.0;
  double p_scale = 1.0;
  /// Minimum spacing between consecutive q (and min q for B_n), in units of q_scale.
  double min_gap = 0.25;
  int max_attempts = 10'000;
};

/// Random regular reduced data drawn in chamber coordinates: sorted Gaussian positions with
/// minimum-gap rejection, Gaussian momenta, spin rows uniform on the sphere of radius sqrt(c).
/// The returned state is phase-fixed.
ReducedStateGH random_reduced_gh(const ModelParams& params, Rng& rng, const RandomStateOptions& opts = {});
/// B_n: positions are |Gaussian| shifted away from zero; rows (zeta_j, eta_j) jointly on the
/// sphere of radius sqrt(c1 + c2).
ReducedStateBn random_reduced_bn(const ModelParams& params, Rng& rng, const RandomStateOptions& opts = {});
/// sl(n) data: q and p are centred (traceless), xi is a random element of T_perp.
ReducedStateLie random_reduced_lie(const ModelParams& params, Rng& rng, const RandomStateOptions& opts = {});

ReducedState random_reduced(const ModelParams& params, std::uint64_t seed, const RandomStateOptions& opts = {});

}  // namespace isocm
