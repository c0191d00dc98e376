#pragma once

#include <cstdint>

#include "isocm/gauge.hpp"
#include "isocm/params.hpp"
#include "isocm/random_states.hpp"
#include "isocm/state.hpp"

namespace testing {

inline isocm::ModelParams gh(int n = 2, int ell = 2, double omega = 1.0, double c = 1.0) {
  isocm::ModelParams p;
  p.family = isocm::Family::GibbonsHermsen;
  p.n = n;
  p.ell = ell;
  p.omega = omega;
  p.c = c;
  return p;
}

inline isocm::ModelParams bn(int n = 2, int ell1 = 1, int ell2 = 1, double c1 = 1.0, double c2 = 1.0,
                             double omega = 1.0) {
  isocm::ModelParams p;
  p.family = isocm::Family::BnType;
  p.n = n;
  p.ell1 = ell1;
  p.ell2 = ell2;
  p.c1 = c1;
  p.c2 = c2;
  p.omega = omega;
  return p;
}

inline isocm::ModelParams lie(int n = 3, double omega = 1.0) {
  isocm::ModelParams p;
  p.family = isocm::Family::LieA;
  p.n = n;
  p.omega = omega;
  return p;
}

template <class State>
State draw(const isocm::ModelParams& p, std::uint64_t seed) {
  return std::get<State>(isocm::random_reduced(p, seed));
}

}  // namespace testing
