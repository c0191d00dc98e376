#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "isocm/errors.hpp"
#include "isocm/oscillator.hpp"

using namespace isocm;

namespace {

CMatrix random_hermitian(Eigen::Index n, Rng& rng) { return hermitian_part(complex_gaussian(n, n, rng)); }

}  // namespace

TEST_SUITE("oscillator") {
  TEST_CASE("oscillator coordinate round trip") {
    Rng rng(1);
    const CMatrix X = random_hermitian(3, rng), Y = random_hermitian(3, rng);
    const auto [X2, Y2] = from_osc(to_osc(X, Y, 1.7), 1.7);
    CHECK(max_abs(CMatrix(X2 - X)) < 1e-14);
    CHECK(max_abs(CMatrix(Y2 - Y)) < 1e-14);
  }

  TEST_CASE("exact flow matches the real-coordinate solution") {
    Rng rng(2);
    const double w = 2.5;
    const UnreducedStateLie s(random_hermitian(3, rng), random_hermitian(3, rng));
    for (double t : {0.0, 0.3, 1.1, 4.0}) {
      const auto f = exact_flow(s, t, w);
      const CMatrix X = std::cos(w * t) * s.X + (std::sin(w * t) / w) * s.Y;
      const CMatrix Y = -w * std::sin(w * t) * s.X + std::cos(w * t) * s.Y;
      CHECK(max_abs(CMatrix(f.X - X)) < 1e-13);
      CHECK(max_abs(CMatrix(f.Y - Y)) < 1e-13);
    }
  }

  TEST_CASE("exact flow has period 2 pi / omega") {
    const auto p = testing::gh(3, 2, 1.3);
    const auto s = embed(testing::draw<ReducedStateGH>(p, 3), p);
    const auto f = exact_flow(s, 2 * M_PI / p.omega, p.omega);
    CHECK(max_abs(CMatrix(f.X - s.X)) < 1e-12);
    CHECK(max_abs(CMatrix(f.Y - s.Y)) < 1e-12);
  }

  TEST_CASE("energy is half the trace of Z Z^dagger") {
    const auto p = testing::gh(3, 2, 1.5);
    const auto s = embed(testing::draw<ReducedStateGH>(p, 4), p);
    const CMatrix Z = to_osc(s, p.omega).Z;
    CHECK(energy(s, p.omega) == doctest::Approx(0.5 * (Z * Z.adjoint()).trace().real()).epsilon(1e-13));

    const auto pb = testing::bn(2, 1, 1, 1.0, 1.0, 0.8);
    const auto sb = embed(testing::draw<ReducedStateBn>(pb, 4), pb);
    const CMatrix Zb = to_osc(sb, pb.omega).Z;
    CHECK(Zb.rows() == 4);
    CHECK(energy(sb, pb.omega) == doctest::Approx(0.5 * (Zb * Zb.adjoint()).trace().real()).epsilon(1e-13));
  }

  TEST_CASE("GH slice lies on the constraint surface") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto p = testing::gh(3, 2, 1.0, 1.7);
      const auto r = testing::draw<ReducedStateGH>(p, seed);
      const auto s = build_slice_Y(r.q, r.p, r.zeta, p.c);
      const CMatrix J = moment_map_GH(s);
      CHECK(max_abs(CMatrix(J - kI * p.c * CMatrix::Identity(3, 3))) < 1e-12);
      CHECK(max_abs(CMatrix(s.X - CMatrix(r.q.cast<cplx>().asDiagonal()))) == 0.0);
    }
  }

  TEST_CASE("B_n slice lies on the constraint surface") {
    for (int ell2 : {0, 1, 2}) {
      const auto p = testing::bn(3, 1, ell2, 0.7, 1.3);
      for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = testing::draw<ReducedStateBn>(p, seed);
        const auto s = build_slice_y_Bn(r.q, r.p, r.zeta, r.eta, p.c1, p.c2);
        const auto [J1, J2] = moment_map_Bn(s);
        CHECK(max_abs(CMatrix(J1 - kI * p.c1 * CMatrix::Identity(3, 3))) < 1e-12);
        CHECK(max_abs(CMatrix(J2 - kI * p.c2 * CMatrix::Identity(3, 3))) < 1e-12);
      }
    }
  }

  TEST_CASE("slice preconditions") {
    RVector q(2);
    q << 1.0, 1.0;
    RVector p = RVector::Zero(2);
    CMatrix zeta = CMatrix::Constant(2, 1, 1.0);
    CHECK_THROWS_AS(build_slice_Y(q, p, zeta, 1.0), Error);
    q << 1.0, -1.0;
    try {
      (void)build_slice_Y(q, p, zeta, 2.0);
      FAIL("expected ConstraintViolation");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConstraintViolation);
    }
    try {
      (void)build_slice_Y(q, p, CMatrix::Constant(3, 1, 1.0), 1.0);
      FAIL("expected DimensionMismatch");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::DimensionMismatch);
    }
  }

  TEST_CASE("moment map is constant along the oscillator flow") {
    const auto p = testing::gh(3, 2, 2.0);
    const auto s = embed(testing::draw<ReducedStateGH>(p, 9), p);
    const CMatrix J0 = moment_map_GH(s);
    for (int k = 0; k < 50; ++k) CHECK(max_abs(CMatrix(moment_map_GH(exact_flow(s, 0.173 * k, p.omega)) - J0)) < 1e-12);

    const auto pb = testing::bn(2, 1, 1);
    const auto sb = embed(testing::draw<ReducedStateBn>(pb, 9), pb);
    const auto [A0, B0] = moment_map_Bn(sb);
    for (int k = 0; k < 50; ++k) {
      const auto [A, B] = moment_map_Bn(exact_flow(sb, 0.173 * k, pb.omega));
      CHECK(max_abs(CMatrix(A - A0)) < 1e-12);
      CHECK(max_abs(CMatrix(B - B0)) < 1e-12);
    }
  }

  TEST_CASE("gauge action conjugates the moment map and keeps the energy") {
    const auto p = testing::gh(3, 2);
    const auto s = embed(testing::draw<ReducedStateGH>(p, 5), p);
    Rng rng(11);
    const CMatrix g = random_unitary(3, rng);
    const auto t = apply_gauge(s, g);
    CHECK(max_abs(CMatrix(moment_map_GH(t) - g * moment_map_GH(s) * g.adjoint())) < 1e-12);
    CHECK(energy(t, p.omega) == doctest::Approx(energy(s, p.omega)).epsilon(1e-13));
    const auto u = randomize_gauge(s, 12);
    CHECK(energy(u, p.omega) == doctest::Approx(energy(s, p.omega)).epsilon(1e-13));
  }
}
