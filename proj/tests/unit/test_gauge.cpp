#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "isocm/errors.hpp"
#include "isocm/gauge.hpp"
#include "isocm/oscillator.hpp"

using namespace isocm;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::EvaluationFailure;
}

}  // namespace

TEST_SUITE("gauge") {
  TEST_CASE("project inverts embed up to gauge") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const auto p = testing::gh(3, 2, 1.2, 0.8);
      const auto r = testing::draw<ReducedStateGH>(p, seed);
      const auto s = randomize_gauge(embed(r, p), seed + 100);
      CHECK(reduced_distance(project_GH(s, p.c), r) < 1e-10);

      const auto pb = testing::bn(3, 1, 2, 1.5, 0.5);
      const auto rb = testing::draw<ReducedStateBn>(pb, seed);
      const auto sb = randomize_gauge(embed(rb, pb), seed + 100);
      CHECK(reduced_distance(project_Bn(sb, pb.c1, pb.c2), rb) < 1e-10);

      const auto pl = testing::lie(4);
      const auto rl = testing::draw<ReducedStateLie>(pl, seed);
      const auto sl = randomize_gauge(embed(rl, pl), seed + 100);
      CHECK(reduced_distance(project_Lie(sl), rl) < 1e-10);
    }
  }

  TEST_CASE("projected states satisfy the reduced invariants") {
    const auto p = testing::gh(3, 2);
    const auto r = project_GH(randomize_gauge(embed(testing::draw<ReducedStateGH>(p, 3), p), 4), p.c);
    CHECK(r.q(0) > r.q(1));
    CHECK(r.q(1) > r.q(2));
    CHECK(constraint_residual(r, p) < 1e-12);
    for (Eigen::Index j = 0; j < 3; ++j) {
      Eigen::Index dom = 0;
      r.zeta.row(j).cwiseAbs().maxCoeff(&dom);
      CHECK(std::abs(r.zeta(j, dom).imag()) < 1e-15);
      CHECK(r.zeta(j, dom).real() > 0.0);
    }
  }

  TEST_CASE("row phase fixing") {
    CMatrix m(2, 3);
    m << cplx(0.1, 0.2), cplx(0.0, -2.0), cplx(0.5, 0.0), cplx(1.0, 1.0), cplx(0.0, 0.0), cplx(-1.0, -1.0);
    CMatrix f = m;
    fix_row_phases(f);
    CHECK(f(0, 1).real() == doctest::Approx(2.0));
    CHECK(f(0, 1).imag() == doctest::Approx(0.0));
    // A tie resolves to the lowest index.
    CHECK(f(1, 0).real() == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(f(1, 0).imag()) < 1e-15);
    // Moduli are untouched.
    CHECK((f.cwiseAbs() - m.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-15);

    CMatrix zero = CMatrix::Zero(1, 2);
    CHECK(kind_of([&] { fix_row_phases(zero); }) == ErrorKind::PhaseFixFailure);
  }

  TEST_CASE("torus gauge fixing makes the superdiagonal real and non-negative") {
    Rng rng(5);
    CMatrix g = complex_gaussian(4, 4, rng);
    CMatrix xi = off_diagonal(0.5 * (g - g.adjoint()));
    const CMatrix before = xi;
    fix_torus_gauge(xi);
    for (Eigen::Index j = 0; j + 1 < 4; ++j) {
      CHECK(std::abs(xi(j, j + 1).imag()) < 1e-14);
      CHECK(xi(j, j + 1).real() >= 0.0);
    }
    CHECK((xi.cwiseAbs() - before.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(max_abs(CMatrix(xi + xi.adjoint())) < 1e-14);
  }

  TEST_CASE("reduced distance ignores residual phases") {
    const auto p = testing::gh(2, 3);
    auto a = testing::draw<ReducedStateGH>(p, 1);
    auto b = a;
    b.zeta.row(0) *= std::polar(1.0, 0.7);
    b.zeta.row(1) *= std::polar(1.0, -2.1);
    CHECK(reduced_distance(a, b) < 1e-15);
    b.p(0) += 0.25;
    CHECK(reduced_distance(a, b) == doctest::Approx(0.25));
    CHECK(reduced_distance(ReducedState(a), ReducedState(a)) == 0.0);
    const auto l = testing::draw<ReducedStateLie>(testing::lie(2), 1);
    CHECK(kind_of([&] { (void)reduced_distance(ReducedState(a), ReducedState(l)); }) == ErrorKind::DimensionMismatch);
  }

  TEST_CASE("projection failures") {
    const auto p = testing::gh(2, 2);
    const auto s = embed(testing::draw<ReducedStateGH>(p, 2), p);
    // Off the constraint surface.
    UnreducedStateGH bad = s;
    bad.zeta *= 1.1;
    CHECK(kind_of([&] { (void)project_GH(bad, p.c); }) == ErrorKind::ConstraintViolation);
    // Repeated eigenvalue of X on the constraint surface: orthogonal spins, X = 0.
    UnreducedStateGH deg(CMatrix::Zero(2, 2), CMatrix::Identity(2, 2), std::sqrt(p.c) * CMatrix::Identity(2, 2));
    CHECK(kind_of([&] { (void)project_GH(deg, p.c); }) == ErrorKind::DegenerateSpectrum);
  }

  TEST_CASE("canonicalize is idempotent") {
    const auto p = testing::bn(2, 2, 1);
    const auto r = testing::draw<ReducedStateBn>(p, 8);
    const auto c1 = canonicalize(r);
    const auto c2 = canonicalize(c1);
    CHECK(max_abs(CMatrix(c1.zeta - c2.zeta)) == 0.0);
    CHECK(max_abs(CMatrix(c1.eta - c2.eta)) == 0.0);
  }
}
