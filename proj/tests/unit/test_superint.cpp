#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "helpers.hpp"
#include "isocm/dynamics.hpp"
#include "isocm/errors.hpp"
#include "isocm/oscillator.hpp"
#include "isocm/superint.hpp"

using namespace isocm;

namespace {

InvariantWord W(const std::string& s) { return InvariantWord::parse(s); }

bool has_word(const std::vector<InvariantWord>& pool, const std::string& s) {
  return std::any_of(pool.begin(), pool.end(), [&](const InvariantWord& w) { return w.to_string() == s; });
}

std::vector<UnreducedState> flow_samples(const UnreducedStateGH& s, double omega, int count) {
  std::vector<UnreducedState> out;
  for (int i = 0; i < count; ++i) out.emplace_back(exact_flow(s, 0.0731 * i, omega));
  return out;
}

}  // namespace

TEST_SUITE("superint") {
  TEST_CASE("word values on known states") {
    const auto p = testing::gh(3, 2, 1.3, 0.8);
    const auto s = randomize_gauge(embed(testing::draw<ReducedStateGH>(p, 1), p), 5);
    const UnreducedState u = s;
    CHECK(invariant_value(W("Z.Zd/Re"), u, p.omega) == doctest::Approx(2 * energy(s, p.omega)).epsilon(1e-13));
    CHECK(invariant_value(W("S/Re"), u, p.omega) == doctest::Approx(3 * 0.8).epsilon(1e-13));
    CHECK(std::abs(invariant_value(W("Z.Zd/Im"), u, p.omega)) < 1e-13);
    // Sum of the diagonal spin projectors is S.
    CHECK(invariant_value(W("P(0,0)/Re"), u, p.omega) + invariant_value(W("P(1,1)/Re"), u, p.omega) ==
          doctest::Approx(3 * 0.8).epsilon(1e-13));
    CHECK_THROWS_AS(invariant_value(W("Z.S/Re"), u, p.omega), Error);
    try {
      (void)invariant_value(W("Z.Z.Zd/Re"), u, p.omega);
      FAIL("expected UnbalancedWord");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::UnbalancedWord);
    }
    // S2 does not exist for GH.
    CHECK_THROWS_AS(invariant_value(W("S2/Re"), u, p.omega), Error);
  }

  TEST_CASE("B_n word values") {
    const auto p = testing::bn(2, 1, 2, 0.5, 1.5);
    const auto s = embed(testing::draw<ReducedStateBn>(p, 2), p);
    const UnreducedState u = s;
    const double s1 = invariant_value(W("S/Re"), u, p.omega);
    const double s2 = invariant_value(W("S2/Re"), u, p.omega);
    CHECK(s1 == doctest::Approx(s.zeta.squaredNorm()).epsilon(1e-13));
    CHECK(s1 + s2 == doctest::Approx(2 * (p.c1 + p.c2)).epsilon(1e-13));
    CHECK(invariant_value(W("Z.Zd/Re"), u, p.omega) == doctest::Approx(2 * energy(s, p.omega)).epsilon(1e-13));
  }

  TEST_CASE("balanced words are conserved by the oscillator flow") {
    const auto p = testing::gh(3, 2, 1.7);
    const auto s = randomize_gauge(embed(testing::draw<ReducedStateGH>(p, 3), p), 9);
    const auto samples = flow_samples(s, p.omega, 40);
    CHECK(conservation_check(W("Z.Zd/Re"), samples, p.omega).conserved);
    CHECK(conservation_check(W("Z.S.Zd.S/Re"), samples, p.omega).max_deviation <= 1e-12);
    CHECK(conservation_check(W("Z.P(0,1).Zd.P(1,0)/Im"), samples, p.omega).max_deviation <= 1e-12);
    const auto z = conservation_check(W("Z/Re"), samples, p.omega);
    CHECK_FALSE(z.conserved);
    CHECK(z.max_deviation > 1e-3);
  }

  TEST_CASE("word values are invariant under gauge and flow") {
    const auto p = testing::bn(2, 2, 1, 0.7, 1.2, 1.4);
    const auto s = embed(testing::draw<ReducedStateBn>(p, 4), p);
    const auto moved = randomize_gauge(exact_flow(s, 0.913, p.omega), 17);
    for (const auto& w : generate_pool(4, p)) {
      const double a = invariant_value(w, UnreducedState(s), p.omega);
      const double b = invariant_value(w, UnreducedState(moved), p.omega);
      CHECK_MESSAGE(std::abs(a - b) <= 1e-11 * std::max(1.0, std::abs(a)), w.to_string());
    }
  }

  TEST_CASE("pool structure") {
    const auto p = testing::gh(2, 2);
    const auto pool2 = generate_pool(2, p);
    CHECK(has_word(pool2, "Z.Zd/Re"));
    CHECK(has_word(pool2, "S/Re"));
    CHECK_FALSE(has_word(pool2, "Z.Zd/Im"));
    CHECK_FALSE(has_word(pool2, "Zd.Z/Re"));
    std::set<std::pair<std::vector<Letter>, WordPart>> keys;
    for (const auto& w : pool2) {
      CHECK(w.balanced());
      CHECK(keys.insert({canonical_letters(w.letters), w.part}).second);
      CHECK(W(w.to_string()).to_string() == w.to_string());
    }
    std::size_t last = 0;
    for (int L = 1; L <= 4; ++L) {
      const auto pool = generate_pool(L, p);
      CHECK(pool.size() > last);
      last = pool.size();
    }
    // The aggregate alphabet drops P letters; B_n gains S2 only when ell2 > 0.
    const auto agg = pool_alphabet(testing::bn(2, 1, 1), {PoolAlphabet::Aggregate});
    CHECK(std::count_if(agg.begin(), agg.end(), [](const Letter& l) { return l.kind == LetterKind::S2; }) == 1);
    const auto agg0 = pool_alphabet(testing::bn(2, 1, 0), {PoolAlphabet::Aggregate});
    CHECK(std::none_of(agg0.begin(), agg0.end(), [](const Letter& l) { return l.kind == LetterKind::S2; }));
  }

  TEST_CASE("canonical form is invariant under rotation and adjoint") {
    const auto w = W("Z.S.Zd.P(0,1)/Re");
    auto rotated = w.letters;
    std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
    std::vector<Letter> adj;
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) adj.push_back(it->adjoint());
    CHECK(canonical_letters(rotated) == canonical_letters(w.letters));
    CHECK(canonical_letters(adj) == canonical_letters(w.letters));
    CHECK_THROWS_AS(W("Q/Re"), Error);
    CHECK_THROWS_AS(W("Z.Zd/Xx"), Error);
  }

  TEST_CASE("rank of a single invariant") {
    const auto p = testing::gh(2, 2);
    const ReducedState r = testing::draw<ReducedStateGH>(p, 1);
    const auto rep = rank_of_invariants({W("Z.Zd/Re")}, r, p);
    CHECK(rep.rank == 1);
    CHECK(rep.dimension == 8);
  }

  TEST_CASE("rank saturates at dimension - 1") {
    SaturationOptions o;
    o.max_len = 6;
    for (const auto& p : {testing::gh(2, 2), testing::bn(2, 1, 1)}) {
      const ReducedState r = random_reduced(p, 11);
      const auto sat = saturate_rank(r, p, o);
      CHECK(sat.saturated);
      CHECK(sat.rank == 7);
      CHECK(sat.dimension == 8);
      CHECK(sat.steps.back().report.gap_ratio >= 1e3);

      // A different chart gives the same rank; adding words cannot raise it.
      const auto pool = generate_pool(sat.steps.back().max_len, p);
      RankOptions ro;
      ro.chart_seed = 12345;
      CHECK(rank_of_invariants(pool, r, p, ro).rank == 7);
      auto bigger = pool;
      bigger.push_back(W("Z.Zd.Z.Zd.Z.Zd/Re"));
      CHECK(rank_of_invariants(bigger, r, p).rank == 7);
    }
  }

  TEST_CASE("aggregate alphabet does not separate the spin directions") {
    SaturationOptions o;
    o.pool.alphabet = PoolAlphabet::Aggregate;
    o.max_len = 6;
    const auto p = testing::gh(2, 2);
    const auto sat = saturate_rank(random_reduced(p, 11), p, o);
    CHECK(sat.rank < 7);
  }

  TEST_CASE("short pools do not saturate") {
    SaturationOptions o;
    o.max_len = 2;
    const auto p = testing::gh(2, 2);
    const auto sat = saturate_rank(random_reduced(p, 11), p, o);
    CHECK_FALSE(sat.saturated);
    CHECK(sat.steps.size() == 1);
  }

  TEST_CASE("rank errors") {
    const auto pl = testing::lie(3);
    CHECK_THROWS_AS(rank_of_invariants({W("Z.Zd/Re")}, random_reduced(pl, 1), pl), Error);
    const auto p = testing::gh(2, 2);
    RankOptions o;
    o.min_gap = 1e30;
    try {
      (void)rank_of_invariants(generate_pool(4, p), random_reduced(p, 1), p, o);
      FAIL("expected RankUnstable");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RankUnstable);
    }
  }
}
