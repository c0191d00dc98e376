#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "isocm/linalg.hpp"
#include "isocm/params.hpp"
#include "isocm/state.hpp"

namespace isocm {

/// Letters of a trace word.
///  - Z, Zd: oscillator coordinate and its adjoint.
///  - S: zeta zeta^dagger (B_n: block diag(zeta zeta^dagger, 0)); S2: block diag(0, eta eta^dagger).
///  - P(a, b): Xi E_ab Xi^dagger with Xi = zeta (GH) or block diag(zeta, eta) (B_n), i.e. the
///    outer product of spin columns a and b. These resolve the spin dependence that S and S2
///    only see through sums.
enum class LetterKind { Z, Zd, S, S2, P };

struct Letter {
  LetterKind kind = LetterKind::Z;
  int a = 0;
  int b = 0;

  /// Letter of the adjoint matrix (Z <-> Zd, P(a,b) <-> P(b,a), S and S2 self-adjoint).
  Letter adjoint() const;
  std::string to_string() const;
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

enum class WordPart { Re, Im };

struct InvariantWord {
  std::vector<Letter> letters;
  WordPart part = WordPart::Re;

  /// count(Z) == count(Zd) and nonempty.
  bool balanced() const;
  /// e.g. "Z.S.Zd/Re"
  std::string to_string() const;
  /// Inverse of to_string; throws InvalidConfig on malformed input.
  static InvariantWord parse(const std::string& text);
};

/// Value of the word on an unreduced state: Re or Im of the trace of the letter product.
/// Throws UnbalancedWord for unbalanced words and DimensionMismatch for letters the family
/// does not provide.
double invariant_value(const InvariantWord& word, const UnreducedState& state, double omega);

/// Same evaluation without the balance check.
double raw_word_value(const InvariantWord& word, const UnreducedState& state, double omega);

struct ConservationResult {
  double max_deviation = 0.0;
  bool conserved = true;
};

/// max_t |F(t) - F(0)| over the samples; `conserved` is max_deviation <= tol.
/// Unbalanced words are evaluated as they are (and normally come out non-conserved).
ConservationResult conservation_check(const InvariantWord& word, const std::vector<UnreducedState>& samples,
                                      double omega, double tol = 1e-12);

enum class PoolAlphabet {
  /// {Z, Zd, S, S2, P(a,b)}
  Resolved,
  /// {Z, Zd, S, S2} only.
  Aggregate,
};

struct PoolOptions {
  PoolAlphabet alphabet = PoolAlphabet::Resolved;
};

/// Alphabet available to a family under the chosen option.
std::vector<Letter> pool_alphabet(const ModelParams& params, const PoolOptions& opts = {});

/// Balanced words of length 1..max_len over the family alphabet, deduplicated up to cyclic
/// rotation and the adjoint symmetry. Re parts are always emitted; Im parts only when the word
/// is not self-adjoint up to rotation (otherwise the trace is real).
std::vector<InvariantWord> generate_pool(int max_len, const ModelParams& params, const PoolOptions& opts = {});

/// Canonical key of a word up to rotation and adjoint (used for deduplication).
std::vector<Letter> canonical_letters(const std::vector<Letter>& letters);

struct RankOptions {
  /// Step of the 5-point central differences, in chart units.
  double fd_step = 1e-3;
  /// Relative singular value cut.
  double svd_tol = 1e-8;
  /// Minimum ratio sigma_rank / sigma_{rank+1} for an accepted result.
  double min_gap = 1e3;
  /// Nonzero: re-gauge the chart (random row phases and a random unitary on the tangent
  /// basis of each spin row) from this seed.
  std::uint64_t chart_seed = 0;
};

struct RankReport {
  int rank = 0;
  int dimension = 0;
  std::vector<double> singular_values;
  /// sigma_rank / sigma_{rank+1}; +inf when nothing was cut.
  double gap_ratio = 0.0;
  std::size_t num_words = 0;
  std::size_t rows_used = 0;
  std::string chart;
};

/// Numerical rank of the differentials of the invariants at a reduced point, computed in the
/// chart (q, p, spin chart coordinates) through the slice embedding. Throws RankUnstable if the
/// spectrum has no gap of at least min_gap at the cut or if rank exceeds dimension - 1,
/// DegenerateSpectrum if the point is not regular, InvalidConfig for the LieA family.
RankReport rank_of_invariants(const std::vector<InvariantWord>& words, const ReducedState& point,
                              const ModelParams& params, const RankOptions& opts = {});

struct SaturationStep {
  int max_len = 0;
  std::size_t pool_size = 0;
  RankReport report;
};

struct SaturationReport {
  std::vector<SaturationStep> steps;
  int rank = 0;
  int dimension = 0;
  bool saturated = false;
};

struct SaturationOptions {
  int min_len = 2;
  int max_len = 6;
  PoolOptions pool;
  RankOptions rank;
};

/// Grows the pool length from min_len until the rank is dimension - 1 for two consecutive
/// lengths or unchanged over three consecutive lengths. `saturated` stays false when the cap
/// is reached first.
SaturationReport saturate_rank(const ReducedState& point, const ModelParams& params,
                               const SaturationOptions& opts = {});

nlohmann::json to_json(const RankReport& report);
nlohmann::json to_json(const SaturationReport& report);

}  // namespace isocm
