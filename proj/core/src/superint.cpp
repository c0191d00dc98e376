#include "isocm/superint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "isocm/errors.hpp"
#include "isocm/gauge.hpp"
#include "isocm/oscillator.hpp"

namespace isocm {

Letter Letter::adjoint() const {
  switch (kind) {
    case LetterKind::Z: return {LetterKind::Zd, 0, 0};
    case LetterKind::Zd: return {LetterKind::Z, 0, 0};
    case LetterKind::P: return {LetterKind::P, b, a};
    default: return *this;
  }
}

std::string Letter::to_string() const {
  switch (kind) {
    case LetterKind::Z: return "Z";
    case LetterKind::Zd: return "Zd";
    case LetterKind::S: return "S";
    case LetterKind::S2: return "S2";
    case LetterKind::P: return "P(" + std::to_string(a) + "," + std::to_string(b) + ")";
  }
  return "?";
}

bool InvariantWord::balanced() const {
  if (letters.empty()) return false;
  long balance = 0;
  for (const Letter& l : letters) {
    if (l.kind == LetterKind::Z) ++balance;
    if (l.kind == LetterKind::Zd) --balance;
  }
  return balance == 0;
}

std::string InvariantWord::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (i) out += '.';
    out += letters[i].to_string();
  }
  out += part == WordPart::Re ? "/Re" : "/Im";
  return out;
}

InvariantWord InvariantWord::parse(const std::string& text) {
  const auto slash = text.rfind('/');
  if (slash == std::string::npos) throw Error(ErrorKind::InvalidConfig, "word '" + text + "': missing /Re or /Im");
  InvariantWord w;
  const std::string part = text.substr(slash + 1);
  if (part == "Re") w.part = WordPart::Re;
  else if (part == "Im") w.part = WordPart::Im;
  else throw Error(ErrorKind::InvalidConfig, "word '" + text + "': part must be Re or Im");
  std::stringstream ss(text.substr(0, slash));
  std::string tok;
  while (std::getline(ss, tok, '.')) {
    if (tok == "Z") w.letters.push_back({LetterKind::Z});
    else if (tok == "Zd") w.letters.push_back({LetterKind::Zd});
    else if (tok == "S") w.letters.push_back({LetterKind::S});
    else if (tok == "S2") w.letters.push_back({LetterKind::S2});
    else {
      int a = -1, b = -1;
      char close = 0;
      if (std::sscanf(tok.c_str(), "P(%d,%d%c", &a, &b, &close) != 3 || close != ')' || a < 0 || b < 0)
        throw Error(ErrorKind::InvalidConfig, "word '" + text + "': unknown letter '" + tok + "'");
      w.letters.push_back({LetterKind::P, a, b});
    }
  }
  if (w.letters.empty()) throw Error(ErrorKind::InvalidConfig, "word '" + text + "' is empty");
  return w;
}

namespace {

// Letter matrices at one unreduced state.
struct LetterBank {
  CMatrix Z, Zd, S, S2;
  CMatrix spin;  // columns are the spin vectors entering P(a, b)
  bool has_spin = false;
  bool has_s2 = false;
  mutable std::map<std::pair<int, int>, CMatrix> p_cache;

  const CMatrix& P(int a, int b) const {
    if (!has_spin || a >= spin.cols() || b >= spin.cols())
      throw Error(ErrorKind::DimensionMismatch, "letter P(" + std::to_string(a) + "," + std::to_string(b) +
                                                    ") is not available for this family");
    auto it = p_cache.find({a, b});
    if (it == p_cache.end()) it = p_cache.emplace(std::make_pair(a, b), spin.col(a) * spin.col(b).adjoint()).first;
    return it->second;
  }

  const CMatrix& get(const Letter& l) const {
    switch (l.kind) {
      case LetterKind::Z: return Z;
      case LetterKind::Zd: return Zd;
      case LetterKind::S:
        if (!has_spin) throw Error(ErrorKind::DimensionMismatch, "letter S is not available for this family");
        return S;
      case LetterKind::S2:
        if (!has_s2) throw Error(ErrorKind::DimensionMismatch, "letter S2 is only available for the B_n family");
        return S2;
      case LetterKind::P: return P(l.a, l.b);
    }
    throw Error(ErrorKind::DimensionMismatch, "unknown letter");
  }
};

LetterBank make_bank(const UnreducedState& state, double omega) {
  LetterBank bank;
  if (const auto* gh = std::get_if<UnreducedStateGH>(&state)) {
    bank.Z = to_osc(*gh, omega).Z;
    bank.spin = gh->zeta;
    bank.S = gh->zeta * gh->zeta.adjoint();
    bank.has_spin = true;
  } else if (const auto* bn = std::get_if<UnreducedStateBn>(&state)) {
    const Eigen::Index n = bn->n();
    const Eigen::Index l1 = bn->zeta.cols(), l2 = bn->eta.cols();
    bank.Z = to_osc(*bn, omega).Z;
    bank.spin = CMatrix::Zero(2 * n, l1 + l2);
    bank.spin.topLeftCorner(n, l1) = bn->zeta;
    bank.spin.bottomRightCorner(n, l2) = bn->eta;
    bank.S = CMatrix::Zero(2 * n, 2 * n);
    bank.S.topLeftCorner(n, n) = bn->zeta * bn->zeta.adjoint();
    bank.S2 = CMatrix::Zero(2 * n, 2 * n);
    bank.S2.bottomRightCorner(n, n) = bn->eta * bn->eta.adjoint();
    bank.has_spin = true;
    bank.has_s2 = true;
  } else {
    bank.Z = to_osc(std::get<UnreducedStateLie>(state), omega).Z;
  }
  bank.Zd = bank.Z.adjoint();
  return bank;
}

double evaluate_word(const InvariantWord& word, const LetterBank& bank) {
  CMatrix prod = bank.get(word.letters.front());
  for (std::size_t i = 1; i < word.letters.size(); ++i) prod = prod * bank.get(word.letters[i]);
  const cplx tr = prod.trace();
  return word.part == WordPart::Re ? tr.real() : tr.imag();
}

std::vector<Letter> min_rotation(const std::vector<Letter>& w) {
  std::vector<Letter> best = w;
  std::vector<Letter> rot = w;
  for (std::size_t i = 1; i < w.size(); ++i) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

std::vector<Letter> adjoint_letters(const std::vector<Letter>& w) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(it->adjoint());
  return out;
}

}  // namespace

double raw_word_value(const InvariantWord& word, const UnreducedState& state, double omega) {
  if (word.letters.empty()) throw Error(ErrorKind::UnbalancedWord, "empty word");
  return evaluate_word(word, make_bank(state, omega));
}

double invariant_value(const InvariantWord& word, const UnreducedState& state, double omega) {
  if (!word.balanced()) throw Error(ErrorKind::UnbalancedWord, "word " + word.to_string() + " is not balanced");
  return raw_word_value(word, state, omega);
}

ConservationResult conservation_check(const InvariantWord& word, const std::vector<UnreducedState>& samples,
                                      double omega, double tol) {
  ConservationResult res;
  if (samples.empty()) return res;
  const double f0 = raw_word_value(word, samples.front(), omega);
  for (const UnreducedState& s : samples)
    res.max_deviation = std::max(res.max_deviation, std::abs(raw_word_value(word, s, omega) - f0));
  res.conserved = res.max_deviation <= tol;
  return res;
}

std::vector<Letter> canonical_letters(const std::vector<Letter>& letters) {
  return std::min(min_rotation(letters), min_rotation(adjoint_letters(letters)));
}

std::vector<Letter> pool_alphabet(const ModelParams& params, const PoolOptions& opts) {
  std::vector<Letter> alpha{{LetterKind::Z}, {LetterKind::Zd}};
  int m = 0;
  switch (params.family) {
    case Family::LieA: return alpha;
    case Family::GibbonsHermsen:
      alpha.push_back({LetterKind::S});
      m = params.ell;
      break;
    case Family::BnType:
      alpha.push_back({LetterKind::S});
      if (params.ell2 > 0) alpha.push_back({LetterKind::S2});
      m = params.ell1 + params.ell2;
      break;
  }
  if (opts.alphabet == PoolAlphabet::Resolved)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) alpha.push_back({LetterKind::P, a, b});
  return alpha;
}

std::vector<InvariantWord> generate_pool(int max_len, const ModelParams& params, const PoolOptions& opts) {
  if (max_len < 1) throw Error(ErrorKind::InvalidConfig, "generate_pool: max_len must be positive");
  const std::vector<Letter> alpha = pool_alphabet(params, opts);
  std::set<std::vector<Letter>> seen;
  std::vector<std::vector<Letter>> keys;
  std::vector<Letter> word;

  auto visit = [&](auto&& self, int balance) -> void {
    if (!word.empty() && balance == 0) {
      std::vector<Letter> key = canonical_letters(word);
      if (seen.insert(key).second) keys.push_back(std::move(key));
    }
    if (static_cast<int>(word.size()) == max_len) return;
    // Prune: the remaining letters must be able to restore balance.
    const int remaining = max_len - static_cast<int>(word.size()) - 1;
    for (const Letter& l : alpha) {
      const int nb = balance + (l.kind == LetterKind::Z) - (l.kind == LetterKind::Zd);
      if (std::abs(nb) > remaining) continue;
      word.push_back(l);
      self(self, nb);
      word.pop_back();
    }
  };
  visit(visit, 0);

  std::sort(keys.begin(), keys.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  std::vector<InvariantWord> pool;
  for (const auto& key : keys) {
    pool.push_back({key, WordPart::Re});
    // The trace is real when the word equals its adjoint up to rotation.
    if (min_rotation(key) != min_rotation(adjoint_letters(key))) pool.push_back({key, WordPart::Im});
  }
  return pool;
}

namespace {

// Local chart of the reduced space around a regular point:
//   x = (q, p, for each spin row j: Re/Im coordinates along an orthonormal basis of zhat_j^perp).
class ReducedChart {
 public:
  ReducedChart(const ReducedState& point, const ModelParams& params, std::uint64_t seed) : params_(params) {
    if (const auto* gh = std::get_if<ReducedStateGH>(&point)) {
      q_ = gh->q;
      p_ = gh->p;
      rows_ = gh->zeta;
      radius_ = std::sqrt(params.c);
    } else if (const auto* bn = std::get_if<ReducedStateBn>(&point)) {
      q_ = bn->q;
      p_ = bn->p;
      rows_.resize(bn->q.size(), bn->zeta.cols() + bn->eta.cols());
      rows_ << bn->zeta, bn->eta;
      radius_ = std::sqrt(params.c1 + params.c2);
      split_ = bn->zeta.cols();
    } else {
      throw Error(ErrorKind::InvalidConfig, "rank_of_invariants: the LieA reduced space is not symplectic");
    }
    const Eigen::Index n = q_.size();
    const Eigen::Index m = rows_.cols();
    Rng rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (Eigen::Index j = 0; j < n; ++j) {
      CVector zhat = rows_.row(j).transpose();
      const double nrm = zhat.norm();
      if (!(nrm > 0.0)) throw Error(ErrorKind::DegenerateSpectrum, "rank_of_invariants: zero spin row");
      zhat /= nrm;
      if (seed != 0) zhat *= std::polar(1.0, angle(rng));
      CMatrix aug(m, m + 1);
      aug << zhat, CMatrix::Identity(m, m);
      Eigen::HouseholderQR<CMatrix> qr(aug);
      CMatrix Q = qr.householderQ() * CMatrix::Identity(m, m);
      CMatrix tangent = Q.rightCols(m - 1);
      if (seed != 0 && m > 1) tangent = tangent * random_unitary(m - 1, rng);
      base_.push_back(zhat);
      tangent_.push_back(tangent);
    }
    dim_ = static_cast<int>(2 * n + 2 * n * (m - 1));
  }

  int dimension() const { return dim_; }

  UnreducedState embed_at(const RVector& x) const {
    const Eigen::Index n = q_.size();
    const Eigen::Index m = rows_.cols();
    RVector q = q_ + x.head(n);
    RVector p = p_ + x.segment(n, n);
    CMatrix rows(n, m);
    Eigen::Index at = 2 * n;
    for (Eigen::Index j = 0; j < n; ++j) {
      CVector v = base_[static_cast<std::size_t>(j)];
      for (Eigen::Index t = 0; t < m - 1; ++t) {
        v += cplx(x(at), x(at + 1)) * tangent_[static_cast<std::size_t>(j)].col(t);
        at += 2;
      }
      rows.row(j) = (radius_ / v.norm()) * v.transpose();
    }
    if (params_.family == Family::GibbonsHermsen)
      return embed(ReducedStateGH{std::move(q), std::move(p), std::move(rows)}, params_);
    return embed(ReducedStateBn{std::move(q), std::move(p), rows.leftCols(split_), rows.rightCols(m - split_)},
                 params_);
  }

  std::string describe(std::uint64_t seed) const {
    std::ostringstream os;
    os << "q(" << q_.size() << "), p(" << p_.size() << "), " << q_.size() << " spin rows x " << 2 * (rows_.cols() - 1)
       << " real tangent coordinates each; row radius " << radius_ << "; gauge seed " << seed;
    return os.str();
  }

 private:
  ModelParams params_;
  RVector q_, p_;
  CMatrix rows_;
  Eigen::Index split_ = 0;
  double radius_ = 1.0;
  std::vector<CVector> base_;
  std::vector<CMatrix> tangent_;
  int dim_ = 0;
};

RVector evaluate_all(const std::vector<InvariantWord>& words, const UnreducedState& state, double omega) {
  const LetterBank bank = make_bank(state, omega);
  RVector v(static_cast<Eigen::Index>(words.size()));
  for (std::size_t i = 0; i < words.size(); ++i) v(static_cast<Eigen::Index>(i)) = evaluate_word(words[i], bank);
  return v;
}

}  // namespace

RankReport rank_of_invariants(const std::vector<InvariantWord>& words, const ReducedState& point,
                              const ModelParams& params, const RankOptions& opts) {
  for (const InvariantWord& w : words)
    if (!w.balanced()) throw Error(ErrorKind::UnbalancedWord, "word " + w.to_string() + " is not balanced");
  if (!(opts.fd_step > 0.0) || !(opts.svd_tol > 0.0))
    throw Error(ErrorKind::InvalidConfig, "rank_of_invariants: fd_step and svd_tol must be positive");
  const ReducedChart chart(point, params, opts.chart_seed);
  const int dim = chart.dimension();
  const Eigen::Index rows = static_cast<Eigen::Index>(words.size());

  RVector x0 = RVector::Zero(dim);
  const RVector f0 = evaluate_all(words, chart.embed_at(x0), params.omega);
  RMatrix J(rows, dim);
  const double h = opts.fd_step;
  for (int i = 0; i < dim; ++i) {
    auto at = [&](double s) {
      RVector x = x0;
      x(i) = s * h;
      return evaluate_all(words, chart.embed_at(x), params.omega);
    };
    J.col(i) = (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h);
  }

  // Rows are normalized so that every invariant counts equally; rows whose gradient is at the
  // level of the difference noise (constant words such as tr S) are dropped.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double nrm = J.row(r).norm();
    const double noise = 1e-9 * std::max(1.0, std::abs(f0(r)));
    if (nrm > noise) keep.push_back(r);
  }
  RMatrix Js(static_cast<Eigen::Index>(keep.size()), dim);
  for (std::size_t k = 0; k < keep.size(); ++k)
    Js.row(static_cast<Eigen::Index>(k)) = J.row(keep[k]) / J.row(keep[k]).norm();

  RankReport rep;
  rep.dimension = dim;
  rep.num_words = words.size();
  rep.rows_used = keep.size();
  rep.chart = chart.describe(opts.chart_seed);
  if (Js.rows() > 0) {
    Eigen::JacobiSVD<RMatrix> svd(Js);
    const RVector sv = svd.singularValues();
    rep.singular_values.assign(sv.data(), sv.data() + sv.size());
  }
  const double smax = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
  for (double s : rep.singular_values)
    if (smax > 0.0 && s >= opts.svd_tol * smax) ++rep.rank;
  const auto r = static_cast<std::size_t>(rep.rank);
  if (r == 0 || r >= rep.singular_values.size()) {
    rep.gap_ratio = std::numeric_limits<double>::infinity();
  } else {
    const double below = rep.singular_values[r];
    rep.gap_ratio = below > 0.0 ? rep.singular_values[r - 1] / below : std::numeric_limits<double>::infinity();
  }
  if (rep.rank > dim - 1)
    throw Error(ErrorKind::RankUnstable, "rank " + std::to_string(rep.rank) + " exceeds dim - 1 = " +
                                             std::to_string(dim - 1) + "; the flow direction must lie in the kernel");
  if (rep.gap_ratio < opts.min_gap) {
    std::ostringstream os;
    os << "no spectral gap at the cut: sigma_" << rep.rank << "/sigma_" << rep.rank + 1 << " = " << rep.gap_ratio;
    throw Error(ErrorKind::RankUnstable, os.str());
  }
  return rep;
}

SaturationReport saturate_rank(const ReducedState& point, const ModelParams& params, const SaturationOptions& opts) {
  if (opts.min_len < 1 || opts.max_len < opts.min_len)
    throw Error(ErrorKind::InvalidConfig, "saturate_rank: need 1 <= min_len <= max_len");
  SaturationReport out;
  for (int len = opts.min_len; len <= opts.max_len; ++len) {
    const std::vector<InvariantWord> pool = generate_pool(len, params, opts.pool);
    RankReport rep = rank_of_invariants(pool, point, params, opts.rank);
    out.dimension = rep.dimension;
    out.rank = rep.rank;
    out.steps.push_back({len, pool.size(), std::move(rep)});
    const std::size_t k = out.steps.size();
    if (k >= 2 && out.steps[k - 1].report.rank == out.dimension - 1 && out.steps[k - 2].report.rank == out.dimension - 1) {
      out.saturated = true;
      break;
    }
    if (k >= 3 && out.steps[k - 1].report.rank == out.steps[k - 2].report.rank &&
        out.steps[k - 2].report.rank == out.steps[k - 3].report.rank) {
      out.saturated = true;
      break;
    }
  }
  return out;
}

nlohmann::json to_json(const RankReport& report) {
  nlohmann::json j;
  j["rank"] = report.rank;
  j["dimension"] = report.dimension;
  j["singular_values"] = report.singular_values;
  if (std::isfinite(report.gap_ratio)) j["gap_ratio"] = report.gap_ratio;
  else j["gap_ratio"] = nullptr;
  j["num_words"] = report.num_words;
  j["rows_used"] = report.rows_used;
  j["chart"] = report.chart;
  return j;
}

nlohmann::json to_json(const SaturationReport& report) {
  nlohmann::json j;
  j["rank"] = report.rank;
  j["dimension"] = report.dimension;
  j["target_rank"] = report.dimension - 1;
  j["saturated"] = report.saturated;
  nlohmann::json steps = nlohmann::json::array();
  for (const SaturationStep& s : report.steps) {
    nlohmann::json e = to_json(s.report);
    e["max_len"] = s.max_len;
    e["pool_size"] = s.pool_size;
    steps.push_back(std::move(e));
  }
  j["steps"] = std::move(steps);
  return j;
}

}  // namespace isocm
