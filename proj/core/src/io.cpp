#include "isocm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <nlohmann/json.hpp>

#include "isocm/errors.hpp"
#include "isocm/gauge.hpp"

namespace isocm {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

using nlohmann::json;

json vector_json(const RVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    json row = json::array();
    for (Eigen::Index a = 0; a < m.cols(); ++a) row.push_back(json::array({m(j, a).real(), m(j, a).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::InvalidConfig, "state: " + msg); }

RVector vector_from(const json& j, const char* key, Eigen::Index n) {
  if (!j.contains(key)) bad(std::string("missing '") + key + "'");
  const json& a = j.at(key);
  if (!a.is_array()) bad(std::string("'") + key + "' must be an array");
  if (static_cast<Eigen::Index>(a.size()) != n)
    throw Error(ErrorKind::DimensionMismatch, std::string("state: '") + key + "' must have " + std::to_string(n) +
                                                  " entries");
  RVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const json& x = a[static_cast<std::size_t>(i)];
    if (!x.is_number()) bad(std::string("'") + key + "' entries must be numbers");
    v(i) = x.get<double>();
    if (!std::isfinite(v(i))) bad(std::string("'") + key + "' entries must be finite");
  }
  return v;
}

CMatrix matrix_from(const json& j, const char* key, Eigen::Index rows, Eigen::Index cols) {
  if (!j.contains(key)) {
    if (rows * cols == 0) return CMatrix(rows, cols);
    bad(std::string("missing '") + key + "'");
  }
  const json& a = j.at(key);
  if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != rows)
    throw Error(ErrorKind::DimensionMismatch, std::string("state: '") + key + "' must have " + std::to_string(rows) +
                                                  " rows");
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = a[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw Error(ErrorKind::DimensionMismatch, std::string("state: rows of '") + key + "' must have " +
                                                    std::to_string(cols) + " entries");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& z = row[static_cast<std::size_t>(c)];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        bad(std::string("entries of '") + key + "' must be [re, im] pairs");
      m(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
      if (!std::isfinite(m(r, c).real()) || !std::isfinite(m(r, c).imag()))
        bad(std::string("entries of '") + key + "' must be finite");
    }
  }
  return m;
}

void require_keys(const json& j, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) bad("expected an object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) bad("unknown key '" + k + "'");
  }
}

void require_chamber(const RVector& q, bool positive) {
  for (Eigen::Index j = 0; j + 1 < q.size(); ++j)
    if (!(q(j) > q(j + 1))) throw Error(ErrorKind::DegenerateSpectrum, "state: q must be strictly decreasing");
  if (positive && q.size() && !(q(q.size() - 1) > 0.0))
    throw Error(ErrorKind::DegenerateSpectrum, "state: q must be positive for the B_n family");
}

}  // namespace

json to_json(const ReducedStateGH& s) {
  return json{{"q", vector_json(s.q)}, {"p", vector_json(s.p)}, {"zeta", matrix_json(s.zeta)}};
}

json to_json(const ReducedStateBn& s) {
  return json{{"q", vector_json(s.q)}, {"p", vector_json(s.p)}, {"zeta", matrix_json(s.zeta)}, {"eta", matrix_json(s.eta)}};
}

json to_json(const ReducedStateLie& s) {
  return json{{"q", vector_json(s.q)}, {"p", vector_json(s.p)}, {"xi", matrix_json(s.xi)}};
}

json to_json(const ReducedState& s) {
  return std::visit([](const auto& r) { return to_json(r); }, s);
}

ReducedState reduced_state_from_json(const json& j, const ModelParams& params, double constraint_tol) {
  const Eigen::Index n = params.n;
  const double tol = constraint_tol;
  switch (params.family) {
    case Family::GibbonsHermsen: {
      require_keys(j, {"q", "p", "zeta"});
      ReducedStateGH s{vector_from(j, "q", n), vector_from(j, "p", n), matrix_from(j, "zeta", n, params.ell)};
      require_chamber(s.q, false);
      for (Eigen::Index r = 0; r < n; ++r)
        if (std::abs(s.zeta.row(r).squaredNorm() - params.c) > tol * std::max(1.0, std::abs(params.c)))
          throw Error(ErrorKind::ConstraintViolation, "state: |zeta_j|^2 must equal c");
      return canonicalize(std::move(s));
    }
    case Family::BnType: {
      require_keys(j, {"q", "p", "zeta", "eta"});
      ReducedStateBn s{vector_from(j, "q", n), vector_from(j, "p", n), matrix_from(j, "zeta", n, params.ell1),
                       matrix_from(j, "eta", n, params.ell2)};
      require_chamber(s.q, true);
      const double c = params.c1 + params.c2;
      for (Eigen::Index r = 0; r < n; ++r)
        if (std::abs(s.zeta.row(r).squaredNorm() + s.eta.row(r).squaredNorm() - c) > tol * std::max(1.0, std::abs(c)))
          throw Error(ErrorKind::ConstraintViolation, "state: |zeta_j|^2 + |eta_j|^2 must equal c1 + c2");
      return canonicalize(std::move(s));
    }
    case Family::LieA: {
      require_keys(j, {"q", "p", "xi"});
      ReducedStateLie s{vector_from(j, "q", n), vector_from(j, "p", n), matrix_from(j, "xi", n, n)};
      require_chamber(s.q, false);
      if (max_abs(CMatrix(s.xi + s.xi.adjoint())) > tol || (n && s.xi.diagonal().cwiseAbs().maxCoeff() > tol))
        throw Error(ErrorKind::ConstraintViolation, "state: xi must be anti-Hermitian with zero diagonal");
      return canonicalize(std::move(s));
    }
  }
  bad("unknown family");
}

std::vector<std::string> csv_columns(const ModelParams& params) {
  std::vector<std::string> cols{"t"};
  const int n = params.n;
  for (int j = 1; j <= n; ++j) cols.push_back("q" + std::to_string(j));
  for (int j = 1; j <= n; ++j) cols.push_back("p" + std::to_string(j));
  auto spin = [&](const std::string& name, int rows, int ncols) {
    for (int j = 1; j <= rows; ++j)
      for (int a = 1; a <= ncols; ++a) {
        const std::string base = name + "_" + std::to_string(j) + "_" + std::to_string(a);
        cols.push_back(base + "_re");
        cols.push_back(base + "_im");
      }
  };
  switch (params.family) {
    case Family::GibbonsHermsen: spin("zeta", n, params.ell); break;
    case Family::BnType:
      spin("zeta", n, params.ell1);
      spin("eta", n, params.ell2);
      break;
    case Family::LieA: spin("xi", n, n); break;
  }
  cols.push_back("energy");
  cols.push_back("constraint_residual");
  return cols;
}

namespace {

void append_matrix(std::string& line, const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    for (Eigen::Index a = 0; a < m.cols(); ++a) {
      line += ',';
      line += format_double(m(j, a).real());
      line += ',';
      line += format_double(m(j, a).imag());
    }
}

void append_spin(std::string& line, const ReducedStateGH& s) { append_matrix(line, s.zeta); }
void append_spin(std::string& line, const ReducedStateBn& s) {
  append_matrix(line, s.zeta);
  append_matrix(line, s.eta);
}
void append_spin(std::string& line, const ReducedStateLie& s) { append_matrix(line, s.xi); }

template <class State>
std::string csv_impl(const Trajectory<State>& traj, const ModelParams& params) {
  std::string out;
  const std::vector<std::string> cols = csv_columns(params);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const State& s = traj.states[i];
    std::string line = format_double(traj.times[i]);
    for (Eigen::Index j = 0; j < s.q.size(); ++j) line += ',' + format_double(s.q(j));
    for (Eigen::Index j = 0; j < s.p.size(); ++j) line += ',' + format_double(s.p(j));
    append_spin(line, s);
    line += ',' + format_double(traj.energy[i]);
    line += ',' + format_double(traj.constraint_residual[i]);
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace

std::string trajectory_csv(const Trajectory<ReducedStateGH>& traj, const ModelParams& params) {
  return csv_impl(traj, params);
}
std::string trajectory_csv(const Trajectory<ReducedStateBn>& traj, const ModelParams& params) {
  return csv_impl(traj, params);
}
std::string trajectory_csv(const Trajectory<ReducedStateLie>& traj, const ModelParams& params) {
  return csv_impl(traj, params);
}

std::string distance_csv(const std::vector<std::pair<double, double>>& table) {
  std::string out = "t,reduced_distance\n";
  for (const auto& [t, d] : table) out += format_double(t) + ',' + format_double(d) + '\n';
  return out;
}

template <class State>
json trajectory_summary(const Trajectory<State>& traj) {
  json j;
  j["samples"] = traj.states.size();
  j["energy_drift"] = traj.energy_drift();
  j["max_constraint_residual"] = traj.max_constraint_residual();
  j["accepted_steps"] = traj.stats.accepted;
  j["rejected_steps"] = traj.stats.rejected;
  j["rhs_evaluations"] = traj.stats.rhs_evaluations;
  double worst = 0.0;
  for (double e : traj.stats.step_errors) worst = std::max(worst, e);
  j["max_scaled_step_error"] = worst;
  json fails = json::array();
  for (const SampleFailure& f : traj.failures) fails.push_back({{"t", f.t}, {"kind", f.kind}, {"message", f.message}});
  j["failures"] = std::move(fails);
  return j;
}

template json trajectory_summary(const Trajectory<ReducedStateGH>&);
template json trajectory_summary(const Trajectory<ReducedStateBn>&);
template json trajectory_summary(const Trajectory<ReducedStateLie>&);

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

}  // namespace isocm
