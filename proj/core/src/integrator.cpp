#include "isocm/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isocm/errors.hpp"

namespace isocm {

namespace {

// Dormand & Prince (1980) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner, dopri5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

double rms_norm(const RVector& v, const RVector& scale) {
  if (v.size() == 0) return 0.0;
  return std::sqrt((v.array() / scale.array()).square().mean());
}

// Componentwise bound: every entry of the local error estimate within its tolerance.
double max_norm(const RVector& v, const RVector& scale) {
  if (v.size() == 0) return 0.0;
  return (v.array() / scale.array()).abs().maxCoeff();
}

}  // namespace

std::vector<RVector> integrate_dopri5(const OdeRhs& rhs, const RVector& y0, double t0,
                                      std::span<const double> sample_times, const DormandPrinceOptions& opts,
                                      IntegrationStats* stats, const StepObserver& observer) {
  IntegrationStats local;
  IntegrationStats& st = stats ? *stats : local;
  std::vector<RVector> out;
  out.reserve(sample_times.size());
  if (sample_times.empty()) return out;
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 || (i > 0 && sample_times[i] < sample_times[i - 1]))
      throw Error(ErrorKind::InvalidConfig, "integrate: sample times must be non-decreasing and >= t0");
  }

  const Eigen::Index dim = y0.size();
  const double t_end = sample_times.back();
  const double span = t_end - t0;
  const double h_min = opts.h_min_rel * std::max(1.0, std::abs(span));

  auto eval = [&](double t, const RVector& y, RVector& dy) {
    ++st.rhs_evaluations;
    rhs(t, y, dy);
  };

  std::size_t next = 0;
  while (next < sample_times.size() && sample_times[next] == t0) {
    out.push_back(y0);
    ++next;
  }
  if (next == sample_times.size()) return out;

  RVector y = y0;
  double t = t0;
  RVector k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), ytmp(dim), ynew(dim), err(dim), sc(dim);
  eval(t, y, k1);

  double h = opts.h_init;
  if (!(h > 0.0)) {
    sc = opts.atol + opts.rtol * y.cwiseAbs().array();
    const double dn0 = rms_norm(y, sc);
    const double dn1 = rms_norm(k1, sc);
    double h0 = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    h0 = std::min(h0, span);
    ytmp = y + h0 * k1;
    eval(t + h0, ytmp, k2);
    const double dn2 = rms_norm(k2 - k1, sc) / h0;
    const double dmax = std::max(dn1, dn2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 1.0 / 5.0);
    h = std::min({100.0 * h0, h1, span});
  }

  bool last_rejected = false;
  long steps = 0;
  while (next < sample_times.size()) {
    if (++steps > opts.max_steps) throw Error(ErrorKind::StepSizeUnderflow, "integrate: maximum number of steps exceeded");
    if (t + h > t_end) h = t_end - t;
    if (h < h_min && t + h < t_end)
      throw Error(ErrorKind::StepSizeUnderflow, "integrate: step size underflow at t = " + std::to_string(t));

    bool stage_failed = false;
    try {
      ytmp = y + h * a21 * k1;
      eval(t + c2 * h, ytmp, k2);
      ytmp = y + h * (a31 * k1 + a32 * k2);
      eval(t + c3 * h, ytmp, k3);
      ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      eval(t + c4 * h, ytmp, k4);
      ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      eval(t + c5 * h, ytmp, k5);
      ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      eval(t + h, ytmp, k6);
      ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      eval(t + h, ynew, k7);
    } catch (const ChamberBoundaryError& e) {
      if (h <= h_min) throw ChamberBoundaryError(t, std::string("trajectory left the regular region: ") + e.what());
      stage_failed = true;
    }
    if (stage_failed) {
      h = std::max(0.25 * h, h_min);
      ++st.rejected;
      last_rejected = true;
      continue;
    }

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    sc = opts.atol + opts.rtol * y.cwiseAbs().cwiseMax(ynew.cwiseAbs()).array();
    const double en = max_norm(err, sc);
    if (!std::isfinite(en)) {
      h *= 0.25;
      ++st.rejected;
      last_rejected = true;
      continue;
    }

    if (en <= 1.0) {
      // Dense output for every sample inside (t, t + h].
      const double t_new = t + h;
      if (next < sample_times.size() && sample_times[next] <= t_new) {
        const RVector ydiff = ynew - y;
        const RVector bspl = h * k1 - ydiff;
        const RVector r4 = ydiff - h * k7 - bspl;
        const RVector r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        while (next < sample_times.size() && sample_times[next] <= t_new) {
          if (sample_times[next] == t_new) {
            out.push_back(ynew);
          } else {
            const double th = (sample_times[next] - t) / h;
            const double th1 = 1.0 - th;
            out.push_back(y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
          }
          ++next;
        }
      }
      ++st.accepted;
      if (opts.record_steps) {
        st.step_sizes.push_back(h);
        st.step_errors.push_back(en);
      }
      t = t_new;
      y = ynew;
      k1 = k7;
      if (observer) {
        try {
          observer(t, y);
        } catch (const ChamberBoundaryError& e) {
          throw ChamberBoundaryError(t, e.what());
        }
      }
      double fac = 0.9 * std::pow(std::max(en, 1e-10), -0.2);
      fac = std::clamp(fac, 0.2, last_rejected ? 1.0 : 10.0);
      h *= fac;
      last_rejected = false;
    } else {
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
      ++st.rejected;
      last_rejected = true;
    }
  }
  return out;
}

}  // namespace isocm
