#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memsim/drive.hpp"
#include "memsim/element.hpp"
#include "memsim/errors.hpp"
#include "memsim/loop.hpp"
#include "memsim/timeseries.hpp"

namespace memsim {

enum class Method { RK4Fixed, RK45Adaptive };

inline const char* to_string(Method m) {
  return m == Method::RK4Fixed ? "rk4" : "rk45";
}

struct IntegratorConfig {
  Method method = Method::RK4Fixed;
  double dt = 1e-3;      // fixed step; initial trial step for the adaptive method
  double rtol = 1e-8;
  double atol = 1e-12;
  double dt_min = 1e-15;
  double dt_max = 0.0;   // <= 0: period / 256
  int n_periods = 4;
  double steady_tol = 1e-3;

  void validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt))
      throw InputError("integrator dt must be positive");
    if (method == Method::RK45Adaptive) {
      if (!(rtol > 0.0) || !(atol > 0.0))
        throw InputError("integrator rtol and atol must be positive");
      if (!(dt_min > 0.0))
        throw InputError("integrator dt_min must be positive");
    }
    if (n_periods < 2)
      throw InputError("integrator n_periods must be at least 2");
    if (!(steady_tol > 0.0))
      throw InputError("steady_tol must be positive");
  }
};

/// Generic first-order system advanced by the integrators.
///
/// `rate(t, t_inside, x, dx)`: `t_inside` is a time strictly inside the
/// current step and next to `t`; direction-dependent laws query the drive
/// there so that corners at step boundaries resolve to the step's own side.
/// `observe(t, x)` returns the (u, y) pair recorded with each sample.
struct OdeSystem {
  std::vector<StateBounds> bounds;
  std::vector<double> x0;
  std::function<void(double, double, std::span<const double>, std::span<double>)> rate;
  std::function<std::pair<double, double>(double, std::span<const double>)> observe;
  std::vector<double> breakpoints;
};

namespace detail {

inline void clamp_state(std::span<double> x, const std::vector<StateBounds>& b) {
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = std::clamp(x[i], b[i].lo, b[i].hi);
}

/// Evaluates the rate at a clamped copy of `x` and zeroes components that
/// would push a saturated state outward.
class ClampedRate {
public:
  explicit ClampedRate(const OdeSystem& sys) : sys_(sys), xc_(sys.x0.size()) {}

  void operator()(double t, double t_inside, std::span<const double> x, std::span<double> dx) {
    std::copy(x.begin(), x.end(), xc_.begin());
    clamp_state(xc_, sys_.bounds);
    sys_.rate(t, t_inside, xc_, dx);
    for (std::size_t i = 0; i < dx.size(); ++i) {
      if (!std::isfinite(dx[i]))
        throw NumericalError("non-finite state derivative", t);
      if ((xc_[i] <= sys_.bounds[i].lo && dx[i] < 0.0) ||
          (xc_[i] >= sys_.bounds[i].hi && dx[i] > 0.0))
        dx[i] = 0.0;
    }
  }

private:
  const OdeSystem& sys_;
  std::vector<double> xc_;
};

class Recorder {
public:
  Recorder(const OdeSystem& sys, TimeSeries& ts) : sys_(sys), ts_(ts) {
    ts_.x.assign(sys.x0.size(), {});
  }

  void operator()(double t, std::span<const double> x) {
    const auto [u, y] = sys_.observe(t, x);
    ts_.t.push_back(t);
    ts_.u.push_back(u);
    ts_.y.push_back(y);
    for (std::size_t i = 0; i < x.size(); ++i)
      ts_.x[i].push_back(x[i]);
  }

private:
  const OdeSystem& sys_;
  TimeSeries& ts_;
};

inline constexpr double kInsideFraction = 1e-6;

inline TimeSeries integrate_rk4(const OdeSystem& sys, double t_end, double dt) {
  const std::size_t n = sys.x0.size();
  double steps_real = t_end / dt;
  std::size_t steps = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * steps_real)
    steps = static_cast<std::size_t>(std::ceil(steps_real));
  steps = std::max<std::size_t>(steps, 1);
  const double h = t_end / static_cast<double>(steps);

  TimeSeries ts;
  ts.t.reserve(steps + 1);
  ts.u.reserve(steps + 1);
  ts.y.reserve(steps + 1);
  Recorder record(sys, ts);
  ClampedRate f(sys);

  std::vector<double> x = sys.x0, k1(n), k2(n), k3(n), k4(n), tmp(n);
  record(0.0, x);
  for (std::size_t s = 0; s < steps; ++s) {
    const double t = h * static_cast<double>(s);
    const double t1 = h * static_cast<double>(s + 1);
    const double hh = t1 - t;
    const double eps = kInsideFraction * hh;
    if (n > 0) {
      f(t, t + eps, x, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * hh * k1[i];
      f(t + 0.5 * hh, t + 0.5 * hh, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * hh * k2[i];
      f(t + 0.5 * hh, t + 0.5 * hh, tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + hh * k3[i];
      f(t1, t1 - eps, tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        x[i] += hh / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      clamp_state(x, sys.bounds);
    }
    record(t1, x);
  }
  return ts;
}

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
  static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr std::array<std::array<double, 6>, 7> a{{
      {0, 0, 0, 0, 0, 0},
      {1.0 / 5, 0, 0, 0, 0, 0},
      {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
      {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
  }};
  static constexpr std::array<double, 7> b{35.0 / 384, 0, 500.0 / 1113, 125.0 / 192,
                                           -2187.0 / 6784, 11.0 / 84, 0};
  static constexpr std::array<double, 7> b_low{5179.0 / 57600, 0, 7571.0 / 16695, 393.0 / 640,
                                               -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
};

inline TimeSeries integrate_rk45(const OdeSystem& sys, double t_end, const IntegratorConfig& cfg,
                                 double dt_max) {
  using T = DormandPrince;
  const std::size_t n = sys.x0.size();
  TimeSeries ts;
  Recorder record(sys, ts);
  ClampedRate f(sys);

  std::vector<double> stops = sys.breakpoints;
  stops.erase(std::remove_if(stops.begin(), stops.end(),
                             [&](double b) { return !(b > 0.0 && b < t_end); }),
              stops.end());
  std::sort(stops.begin(), stops.end());
  stops.push_back(t_end);

  std::vector<double> x = sys.x0, xn(n), tmp(n);
  std::array<std::vector<double>, 7> k;
  for (auto& ki : k) ki.assign(n, 0.0);

  double t = 0.0;
  double h = std::min(cfg.dt, dt_max);
  std::size_t next_stop = 0;
  record(t, x);
  while (t < t_end) {
    while (stops[next_stop] <= t)
      ++next_stop;
    const double stop = stops[next_stop];
    bool hits_stop = false;
    double step = h;
    if (t + step >= stop) {
      step = stop - t;
      hits_stop = true;
    }
    const double t_next = hits_stop ? stop : t + step;
    const double eps = kInsideFraction * step;
    double err = 0.0;
    if (n > 0) {
      for (std::size_t s = 0; s < 7; ++s) {
        for (std::size_t i = 0; i < n; ++i) {
          double acc = x[i];
          for (std::size_t j = 0; j < s; ++j) acc += step * T::a[s][j] * k[j][i];
          tmp[i] = acc;
        }
        const double ts_ = T::c[s] == 1.0 ? t_next : t + T::c[s] * step;
        const double inside = s == 0 ? t + eps : (T::c[s] == 1.0 ? t_next - eps : ts_);
        f(ts_, inside, tmp, k[s]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        double hi = 0.0, lo = 0.0;
        for (std::size_t s = 0; s < 7; ++s) {
          hi += T::b[s] * k[s][i];
          lo += T::b_low[s] * k[s][i];
        }
        xn[i] = x[i] + step * hi;
        const double sc = cfg.atol + cfg.rtol * std::max(std::abs(x[i]), std::abs(xn[i]));
        err = std::max(err, std::abs(step * (hi - lo)) / sc);
      }
      if (!std::isfinite(err))
        throw NumericalError("non-finite error estimate", t);
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    if (err <= 1.0) {
      t = t_next;
      if (hits_stop)
        ++next_stop;
      x.swap(xn);
      clamp_state(x, sys.bounds);
      record(t, x);
      // A step shortened to land on a stop does not limit the next one.
      h = std::min(dt_max, hits_stop ? std::max(h, step * factor) : step * factor);
    } else {
      h = step * factor;
      if (h < cfg.dt_min) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "step size underflow (dt < %.3g) at t = %.17g", cfg.dt_min, t);
        throw NumericalError(buf, t);
      }
    }
  }
  return ts;
}

} // namespace detail

/// Integrates `sys` over [0, t_end]. `period` sets the default maximum
/// adaptive step.
inline TimeSeries integrate_system(const OdeSystem& sys, double t_end, const IntegratorConfig& cfg,
                                   double period) {
  cfg.validate();
  if (sys.bounds.size() != sys.x0.size())
    throw InputError("system bounds and initial state differ in dimension");
  if (cfg.method == Method::RK4Fixed)
    return detail::integrate_rk4(sys, t_end, cfg.dt);
  const double dt_max = cfg.dt_max > 0.0 ? cfg.dt_max : period / 256.0;
  return detail::integrate_rk45(sys, t_end, cfg, dt_max);
}

inline std::string describe(const MemElement& e, const DriveWaveform& d) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "element=%s kind=%s drive=%s %s amplitude=%.17g frequency=%.17g",
                e.name().c_str(), to_string(e.kind()), to_string(d.shape), to_string(d.quantity),
                d.amplitude, d.frequency);
  return buf;
}

/// Drives `element` directly with `drive` for `cfg.n_periods` periods.
inline TimeSeries integrate(const MemElement& element, const DriveWaveform& drive,
                            const IntegratorConfig& cfg) {
  drive.validate();
  cfg.validate();
  if (drive.quantity != element.input_quantity())
    throw InputError(std::string("drive/element mismatch: ") + element.name() + " needs a " +
                     to_string(element.input_quantity()) + " drive, got " +
                     to_string(drive.quantity));
  OdeSystem sys;
  sys.bounds = element.bounds();
  sys.x0 = element.initial_state();
  sys.rate = [&](double t, double t_inside, std::span<const double> x, std::span<double> dx) {
    element.state_rate(x, Excitation{drive.value(t), drive.direction(t_inside)}, dx);
  };
  sys.observe = [&](double t, std::span<const double> x) {
    const double u = drive.value(t);
    return std::pair{u, element.response(x, u)};
  };
  const double t_end = cfg.n_periods * drive.period();
  sys.breakpoints = drive.corner_times(0.0, t_end);
  TimeSeries ts = integrate_system(sys, t_end, cfg, drive.period());
  ts.meta = describe(element, drive);
  return ts;
}

namespace detail {

struct PeriodSamples {
  std::vector<double> u, y;
};

inline PeriodSamples resample_period(const TimeSeries& ts, double t0, double period, std::size_t n) {
  PeriodSamples s;
  s.u.resize(n);
  s.y.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double tq = t0 + period * static_cast<double>(j) / static_cast<double>(n);
    s.u[j] = interpolate(ts.t, ts.u, tq);
    s.y[j] = interpolate(ts.t, ts.y, tq);
  }
  return s;
}

inline double span_of(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi - *lo;
}

} // namespace detail

/// Largest phase-aligned difference between the periods starting at `t_a`
/// and `t_b`, each axis normalized by its extent over the second period.
inline double period_distance(const TimeSeries& ts, double period, double t_a, double t_b,
                              std::size_t grid = 512) {
  const auto a = detail::resample_period(ts, t_a, period, grid);
  const auto b = detail::resample_period(ts, t_b, period, grid);
  const double su = std::max(detail::span_of(b.u), 1e-300);
  const double sy = std::max(detail::span_of(b.y), 1e-300);
  double d = 0.0;
  for (std::size_t j = 0; j < grid; ++j)
    d = std::max({d, std::abs(a.u[j] - b.u[j]) / su, std::abs(a.y[j] - b.y[j]) / sy});
  return d;
}

/// Extracts the last full period of `ts` as a closed loop once the last two
/// periods agree to `steady_tol` on a `grid`-point phase grid. The loop keeps
/// the original samples of that period.
inline HysteresisLoop steady_loop(const TimeSeries& ts, double period, double steady_tol,
                                  std::size_t grid = 512) {
  ts.validate();
  if (!(period > 0.0))
    throw InputError("steady_loop: period must be positive");
  const double t_end = ts.t.back();
  if (t_end - ts.t.front() < 2.0 * period * (1.0 - 1e-9))
    throw InputError("steady_loop: series spans fewer than 2 periods");
  const double dist = period_distance(ts, period, t_end - 2.0 * period, t_end - period, grid);
  if (!(dist < steady_tol)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "steady state not reached: period-to-period distance %.6g >= tolerance %.6g",
                  dist, steady_tol);
    throw NumericalError(buf, t_end);
  }

  std::vector<LoopPoint> pts;
  const double start = t_end - period + 1e-9 * period;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (ts.t[i] > start)
      pts.push_back({ts.u[i], ts.y[i]});
  if (pts.size() < 8)
    throw InputError("steady_loop: fewer than 8 samples in the last period");
  return HysteresisLoop(std::move(pts));
}

} // namespace memsim
