#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <utility>

#include "memsim/drive.hpp"
#include "memsim/element.hpp"
#include "memsim/errors.hpp"
#include "memsim/integrator.hpp"
#include "memsim/timeseries.hpp"

namespace memsim {

/// A voltage source driving a standard capacitor in series with a
/// memcapacitive device. Both carry the same charge q; the device charge is
/// read from the voltage across the standard capacitor.
struct SeriesCircuit {
  double c_std = 33e-9; // F
  MemElement device;
  DriveWaveform drive;

  void validate() const {
    if (!(c_std > 0.0) || !std::isfinite(c_std))
      throw InputError("c_std must be positive");
    if (device.kind() != ElementKind::Memcapacitive)
      throw InputError("series circuit device must be memcapacitive");
    if (drive.quantity != Quantity::Voltage)
      throw InputError("series circuit needs a voltage source");
    drive.validate();
  }
};

/// Solves q_device(v, x) = c_std (v_src - v) for the device voltage v.
///
/// Bisection-bracketed Newton on [-10 V, 10 V] * peak source voltage, with the
/// bracket doubled up to 4 times. Requires q_device to increase with v.
class DeviceVoltageSolver {
public:
  DeviceVoltageSolver(const MemElement& device, double c_std, double v_peak)
      : device_(device), c_std_(c_std),
        v_bound_(10.0 * (v_peak > 0.0 ? v_peak : 1.0)),
        tol_(1e-12 * c_std * (v_peak > 0.0 ? v_peak : 1.0)) {}

  double residual(std::span<const double> x, double v_src, double v) const {
    return device_.response(x, v) - c_std_ * (v_src - v);
  }

  double tolerance() const { return tol_; }

  double solve(std::span<const double> x, double v_src, double t = 0.0) const {
    double lo = -v_bound_, hi = v_bound_;
    double f_lo = residual(x, v_src, lo), f_hi = residual(x, v_src, hi);
    for (int k = 0; k < 4 && !(f_lo <= 0.0 && f_hi >= 0.0); ++k) {
      lo *= 2.0;
      hi *= 2.0;
      f_lo = residual(x, v_src, lo);
      f_hi = residual(x, v_src, hi);
    }
    if (!(f_lo <= 0.0 && f_hi >= 0.0)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "device voltage root not bracketed within +/-%.3g V (v_src = %.6g V)", hi,
                    v_src);
      throw NumericalError(buf, t);
    }
    if (f_lo == 0.0)
      return lo;
    if (f_hi == 0.0)
      return hi;

    double v = std::clamp(0.0, lo, hi);
    double best_v = v, best_f = std::abs(residual(x, v_src, v));
    for (int it = 0; it < 200; ++it) {
      const double f = residual(x, v_src, v);
      if (std::abs(f) < best_f) {
        best_f = std::abs(f);
        best_v = v;
      }
      if (std::abs(f) < tol_)
        return v;
      if (f < 0.0)
        lo = v;
      else
        hi = v;
      const double h = 1e-7 * std::max(std::abs(v), 1e-3 * v_bound_);
      const double df = (residual(x, v_src, v + h) - residual(x, v_src, v - h)) / (2.0 * h);
      double next = df > 0.0 ? v - f / df : 0.5 * (lo + hi);
      if (!(next > lo && next < hi))
        next = 0.5 * (lo + hi);
      if (next == v || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi))
        break;
      v = next;
    }
    return best_v;
  }

private:
  const MemElement& device_;
  double c_std_;
  double v_bound_;
  double tol_;
};

/// Transient of the series circuit. Output: u = device voltage, y = charge,
/// x = device state.
inline TimeSeries simulate_series_circuit(const SeriesCircuit& ckt, const IntegratorConfig& cfg) {
  ckt.validate();
  cfg.validate();
  const DriveWaveform& drive = ckt.drive;
  const MemElement& device = ckt.device;
  const DeviceVoltageSolver solver(device, ckt.c_std, drive.peak());

  OdeSystem sys;
  sys.bounds = device.bounds();
  sys.x0 = device.initial_state();
  // The device voltage moves with the source, so its branch direction is
  // taken from the source.
  sys.rate = [&](double t, double t_inside, std::span<const double> x, std::span<double> dx) {
    const double v_d = solver.solve(x, drive.value(t), t);
    device.state_rate(x, Excitation{v_d, drive.direction(t_inside)}, dx);
  };
  sys.observe = [&](double t, std::span<const double> x) {
    const double v_d = solver.solve(x, drive.value(t), t);
    return std::pair{v_d, device.response(x, v_d)};
  };
  const double t_end = cfg.n_periods * drive.period();
  sys.breakpoints = drive.corner_times(0.0, t_end);
  TimeSeries ts = integrate_system(sys, t_end, cfg, drive.period());
  char buf[64];
  std::snprintf(buf, sizeof buf, " circuit=series c_std=%.17g", ckt.c_std);
  ts.meta = describe(device, drive) + buf;
  return ts;
}

/// dy/dt by central differences (one-sided at the ends), then an optional
/// centered moving average of odd width `window`. Needs uniform sampling.
inline TimeSeries numeric_current(const TimeSeries& ts, std::size_t window = 1) {
  if (ts.size() < 3)
    throw InputError("numeric_current: need at least 3 samples");
  ts.validate();
  if (window == 0 || window % 2 == 0)
    throw InputError("numeric_current: smoothing window must be odd and positive");
  const auto h = ts.uniform_step();
  if (!h)
    throw InputError("numeric_current: samples are not uniformly spaced; resample first");

  const std::size_t n = ts.size();
  std::vector<double> d(n);
  d[0] = (ts.y[1] - ts.y[0]) / (ts.t[1] - ts.t[0]);
  d[n - 1] = (ts.y[n - 1] - ts.y[n - 2]) / (ts.t[n - 1] - ts.t[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i)
    d[i] = (ts.y[i + 1] - ts.y[i - 1]) / (ts.t[i + 1] - ts.t[i - 1]);

  TimeSeries out = ts;
  out.y = d;
  if (window > 1) {
    const std::size_t r = window / 2;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t a = i >= r ? i - r : 0;
      const std::size_t b = std::min(n - 1, i + r);
      double s = 0.0;
      for (std::size_t k = a; k <= b; ++k) s += d[k];
      out.y[i] = s / static_cast<double>(b - a + 1);
    }
  }
  out.meta = ts.meta + " derived=current";
  return out;
}

} // namespace memsim
