#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "memsim/drive.hpp"
#include "memsim/element.hpp"
#include "memsim/errors.hpp"
#include "memsim/integrator.hpp"
#include "memsim/loop.hpp"

namespace memsim {

/// Exponent p of |y/u| ~ |u|^p near u = 0.
struct PowerLawFit {
  double exponent = std::numeric_limits<double>::quiet_NaN();
  std::size_t samples = 0;
  std::size_t groups = 0;
};

namespace detail {

/// Least-squares slope of log|y/u| against log|u| where every group (one
/// approach of the loop to u = 0) has its own intercept. The state seen at
/// different approaches may differ, so only the variation inside a group
/// carries the scaling.
struct GroupedFit {
  double sxy = 0.0;
  double sxx = 0.0;
  std::size_t samples = 0;
  std::size_t groups = 0;

  void add_group(const std::vector<double>& lx, const std::vector<double>& ly) {
    if (lx.size() < 2)
      return;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    samples += lx.size();
    ++groups;
  }

  PowerLawFit result() const {
    PowerLawFit f;
    f.samples = samples;
    f.groups = groups;
    if (sxx > 0.0)
      f.exponent = sxy / sxx;
    return f;
  }
};

inline void add_loop(GroupedFit& fit, const HysteresisLoop& loop, double window) {
  const auto v = loop.vertices();
  const std::size_t m = v.size();
  const double limit = window * loop.u_scale();
  auto usable = [&](std::size_t k) {
    return v[k].u != 0.0 && v[k].y != 0.0 && std::abs(v[k].u) <= limit;
  };
  // Start the cyclic walk outside a group so no group is split in two.
  std::size_t start = 0;
  while (start < m && usable(start))
    ++start;
  if (start == m)
    start = 0;
  std::vector<double> lx, ly;
  for (std::size_t n = 0; n < m; ++n) {
    const std::size_t k = (start + n) % m;
    if (usable(k)) {
      lx.push_back(std::log(std::abs(v[k].u)));
      ly.push_back(std::log(std::abs(v[k].y / v[k].u)));
    } else if (!lx.empty()) {
      fit.add_group(lx, ly);
      lx.clear();
      ly.clear();
    }
  }
  fit.add_group(lx, ly);
}

} // namespace detail

/// Fits the small-signal scaling of |y/u| over the loop samples with
/// 0 < |u| <= window * u_scale.
inline PowerLawFit fit_power_law(const HysteresisLoop& loop, double window = 0.1) {
  detail::GroupedFit fit;
  detail::add_loop(fit, loop, window);
  return fit.result();
}

struct LimitScanReport {
  double exponent = std::numeric_limits<double>::quiet_NaN();
  std::size_t samples = 0;
  std::vector<double> amplitudes;
  std::vector<double> max_response;     // max |y| of each steady loop
  std::vector<double> loop_exponents;   // per-amplitude fit
  bool response_vanishes = false;       // max |y| strictly decreasing with amplitude
};

/// Drives a memristive element at amplitudes from the nominal one down over
/// `decades` decades (two per decade) and fits |y/u| ~ |u|^p on the steady
/// loops near u = 0. A constant resistance gives p = 0; R ~ |I|^(-1/2) gives
/// p = -1/2.
inline LimitScanReport limit_scan(const MemElement& element, const DriveWaveform& drive,
                                  int decades, const IntegratorConfig& cfg,
                                  double window = 0.1) {
  if (!is_memristive(element.kind()))
    throw InputError("limit_scan: element is not memristive");
  if (decades < 2)
    throw InputError("limit_scan: need at least 2 decades");
  if (drive.amplitude == 0.0)
    throw InputError("limit_scan: nominal amplitude must be non-zero");

  LimitScanReport rep;
  detail::GroupedFit pooled;
  const int points = 2 * decades;
  for (int j = 0; j <= points; ++j) {
    DriveWaveform d = drive;
    d.amplitude = drive.amplitude * std::pow(10.0, -0.5 * j);
    const TimeSeries ts = integrate(element, d, cfg);
    const HysteresisLoop loop = steady_loop(ts, d.period(), cfg.steady_tol);
    detail::add_loop(pooled, loop, window);
    rep.amplitudes.push_back(d.amplitude);
    rep.max_response.push_back(loop.y_scale());
    rep.loop_exponents.push_back(fit_power_law(loop, window).exponent);
  }
  const PowerLawFit f = pooled.result();
  rep.exponent = f.exponent;
  rep.samples = f.samples;
  rep.response_vanishes = true;
  for (std::size_t i = 1; i < rep.max_response.size(); ++i)
    if (!(rep.max_response[i] < rep.max_response[i - 1]))
      rep.response_vanishes = false;
  return rep;
}

} // namespace memsim
