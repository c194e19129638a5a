#pragma once

#include <optional>
#include <vector>

#include "memsim/circuit.hpp"
#include "memsim/classify.hpp"
#include "memsim/config.hpp"
#include "memsim/integrator.hpp"
#include "memsim/loop.hpp"
#include "memsim/peaks.hpp"
#include "memsim/scaling.hpp"

namespace memsim {

/// Numerically differentiated charge of a memcapacitive run.
struct CurrentAnalysis {
  TimeSeries current;
  std::vector<SignalPeak> peaks; // over the last period
  double median_abs = 0.0;
  double threshold = 0.0;
  int positive_peaks = 0;
  int negative_peaks = 0;
  LoopArea iv_area; // steady current-vs-input loop
};

struct SimulationResult {
  TimeSeries series;
  HysteresisLoop loop;
  LoopClassification classification;
  std::optional<PowerLawFit> loop_fit;
  std::optional<LimitScanReport> scan;
  std::optional<CurrentAnalysis> current;
};

inline CurrentAnalysis analyze_current(const TimeSeries& ts, double period, std::size_t smoothing,
                                       double peak_factor) {
  CurrentAnalysis a;
  a.current = numeric_current(ts, smoothing);
  const double h = *ts.uniform_step();
  const auto n = static_cast<std::size_t>(std::llround(period / h));
  if (n < 8 || n >= ts.size())
    throw InputError("current analysis needs at least 8 samples per period and 2 periods");
  const std::size_t first = ts.size() - 1 - n;
  const std::span<const double> last(a.current.y.data() + first, n);
  a.median_abs = median_abs(last);
  a.threshold = peak_factor * a.median_abs;
  a.peaks = dominant_peaks(last, peak_factor);
  for (auto& p : a.peaks) {
    p.index += first;
    (p.value > 0.0 ? a.positive_peaks : a.negative_peaks) += 1;
  }
  std::vector<LoopPoint> pts;
  for (std::size_t i = first; i + 1 < ts.size(); ++i)
    pts.push_back({ts.u[i], a.current.y[i]});
  a.iv_area = loop_area(HysteresisLoop(std::move(pts)));
  return a;
}

/// Runs one configuration end to end: transient, steady loop, classification
/// and the optional analyses.
inline SimulationResult run_simulation(const RunConfig& cfg) {
  cfg.validate();
  const MemElement element = cfg.element();
  const DriveWaveform drive = cfg.drive();
  const IntegratorConfig icfg = cfg.integrator();
  if (cfg.analyze_current() && icfg.method != Method::RK4Fixed)
    throw InputError("analysis.current needs integrator.method = rk4 (uniform sampling)");

  TimeSeries ts = cfg.series() ? simulate_series_circuit({cfg.c_std(), element, drive}, icfg)
                               : integrate(element, drive, icfg);
  HysteresisLoop loop = steady_loop(ts, drive.period(), icfg.steady_tol);
  LoopClassification cls = classify_loop(loop, cfg.tolerances());

  SimulationResult r{std::move(ts), std::move(loop), std::move(cls), {}, {}, {}};
  if (is_memristive(element.kind()) && !cfg.series())
    r.loop_fit = fit_power_law(r.loop);
  if (const int dec = cfg.limit_scan_decades(); dec > 0)
    r.scan = limit_scan(element, drive, dec, icfg);
  if (cfg.analyze_current())
    r.current = analyze_current(r.series, drive.period(), cfg.smoothing(), cfg.peak_factor());
  return r;
}

} // namespace memsim
