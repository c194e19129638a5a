#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "memsim/classify.hpp"
#include "memsim/csv.hpp"
#include "memsim/run.hpp"

namespace memsim::report {

inline constexpr const char* kClassificationHeader = "[classification]";

/// Machine-readable `key = value` lines for a classification. Numbers use
/// the lossless CSV format so identical loops give identical text.
inline void write_classification(std::ostream& out, const LoopClassification& c) {
  using csv::format;
  out << kClassificationHeader << '\n';
  out << "verdict = " << to_string(c.verdict) << '\n';
  out << "origin_gap = " << format(c.origin_gap) << '\n';
  out << "gap_ascending = " << format(c.ascending.gap) << '\n';
  out << "gap_descending = " << format(c.descending.gap) << '\n';
  out << "slope_ascending = " << format(c.ascending.slope) << '\n';
  out << "slope_descending = " << format(c.descending.slope) << '\n';
  out << "crossings_ascending = " << c.ascending.crossings << '\n';
  out << "crossings_descending = " << c.descending.crossings << '\n';
  out << "total_area = " << format(c.total_area) << '\n';
  out << "enclosed_area = " << format(c.enclosed_area) << '\n';
  out << "lobe_count = " << c.lobe_areas.size() << '\n';
  out << "lobe_areas = ";
  for (std::size_t i = 0; i < c.lobe_areas.size(); ++i)
    out << (i ? ";" : "") << format(c.lobe_areas[i]);
  out << '\n';
  out << "u_scale = " << format(c.u_scale) << '\n';
  out << "y_scale = " << format(c.y_scale) << '\n';
  out << "gap_tol = " << format(c.tolerances.gap_tol) << '\n';
  out << "slope_tol = " << format(c.tolerances.slope_tol) << '\n';
  out << "area_tol = " << format(c.tolerances.area_tol) << '\n';
  for (const auto& n : c.notes) out << "note = " << n << '\n';
}

inline std::string classification_block(const LoopClassification& c) {
  std::ostringstream s;
  write_classification(s, c);
  return s.str();
}

/// Short human-readable explanation of a verdict.
inline void describe(std::ostream& out, const LoopClassification& c) {
  char buf[256];
  out << "Verdict: " << to_string(c.verdict) << '\n';
  std::snprintf(buf, sizeof buf, "  enclosed area %.6g (%.3g of u_scale*y_scale; area_tol %.3g)\n",
                c.enclosed_area,
                c.u_scale * c.y_scale > 0.0 ? c.enclosed_area / (c.u_scale * c.y_scale) : 0.0,
                c.tolerances.area_tol);
  out << buf;
  if (std::isinf(c.origin_gap)) {
    out << "  a branch never reaches u = 0\n";
  } else if (!std::isnan(c.origin_gap)) {
    std::snprintf(buf, sizeof buf,
                  "  origin gap %.6g (ascending %.6g, descending %.6g; gap_tol %.3g)\n",
                  c.origin_gap, c.ascending.gap, c.descending.gap, c.tolerances.gap_tol);
    out << buf;
    std::snprintf(buf, sizeof buf,
                  "  branch slopes at u = 0: ascending %.6g, descending %.6g (slope_tol %.3g)\n",
                  c.ascending.slope, c.descending.slope, c.tolerances.slope_tol);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "  %zu lobe(s), signed total area %.6g\n", c.lobe_areas.size(),
                c.total_area);
  out << buf;
  for (const auto& n : c.notes) out << "  note: " << n << '\n';
}

inline void write_simulation(std::ostream& out, const SimulationResult& r) {
  using csv::format;
  out << "# memsim simulation report\n";
  out << "source = " << r.series.meta << '\n';
  out << "samples = " << r.series.size() << '\n';
  out << "loop_points = " << r.loop.vertices().size() << '\n';
  write_classification(out, r.classification);
  if (r.loop_fit) {
    out << "[power_law]\n";
    out << "exponent = " << format(r.loop_fit->exponent) << '\n';
    out << "samples = " << r.loop_fit->samples << '\n';
    out << "groups = " << r.loop_fit->groups << '\n';
  }
  if (r.scan) {
    const auto& s = *r.scan;
    out << "[limit_scan]\n";
    out << "exponent = " << format(s.exponent) << '\n';
    out << "samples = " << s.samples << '\n';
    out << "response_vanishes = " << (s.response_vanishes ? "true" : "false") << '\n';
    for (std::size_t i = 0; i < s.amplitudes.size(); ++i)
      out << "amplitude_" << i << " = " << format(s.amplitudes[i]) << ';'
          << format(s.max_response[i]) << ';' << format(s.loop_exponents[i]) << '\n';
  }
  if (r.current) {
    const auto& c = *r.current;
    out << "[current]\n";
    out << "median_abs = " << format(c.median_abs) << '\n';
    out << "threshold = " << format(c.threshold) << '\n';
    out << "peaks = " << c.peaks.size() << '\n';
    out << "positive_peaks = " << c.positive_peaks << '\n';
    out << "negative_peaks = " << c.negative_peaks << '\n';
    for (std::size_t i = 0; i < c.peaks.size(); ++i) {
      const auto k = c.peaks[i].index;
      out << "peak_" << i << " = " << format(r.series.t[k]) << ';' << format(r.series.u[k]) << ';'
          << format(c.peaks[i].value) << '\n';
    }
    out << "iv_total_area = " << format(c.iv_area.total) << '\n';
    out << "iv_enclosed_area = " << format(c.iv_area.enclosed()) << '\n';
  }
}

/// Extracts the `[classification]` section from report text.
inline std::string extract_classification(const std::string& text) {
  const auto b = text.find(kClassificationHeader);
  if (b == std::string::npos)
    return "";
  auto e = text.find("\n[", b + 1);
  return text.substr(b, e == std::string::npos ? std::string::npos : e + 1 - b);
}

} // namespace memsim::report
