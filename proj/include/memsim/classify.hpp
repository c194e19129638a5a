#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "memsim/errors.hpp"
#include "memsim/loop.hpp"

namespace memsim {

enum class Verdict { NoHysteresis, PinchedTangent, PinchedCrossing, NonPinched };

inline const char* to_string(Verdict v) {
  switch (v) {
  case Verdict::NoHysteresis: return "NoHysteresis";
  case Verdict::PinchedTangent: return "PinchedTangent";
  case Verdict::PinchedCrossing: return "PinchedCrossing";
  case Verdict::NonPinched: return "NonPinched";
  }
  return "?";
}

/// All relative: gaps to y_scale, slope mismatch to the larger slope, area
/// to u_scale * y_scale.
struct ClassifierTolerances {
  double gap_tol = 0.02;
  double slope_tol = 0.05;
  double area_tol = 1e-4;

  void validate() const {
    if (!(gap_tol >= 0.0) || !(slope_tol >= 0.0) || !(area_tol >= 0.0))
      throw InputError("classifier tolerances must be non-negative");
  }
};

/// Where a branch meets u = 0. NaN fields mean the branch never gets close
/// enough to u = 0 for the quantity to be defined.
struct BranchCrossing {
  double gap = std::numeric_limits<double>::quiet_NaN();   // |y| / y_scale
  double slope = std::numeric_limits<double>::quiet_NaN(); // dy/du
  int crossings = 0;
};

struct LoopClassification {
  Verdict verdict = Verdict::NoHysteresis;
  double origin_gap = std::numeric_limits<double>::quiet_NaN(); // worse branch; inf if a branch misses u = 0
  BranchCrossing ascending;
  BranchCrossing descending;
  double total_area = 0.0;
  double enclosed_area = 0.0;
  std::vector<double> lobe_areas;
  double u_scale = 0.0;
  double y_scale = 0.0;
  ClassifierTolerances tolerances;
  std::vector<std::string> notes;

  double slope_asc() const { return ascending.slope; }
  double slope_desc() const { return descending.slope; }
};

namespace detail {

inline constexpr std::size_t kSlopeWindow = 5;

/// Least-squares slope through the `kSlopeWindow` loop vertices nearest to
/// position `k + frac` (cyclic indices).
inline double local_slope(std::span<const LoopPoint> v, std::size_t k, double frac) {
  const std::size_t m = v.size();
  // Candidates k-2 .. k+3 sit at distances frac+2 .. 3-frac; keep the 5 nearest.
  const long first = frac < 0.5 ? -2 : -1;
  double su = 0.0, sy = 0.0;
  std::vector<LoopPoint> w;
  for (long d = first; d < first + static_cast<long>(kSlopeWindow); ++d) {
    const auto idx = static_cast<std::size_t>((static_cast<long>(k) + d + static_cast<long>(m) * 4) %
                                              static_cast<long>(m));
    w.push_back(v[idx]);
    su += v[idx].u;
    sy += v[idx].y;
  }
  su /= static_cast<double>(w.size());
  sy /= static_cast<double>(w.size());
  double num = 0.0, den = 0.0;
  for (const auto& p : w) {
    num += (p.u - su) * (p.y - sy);
    den += (p.u - su) * (p.u - su);
  }
  return den > 0.0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

/// Examines the branch running from vertex `from` to vertex `to` (cyclic).
inline BranchCrossing examine_branch(std::span<const LoopPoint> v, std::size_t from, std::size_t to,
                                     double y_scale, double near_u) {
  const std::size_t m = v.size();
  BranchCrossing out;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_k = from;
  double best_frac = 0.0;
  double min_abs_u = std::numeric_limits<double>::infinity();
  std::size_t min_u_k = from;
  for (std::size_t k = from;; k = (k + 1) % m) {
    const LoopPoint& a = v[k];
    if (std::abs(a.u) < min_abs_u) {
      min_abs_u = std::abs(a.u);
      min_u_k = k;
    }
    if (k == to)
      break;
    const LoopPoint& b = v[(k + 1) % m];
    std::optional<double> y0;
    double frac = 0.0;
    if (a.u == 0.0) {
      y0 = a.y;
    } else if ((a.u < 0.0 && b.u > 0.0) || (a.u > 0.0 && b.u < 0.0)) {
      frac = a.u / (a.u - b.u);
      y0 = a.y + frac * (b.y - a.y);
    }
    if (y0) {
      ++out.crossings;
      if (std::abs(*y0) < best) {
        best = std::abs(*y0);
        best_k = k;
        best_frac = frac;
      }
    }
  }
  if (out.crossings == 0) {
    if (min_abs_u > near_u)
      return out;
    best = std::abs(v[min_u_k].y);
    best_k = min_u_k;
    best_frac = 0.0;
  }
  out.gap = y_scale > 0.0 ? best / y_scale : 0.0;
  out.slope = local_slope(v, best_k, best_frac);
  return out;
}

} // namespace detail

/// Sorts a loop into the pinched-tangent / pinched-crossing / non-pinched /
/// no-hysteresis taxonomy.
///
/// The loop is split at its extrema of u into an ascending and a descending
/// branch. A branch's gap is the smallest |y| where it crosses u = 0; the loop
/// is pinched when both gaps are within `gap_tol`, and the pinch is tangent
/// when the two local slopes agree within `slope_tol`. Loops enclosing less
/// than `area_tol` (sum of lobe magnitudes) show no hysteresis.
inline LoopClassification classify_loop(const HysteresisLoop& loop,
                                        const ClassifierTolerances& tol = {}) {
  tol.validate();
  const auto v = loop.vertices();
  if (v.size() < 8)
    throw InputError("classify_loop: loop needs at least 8 points");

  LoopClassification c;
  c.tolerances = tol;
  c.u_scale = loop.u_scale();
  c.y_scale = loop.y_scale();
  const LoopArea area = loop_area(loop);
  c.total_area = area.total;
  c.enclosed_area = area.enclosed();
  c.lobe_areas = area.lobes;

  if (c.u_scale == 0.0 || c.y_scale == 0.0) {
    c.verdict = Verdict::NoHysteresis;
    c.notes.push_back("degenerate loop (zero extent)");
    return c;
  }

  const auto [lo, hi] = std::minmax_element(
      v.begin(), v.end(), [](const LoopPoint& a, const LoopPoint& b) { return a.u < b.u; });
  const auto i_min = static_cast<std::size_t>(lo - v.begin());
  const auto i_max = static_cast<std::size_t>(hi - v.begin());
  const double near_u = tol.gap_tol * c.u_scale;
  c.ascending = detail::examine_branch(v, i_min, i_max, c.y_scale, near_u);
  c.descending = detail::examine_branch(v, i_max, i_min, c.y_scale, near_u);

  const bool asc_defined = !std::isnan(c.ascending.gap);
  const bool desc_defined = !std::isnan(c.descending.gap);
  c.origin_gap = asc_defined && desc_defined ? std::max(c.ascending.gap, c.descending.gap)
                                             : std::numeric_limits<double>::infinity();

  if (c.enclosed_area < tol.area_tol * c.u_scale * c.y_scale) {
    c.verdict = Verdict::NoHysteresis;
    return c;
  }
  if (!asc_defined || !desc_defined) {
    c.verdict = Verdict::NonPinched;
    c.notes.push_back("a branch never reaches u = 0 (min |u| exceeds gap_tol * u_scale)");
    return c;
  }
  if (c.origin_gap > tol.gap_tol) {
    c.verdict = Verdict::NonPinched;
    return c;
  }
  const double sa = c.ascending.slope, sd = c.descending.slope;
  if (std::isnan(sa) || std::isnan(sd)) {
    c.verdict = Verdict::PinchedCrossing;
    c.notes.push_back("branch slope undefined at the origin");
    return c;
  }
  c.verdict = std::abs(sa - sd) <= tol.slope_tol * std::max(std::abs(sa), std::abs(sd))
                  ? Verdict::PinchedTangent
                  : Verdict::PinchedCrossing;
  return c;
}

} // namespace memsim
