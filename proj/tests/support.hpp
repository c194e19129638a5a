#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "memsim/loop.hpp"

namespace memsim::fixtures {

/// y interpolated at every sign change of u along the closed loop.
inline std::vector<double> y_at_zero_u(const HysteresisLoop& loop) {
  std::vector<double> out;
  const auto& p = loop.points();
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const auto a = p[i], b = p[i + 1];
    if (a.u == 0.0) {
      out.push_back(a.y);
    } else if ((a.u < 0.0) != (b.u < 0.0) && b.u != 0.0) {
      const double s = a.u / (a.u - b.u);
      out.push_back(a.y + s * (b.y - a.y));
    }
  }
  return out;
}

inline HysteresisLoop parametric(std::size_t n, auto&& f) {
  std::vector<LoopPoint> pts;
  for (std::size_t k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    pts.push_back(f(th));
  }
  return HysteresisLoop(std::move(pts));
}

inline HysteresisLoop figure_eight(std::size_t n = 400) {
  return parametric(n, [](double th) { return LoopPoint{std::sin(th), std::sin(2.0 * th)}; });
}

inline HysteresisLoop offset_ellipse(std::size_t n = 400) {
  return parametric(n, [](double th) { return LoopPoint{std::cos(th), 0.5 + 0.3 * std::sin(th)}; });
}

inline HysteresisLoop centered_ellipse(std::size_t n = 400) {
  return parametric(n, [](double th) { return LoopPoint{std::cos(th), std::sin(th)}; });
}

inline HysteresisLoop line_through_origin(std::size_t n = 400) {
  return parametric(n, [](double th) { return LoopPoint{std::sin(th), 2.5 * std::sin(th)}; });
}

} // namespace memsim::fixtures
