#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "memsim/loop.hpp"

namespace memsim::svg {

struct PlotLabels {
  std::string x = "u";
  std::string y = "y";
  std::string title;
};

namespace detail {

inline constexpr double kWidth = 800.0;
inline constexpr double kHeight = 600.0;
inline constexpr double kLeft = 100.0;
inline constexpr double kRight = 30.0;
inline constexpr double kTop = 50.0;
inline constexpr double kBottom = 70.0;

struct Axis {
  double lo = -1.0;
  double hi = 1.0;
  double step = 0.5;
};

inline Axis make_axis(double lo, double hi) {
  if (!(hi > lo)) {
    const double c = lo;
    const double w = c == 0.0 ? 1.0 : std::abs(c) * 0.5;
    lo = c - w;
    hi = c + w;
  }
  const double pad = 0.05 * (hi - lo);
  Axis a{lo - pad, hi + pad, 1.0};
  const double raw = (a.hi - a.lo) / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  a.step = (norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0) * mag;
  return a;
}

inline std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
    case '&': o += "&amp;"; break;
    case '<': o += "&lt;"; break;
    case '>': o += "&gt;"; break;
    case '"': o += "&quot;"; break;
    default: o += c;
    }
  }
  return o;
}

inline std::string num(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

} // namespace detail

/// 800x600 plot of a loop: linear axes with tick labels, one polyline, and a
/// cross-hair at the origin when it lies inside the plot.
inline void write_loop(std::ostream& out, const HysteresisLoop& loop, const PlotLabels& labels) {
  using namespace detail;
  double ulo = loop.points().front().u, uhi = ulo;
  double ylo = loop.points().front().y, yhi = ylo;
  for (const auto& p : loop.points()) {
    ulo = std::min(ulo, p.u);
    uhi = std::max(uhi, p.u);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  const Axis ax = make_axis(ulo, uhi);
  const Axis ay = make_axis(ylo, yhi);
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto px = [&](double u) { return kLeft + (u - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double y) { return kTop + (ay.hi - y) / (ay.hi - ay.lo) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  out << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
  for (double v = std::ceil(ax.lo / ax.step) * ax.step; v <= ax.hi; v += ax.step) {
    const double tv = std::abs(v) < 1e-9 * ax.step ? 0.0 : v;
    const std::string x = num("%.2f", px(tv));
    out << "<line x1=\"" << x << "\" y1=\"" << kTop + ph << "\" x2=\"" << x << "\" y2=\""
        << kTop + ph + 6 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << x << "\" y=\"" << kTop + ph + 20
        << "\" text-anchor=\"middle\">" << num("%.4g", tv) << "</text>\n";
  }
  for (double v = std::ceil(ay.lo / ay.step) * ay.step; v <= ay.hi; v += ay.step) {
    const double tv = std::abs(v) < 1e-9 * ay.step ? 0.0 : v;
    const std::string y = num("%.2f", py(tv));
    out << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 9 << "\" y=\"" << y
        << "\" text-anchor=\"end\" dominant-baseline=\"middle\">" << num("%.4g", tv)
        << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 20
      << "\" text-anchor=\"middle\" font-size=\"14\">" << escape(labels.x) << "</text>\n";
  out << "<text x=\"20\" y=\"" << kTop + ph / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " << kTop + ph / 2
      << ")\">" << escape(labels.y) << "</text>\n";
  if (!labels.title.empty())
    out << "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-size=\"16\">"
        << escape(labels.title) << "</text>\n";
  out << "</g>\n";

  if (ax.lo <= 0.0 && 0.0 <= ax.hi && ay.lo <= 0.0 && 0.0 <= ay.hi) {
    const double ox = px(0.0), oy = py(0.0);
    out << "<g stroke=\"red\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << num("%.2f", ox - 12) << "\" y1=\"" << num("%.2f", oy) << "\" x2=\""
        << num("%.2f", ox + 12) << "\" y2=\"" << num("%.2f", oy) << "\"/>\n";
    out << "<line x1=\"" << num("%.2f", ox) << "\" y1=\"" << num("%.2f", oy - 12) << "\" x2=\""
        << num("%.2f", ox) << "\" y2=\"" << num("%.2f", oy + 12) << "\"/>\n";
    out << "<circle cx=\"" << num("%.2f", ox) << "\" cy=\"" << num("%.2f", oy)
        << "\" r=\"4\" fill=\"none\"/>\n";
    out << "</g>\n";
  }

  out << "<polyline fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"1.5\" points=\"";
  bool first = true;
  for (const auto& p : loop.points()) {
    if (!first)
      out << ' ';
    first = false;
    out << num("%.3f", px(p.u)) << ',' << num("%.3f", py(p.y));
  }
  out << "\"/>\n</svg>\n";
}

} // namespace memsim::svg
