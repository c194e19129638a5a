#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace memsim {

struct SignalPeak {
  std::size_t index = 0;
  double value = 0.0;
};

inline double median_abs(std::span<const double> s) {
  if (s.empty())
    return 0.0;
  std::vector<double> a(s.size());
  std::transform(s.begin(), s.end(), a.begin(), [](double v) { return std::abs(v); });
  const auto mid = a.begin() + static_cast<std::ptrdiff_t>(a.size() / 2);
  std::nth_element(a.begin(), mid, a.end());
  if (a.size() % 2 == 1)
    return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(a.begin(), mid);
  return 0.5 * (lower + upper);
}

/// Dominant peaks of one period of a periodic signal: each maximal run of
/// samples (wrapping around the ends) with |s| > factor * median|s| counts as
/// one peak, located at the run's largest |s|.
inline std::vector<SignalPeak> dominant_peaks(std::span<const double> s, double factor = 5.0) {
  std::vector<SignalPeak> out;
  const std::size_t n = s.size();
  if (n == 0)
    return out;
  const double thr = factor * median_abs(s);
  auto above = [&](std::size_t k) { return std::abs(s[k]) > thr; };
  std::size_t start = 0;
  while (start < n && above(start))
    ++start;
  if (start == n) {
    // Everything is above threshold: one run covering the whole period.
    const auto it = std::max_element(s.begin(), s.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
    out.push_back({static_cast<std::size_t>(it - s.begin()), *it});
    return out;
  }
  bool in_run = false;
  SignalPeak cur;
  for (std::size_t m = 1; m <= n; ++m) {
    const std::size_t k = (start + m) % n;
    if (above(k)) {
      if (!in_run || std::abs(s[k]) > std::abs(cur.value))
        cur = {k, s[k]};
      in_run = true;
    } else if (in_run) {
      out.push_back(cur);
      in_run = false;
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SignalPeak& a, const SignalPeak& b) { return a.index < b.index; });
  return out;
}

} // namespace memsim
