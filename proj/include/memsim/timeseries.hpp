#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "memsim/errors.hpp"

namespace memsim {

/// Sampled trajectory. `x[k]` holds the samples of state component k.
struct TimeSeries {
  std::vector<double> t;
  std::vector<double> u;
  std::vector<double> y;
  std::vector<std::vector<double>> x;
  std::string meta;

  std::size_t size() const { return t.size(); }

  void validate() const {
    if (t.size() < 2)
      throw InputError("time series needs at least 2 samples");
    if (u.size() != t.size() || y.size() != t.size())
      throw InputError("time series columns differ in length");
    for (const auto& xs : x)
      if (xs.size() != t.size())
        throw InputError("time series state column differs in length");
    for (std::size_t i = 1; i < t.size(); ++i)
      if (!(t[i] > t[i - 1]))
        throw InputError("time series time column is not strictly increasing");
  }

  /// The common step if samples are uniformly spaced to relative tolerance
  /// `rel`, otherwise nothing.
  std::optional<double> uniform_step(double rel = 1e-9) const {
    if (t.size() < 2)
      return std::nullopt;
    const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i)
      if (std::abs((t[i] - t[i - 1]) - h) > rel * std::max(h, std::abs(t[i])))
        return std::nullopt;
    return h;
  }
};

namespace detail {

/// Linear interpolation of column `v` at time `tq`, clamped to the sampled range.
inline double interpolate(const std::vector<double>& t, const std::vector<double>& v, double tq) {
  if (tq <= t.front())
    return v.front();
  if (tq >= t.back())
    return v.back();
  const auto it = std::upper_bound(t.begin(), t.end(), tq);
  const std::size_t i = static_cast<std::size_t>(it - t.begin());
  const double w = (tq - t[i - 1]) / (t[i] - t[i - 1]);
  return v[i - 1] + w * (v[i] - v[i - 1]);
}

} // namespace detail

} // namespace memsim
