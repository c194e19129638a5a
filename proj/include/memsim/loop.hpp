#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <unordered_map>
#include <vector>

#include "memsim/errors.hpp"

namespace memsim {

struct LoopPoint {
  double u = 0.0;
  double y = 0.0;

  friend bool operator==(const LoopPoint&, const LoopPoint&) = default;
};

/// One period of an input/output trajectory as a closed polygon
/// (the first point is repeated at the end).
class HysteresisLoop {
public:
  /// Closes `pts` by appending the first point when needed.
  explicit HysteresisLoop(std::vector<LoopPoint> pts) : pts_(std::move(pts)) {
    if (pts_.empty())
      throw InputError("hysteresis loop has no points");
    for (const auto& p : pts_)
      if (!std::isfinite(p.u) || !std::isfinite(p.y))
        throw InputError("hysteresis loop contains non-finite values");
    if (!(pts_.front() == pts_.back()) || pts_.size() == 1)
      pts_.push_back(pts_.front());
    for (const auto& p : pts_) {
      u_scale_ = std::max(u_scale_, std::abs(p.u));
      y_scale_ = std::max(y_scale_, std::abs(p.y));
    }
  }

  /// Closed point sequence; front() == back().
  const std::vector<LoopPoint>& points() const { return pts_; }

  /// Distinct vertices, without the closing repeat.
  std::span<const LoopPoint> vertices() const { return {pts_.data(), pts_.size() - 1}; }

  double u_scale() const { return u_scale_; }
  double y_scale() const { return y_scale_; }

  HysteresisLoop reversed() const {
    std::vector<LoopPoint> r(pts_.rbegin(), pts_.rend());
    return HysteresisLoop(std::move(r));
  }

  HysteresisLoop scaled(double a, double b) const {
    std::vector<LoopPoint> s = pts_;
    for (auto& p : s) {
      p.u *= a;
      p.y *= b;
    }
    return HysteresisLoop(std::move(s));
  }

private:
  std::vector<LoopPoint> pts_;
  double u_scale_ = 0.0;
  double y_scale_ = 0.0;
};

/// Signed shoelace area (counter-clockwise positive) and its split into
/// lobes at self-intersections. The lobes sum to `total`.
struct LoopArea {
  double total = 0.0;
  std::vector<double> lobes;

  /// Sum of lobe magnitudes; the area actually enclosed by the loop.
  double enclosed() const {
    double s = 0.0;
    for (double a : lobes) s += std::abs(a);
    return s;
  }
};

namespace detail {

inline double shoelace(std::span<const LoopPoint> v) {
  if (v.size() < 3)
    return 0.0;
  // Relative to the first vertex for accuracy away from the origin.
  const LoopPoint o = v.front();
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const LoopPoint& a = v[i];
    const LoopPoint& b = v[(i + 1) % v.size()];
    acc += (a.u - o.u) * (b.y - o.y) - (b.u - o.u) * (a.y - o.y);
  }
  return 0.5 * acc;
}

struct Crossing {
  double s = 0.0; // parameter along the owning segment
  int id = -1;
};

/// Side of q relative to the directed line a->b; points on the line count as
/// left, so a path through a vertex crosses on exactly one of its segments.
inline bool left_of(LoopPoint a, LoopPoint b, LoopPoint q) {
  return (b.u - a.u) * (q.y - a.y) - (b.y - a.y) * (q.u - a.u) >= 0.0;
}

/// Parameter along p0p1 of its crossing with the line through q0q1.
inline double crossing_parameter(LoopPoint p0, LoopPoint p1, LoopPoint q0, LoopPoint q1) {
  const double rx = p1.u - p0.u, ry = p1.y - p0.y;
  const double qx = q1.u - q0.u, qy = q1.y - q0.y;
  const double den = rx * qy - ry * qx;
  if (den == 0.0)
    return 0.5;
  const double wx = q0.u - p0.u, wy = q0.y - p0.y;
  return std::clamp((wx * qy - wy * qx) / den, 0.0, 1.0);
}

} // namespace detail

/// Shoelace area of a closed point sequence plus lobe decomposition.
/// Throws InputError if the first and last points differ.
inline LoopArea loop_area(std::span<const LoopPoint> closed) {
  if (closed.size() < 2 || !(closed.front() == closed.back()))
    throw InputError("loop_area: loop is not closed");
  const std::span<const LoopPoint> v = closed.first(closed.size() - 1);
  const std::size_t m = v.size();
  LoopArea out;
  out.total = detail::shoelace(v);
  if (m < 3) {
    out.lobes.push_back(out.total);
    return out;
  }

  double u_scale = 0.0, y_scale = 0.0;
  for (const auto& p : v) {
    u_scale = std::max(u_scale, std::abs(p.u));
    y_scale = std::max(y_scale, std::abs(p.y));
  }

  // Self-intersections between non-adjacent segments.
  std::vector<std::vector<detail::Crossing>> on_segment(m);
  std::vector<LoopPoint> at;
  std::vector<std::array<double, 4>> box(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % m];
    box[i] = {std::min(a.u, b.u), std::max(a.u, b.u), std::min(a.y, b.y), std::max(a.y, b.y)};
  }
  auto side = [&](std::size_t seg, LoopPoint q) {
    return detail::left_of(v[seg], v[(seg + 1) % m], q);
  };
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1)
        continue;
      if (box[i][1] < box[j][0] || box[j][1] < box[i][0] || box[i][3] < box[j][2] ||
          box[j][3] < box[i][2])
        continue;
      const LoopPoint p0 = v[i], p1 = v[(i + 1) % m], q0 = v[j], q1 = v[(j + 1) % m];
      if (side(i, q0) == side(i, q1) || side(j, p0) == side(j, p1))
        continue;
      const double s = detail::crossing_parameter(p0, p1, q0, q1);
      const double t = detail::crossing_parameter(q0, q1, p0, p1);
      const int id = static_cast<int>(at.size());
      at.push_back({p0.u + s * (p1.u - p0.u), p0.y + s * (p1.y - p0.y)});
      on_segment[i].push_back({s, id});
      on_segment[j].push_back({t, id});
    }
  }

  // Walk the loop; every revisit of an intersection closes one lobe.
  struct Entry {
    LoopPoint p;
    int id;
  };
  std::vector<Entry> stack;
  std::unordered_map<int, std::size_t> open;
  const double nil = 1e-12 * u_scale * y_scale;
  auto close_lobe = [&](std::size_t from) {
    std::vector<LoopPoint> lobe;
    for (std::size_t k = from; k < stack.size(); ++k) lobe.push_back(stack[k].p);
    for (std::size_t k = from; k < stack.size(); ++k)
      if (stack[k].id >= 0)
        open.erase(stack[k].id);
    stack.resize(from + 1);
    const double a = detail::shoelace(lobe);
    if (std::abs(a) > nil)
      out.lobes.push_back(a);
  };
  for (std::size_t i = 0; i < m; ++i) {
    stack.push_back({v[i], -1});
    auto& xs = on_segment[i];
    std::sort(xs.begin(), xs.end(),
              [](const detail::Crossing& a, const detail::Crossing& b) {
                return a.s < b.s || (a.s == b.s && a.id < b.id);
              });
    for (const auto& c : xs) {
      if (auto it = open.find(c.id); it != open.end()) {
        close_lobe(it->second);
      } else {
        open[c.id] = stack.size();
        stack.push_back({at[static_cast<std::size_t>(c.id)], c.id});
      }
    }
  }
  std::vector<LoopPoint> rest;
  for (const auto& e : stack) rest.push_back(e.p);
  const double a = detail::shoelace(rest);
  if (std::abs(a) > nil || out.lobes.empty())
    out.lobes.push_back(a);
  return out;
}

inline LoopArea loop_area(const HysteresisLoop& loop) { return loop_area(loop.points()); }

} // namespace memsim
