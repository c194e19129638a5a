#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memsim/drive.hpp"
#include "memsim/errors.hpp"

namespace memsim {

enum class ElementKind {
  MemristiveCurrentControlled, // u = I, y = V
  MemristiveVoltageControlled, // u = V, y = I
  Memcapacitive,               // u = V, y = q
  Meminductive,                // u = I, y = flux
};

inline const char* to_string(ElementKind k) {
  switch (k) {
  case ElementKind::MemristiveCurrentControlled: return "memristive-current-controlled";
  case ElementKind::MemristiveVoltageControlled: return "memristive-voltage-controlled";
  case ElementKind::Memcapacitive: return "memcapacitive";
  case ElementKind::Meminductive: return "meminductive";
  }
  return "?";
}

/// The quantity a source must impose to drive an element of kind `k`.
inline Quantity input_quantity(ElementKind k) {
  switch (k) {
  case ElementKind::MemristiveCurrentControlled:
  case ElementKind::Meminductive:
    return Quantity::Current;
  default:
    return Quantity::Voltage;
  }
}

inline bool is_memristive(ElementKind k) {
  return k == ElementKind::MemristiveCurrentControlled ||
         k == ElementKind::MemristiveVoltageControlled;
}

/// Input seen by an element at one instant: its value and the sign of its
/// time derivative (+1 or -1, never 0).
struct Excitation {
  double value = 0.0;
  int direction = 1;
};

struct StateBounds {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return v >= lo && v <= hi; }
};

/// State-space description of a two-terminal memory element:
///   y = response(x, u),   dx/dt = state_rate(x, u).
///
/// Both laws must be pure. Models do not saturate their own state; the
/// integrator clamps states to `bounds()` and zeroes outward derivative
/// components at a bound.
class MemElement {
public:
  using ResponseFn = std::function<double(std::span<const double>, double)>;
  using RateFn = std::function<void(std::span<const double>, Excitation, std::span<double>)>;

  MemElement(ElementKind kind, std::string name, std::vector<StateBounds> bounds,
             std::vector<double> initial_state, ResponseFn response, RateFn rate)
      : kind_(kind), name_(std::move(name)), bounds_(std::move(bounds)),
        x0_(std::move(initial_state)), response_(std::move(response)),
        rate_(std::move(rate)) {
    if (bounds_.size() != x0_.size())
      throw InputError(name_ + ": bounds and initial state differ in dimension");
    if (!response_)
      throw InputError(name_ + ": missing response law");
    if (!x0_.empty() && !rate_)
      throw InputError(name_ + ": missing state law");
    if (!within_bounds(x0_))
      throw DomainError(name_ + ": initial state outside state bounds");
  }

  ElementKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::size_t state_dim() const { return x0_.size(); }
  const std::vector<StateBounds>& bounds() const { return bounds_; }
  const std::vector<double>& initial_state() const { return x0_; }
  Quantity input_quantity() const { return memsim::input_quantity(kind_); }

  bool within_bounds(std::span<const double> x) const {
    if (x.size() != bounds_.size())
      return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!bounds_[i].contains(x[i]))
        return false;
    return true;
  }

  double response(std::span<const double> x, double u) const {
    if (!within_bounds(x))
      throw DomainError(name_ + ": state outside bounds");
    return response_(x, u);
  }

  void state_rate(std::span<const double> x, Excitation u, std::span<double> dx) const {
    if (dx.size() != x0_.size())
      throw InputError(name_ + ": derivative buffer has wrong dimension");
    if (x0_.empty())
      return;
    rate_(x, u, dx);
  }

  /// Copy with a different starting state.
  MemElement with_initial_state(std::vector<double> x0) const {
    MemElement e = *this;
    if (x0.size() != bounds_.size())
      throw InputError(name_ + ": initial state has wrong dimension");
    e.x0_ = std::move(x0);
    if (!e.within_bounds(e.x0_))
      throw DomainError(name_ + ": initial state outside state bounds");
    return e;
  }

private:
  ElementKind kind_;
  std::string name_;
  std::vector<StateBounds> bounds_;
  std::vector<double> x0_;
  ResponseFn response_;
  RateFn rate_;
};

} // namespace memsim
