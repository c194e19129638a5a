#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <string>

#include "memsim/element.hpp"
#include "memsim/errors.hpp"

namespace memsim {

inline constexpr double kVacuumPermittivity = 8.8541878128e-12; // F/m

namespace detail {

inline double signed_sqrt(double u) {
  if (u == 0.0)
    return 0.0;
  return std::copysign(std::sqrt(std::abs(u)), u);
}

inline void require(bool ok, const char* what) {
  if (!ok)
    throw InputError(what);
}

} // namespace detail

/// Current-controlled memristive device with R_M(x, I) = g(x) / sqrt|I|.
///
/// g(x) = g0 (1 + alpha x) is bounded and positive on [0, 1], so the
/// resistance diverges as |I| -> 0 while V = g(x) sign(I) sqrt|I| -> 0.
struct DivergentRParams {
  double g0 = 1.0;    // Ohm A^(1/2)
  double alpha = 1.0; // dimensionless
  double beta = 3.0 * std::numbers::pi; // 1/(A s)
  double i_ref = 1.0; // A
  double x0 = 0.5;

  void validate() const {
    detail::require(g0 > 0.0 && std::isfinite(g0), "g0 must be positive");
    detail::require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be non-negative");
    detail::require(std::isfinite(beta), "beta must be finite");
    detail::require(i_ref > 0.0 && std::isfinite(i_ref), "i_ref must be positive");
    detail::require(x0 >= 0.0 && x0 <= 1.0, "x0 must lie in [0, 1]");
  }

  double g(double x) const { return g0 * (1.0 + alpha * x); }
  double g_max() const { return g0 * (1.0 + alpha); }
};

inline MemElement divergent_r_memristor(const DivergentRParams& p) {
  p.validate();
  auto response = [p](std::span<const double> x, double i) {
    return p.g(x[0]) * detail::signed_sqrt(i);
  };
  auto rate = [p](std::span<const double> x, Excitation i, std::span<double> dx) {
    dx[0] = p.beta * (i.value / p.i_ref) * x[0] * (1.0 - x[0]);
  };
  return MemElement(ElementKind::MemristiveCurrentControlled, "divergent-r",
                    {StateBounds{0.0, 1.0}}, {p.x0}, response, rate);
}

/// Voltage-controlled dual: I = h(x) sign(V) sqrt|V|, h(x) = (1 + alpha x) / g0.
/// The conductance I/V diverges as V -> 0. `i_ref` is read as the reference
/// voltage of the state law.
inline MemElement divergent_g_memristor(const DivergentRParams& p) {
  p.validate();
  auto response = [p](std::span<const double> x, double v) {
    return (1.0 + p.alpha * x[0]) / p.g0 * detail::signed_sqrt(v);
  };
  auto rate = [p](std::span<const double> x, Excitation v, std::span<double> dx) {
    dx[0] = p.beta * (v.value / p.i_ref) * x[0] * (1.0 - x[0]);
  };
  return MemElement(ElementKind::MemristiveVoltageControlled, "divergent-g",
                    {StateBounds{0.0, 1.0}}, {p.x0}, response, rate);
}

/// V = R_M(x, I) I for a current-controlled element.
inline double eval_memristive(const MemElement& element, std::span<const double> x, double i) {
  if (element.kind() != ElementKind::MemristiveCurrentControlled)
    throw InputError("eval_memristive: element is not current-controlled memristive");
  return element.response(x, i);
}

/// Ferroelectric capacitor material and geometry. Defaults are PZT-like
/// constants with the 255 nm / 1e5 um^2 capacitor geometry.
struct FerroParams {
  double p_s = 0.30;       // C/m^2
  double p_r = 0.20;       // C/m^2
  double e_c = 5.0e6;      // V/m
  double eps_r = 300.0;
  double thickness = 255e-9; // m
  double area = 1e-7;        // m^2 (1e5 um^2)
  double tau = 10e-6;        // s
  double p0 = 0.0;           // initial polarization, C/m^2

  void validate() const {
    detail::require(p_s > 0.0 && std::isfinite(p_s), "p_s must be positive");
    detail::require(p_r > 0.0 && p_r < p_s, "p_r must satisfy 0 < p_r < p_s");
    detail::require(e_c > 0.0 && std::isfinite(e_c), "e_c must be positive");
    detail::require(eps_r >= 1.0 && std::isfinite(eps_r), "eps_r must be >= 1");
    detail::require(thickness > 0.0 && std::isfinite(thickness), "thickness must be positive");
    detail::require(area > 0.0 && std::isfinite(area), "area must be positive");
    detail::require(tau > 0.0 && std::isfinite(tau), "tau must be positive");
    detail::require(std::abs(p0) <= p_s, "|p0| must not exceed p_s");
  }

  /// Width parameter of the tanh branches; places the zero-field branch
  /// values at -/+ p_r.
  double delta() const { return e_c / std::log((1.0 + p_r / p_s) / (1.0 - p_r / p_s)); }

  /// Linear (dielectric background) capacitance.
  double linear_capacitance() const { return kVacuumPermittivity * eps_r * area / thickness; }

  /// Saturated polarization branch approached while the field rises
  /// (direction = +1) or falls (direction = -1).
  double branch(double e, int direction) const {
    return p_s * std::tanh((e - direction * e_c) / (2.0 * delta()));
  }
};

/// Memcapacitive element with polarization state P:
///   q = C_lin v + area P,   dP/dt = (P_branch(v / thickness, dir) - P) / tau.
inline MemElement ferroelectric_memcapacitor(const FerroParams& p) {
  p.validate();
  const double c_lin = p.linear_capacitance();
  auto response = [p, c_lin](std::span<const double> x, double v) {
    return c_lin * v + p.area * x[0];
  };
  auto rate = [p](std::span<const double> x, Excitation v, std::span<double> dx) {
    const double target = p.branch(v.value / p.thickness, v.direction);
    dx[0] = (target - x[0]) / p.tau;
  };
  return MemElement(ElementKind::Memcapacitive, "ferroelectric",
                    {StateBounds{-p.p_s, p.p_s}}, {p.p0}, response, rate);
}

/// Memoryless resistor v = r i.
inline MemElement linear_resistor(double r) {
  if (!(r > 0.0) || !std::isfinite(r))
    throw InputError("resistance must be positive");
  return MemElement(ElementKind::MemristiveCurrentControlled, "resistor", {}, {},
                    [r](std::span<const double>, double i) { return r * i; }, nullptr);
}

/// Linear capacitor q = c v.
inline MemElement linear_capacitor(double c) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw InputError("capacitance must be positive");
  return MemElement(ElementKind::Memcapacitive, "capacitor", {}, {},
                    [c](std::span<const double>, double v) { return c * v; }, nullptr);
}

/// v = (r0 + dr x) i with first-order state relaxation. With the default
/// |i| coupling the state repeats every half period of a symmetric drive, so
/// both branches leave the origin with the same slope. `odd_coupling` drives
/// the state with signed i instead, which gives a self-crossing loop.
struct TangentPinchParams {
  double r0 = 1.0;     // Ohm
  double dr = 1.0;     // Ohm
  double beta = 2.0 * std::numbers::pi; // 1/s
  double i_ref = 1.0;  // A
  double x0 = 0.0;
  bool odd_coupling = false;

  void validate() const {
    detail::require(r0 > 0.0 && std::isfinite(r0), "r0 must be positive");
    detail::require(r0 + dr > 0.0 && std::isfinite(dr), "r0 + dr must be positive");
    detail::require(beta >= 0.0 && std::isfinite(beta), "beta must be non-negative");
    detail::require(i_ref > 0.0 && std::isfinite(i_ref), "i_ref must be positive");
    detail::require(std::isfinite(x0) && (odd_coupling || x0 >= 0.0),
                    "x0 must be finite (and non-negative for |i| coupling)");
  }
};

inline MemElement tangent_pinch_memristor(const TangentPinchParams& p) {
  p.validate();
  auto response = [p](std::span<const double> x, double i) { return (p.r0 + p.dr * x[0]) * i; };
  auto rate = [p](std::span<const double> x, Excitation i, std::span<double> dx) {
    const double drive = p.odd_coupling ? i.value : std::abs(i.value);
    dx[0] = p.beta * (drive / p.i_ref - x[0]);
  };
  const StateBounds b = p.odd_coupling
                            ? StateBounds{}
                            : StateBounds{0.0, std::numeric_limits<double>::infinity()};
  return MemElement(ElementKind::MemristiveCurrentControlled,
                    p.odd_coupling ? "twisted-pinch" : "tangent-pinch", {b}, {p.x0},
                    response, rate);
}

} // namespace memsim
