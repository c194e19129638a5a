#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "memsim/errors.hpp"

namespace memsim {

enum class WaveShape { Triangular, Sinusoidal };

/// Physical quantity imposed by a source.
enum class Quantity { Voltage, Current };

inline const char* to_string(WaveShape s) {
  return s == WaveShape::Triangular ? "triangular" : "sinusoidal";
}

inline const char* to_string(Quantity q) {
  return q == Quantity::Voltage ? "voltage" : "current";
}

/// Periodic source. The triangular wave starts at the offset and rises first,
/// so both shapes have zero mean around the offset and agree in sign over the
/// first half period.
struct DriveWaveform {
  WaveShape shape = WaveShape::Sinusoidal;
  Quantity quantity = Quantity::Voltage;
  double amplitude = 1.0;
  double frequency = 1.0;
  double phase = 0.0; // radians
  double offset = 0.0;

  void validate() const {
    if (!(frequency > 0.0) || !std::isfinite(frequency))
      throw InputError("drive frequency must be positive and finite");
    if (!std::isfinite(amplitude) || !std::isfinite(phase) || !std::isfinite(offset))
      throw InputError("drive amplitude, phase and offset must be finite");
  }

  double period() const { return 1.0 / frequency; }

  /// Largest |value| reached over a period.
  double peak() const { return std::abs(amplitude) + std::abs(offset); }

  double value(double t) const {
    if (shape == WaveShape::Sinusoidal)
      return offset + amplitude * std::sin(angular(t));
    return offset + amplitude * triangle(cycle_fraction(t));
  }

  double slope(double t) const {
    if (shape == WaveShape::Sinusoidal)
      return amplitude * 2.0 * std::numbers::pi * frequency * std::cos(angular(t));
    return rising(cycle_fraction(t)) ? 4.0 * amplitude * frequency
                                     : -4.0 * amplitude * frequency;
  }

  /// Sign of d(value)/dt, +1 or -1. Where the derivative vanishes or jumps
  /// the sign of the interval ending at t is held.
  int direction(double t) const {
    int d = 1;
    if (shape == WaveShape::Sinusoidal) {
      const double c = std::cos(angular(t));
      if (c > 0.0)
        d = 1;
      else if (c < 0.0)
        d = -1;
      else
        d = std::sin(angular(t)) > 0.0 ? 1 : -1;
    } else {
      d = rising(cycle_fraction(t)) ? 1 : -1;
    }
    return amplitude < 0.0 ? -d : d;
  }

  /// Instants in the open interval (t0, t1) where the derivative is
  /// discontinuous. Empty for sinusoids.
  std::vector<double> corner_times(double t0, double t1) const {
    std::vector<double> out;
    if (shape != WaveShape::Triangular || amplitude == 0.0)
      return out;
    const double shift = phase / (2.0 * std::numbers::pi);
    const double n0 = std::floor(t0 * frequency + shift) - 1.0;
    for (double n = n0;; n += 1.0) {
      bool past = false;
      for (double c : {0.25, 0.75}) {
        const double tc = (n + c - shift) / frequency;
        if (tc >= t1) {
          past = true;
          break;
        }
        if (tc > t0)
          out.push_back(tc);
      }
      if (past)
        break;
    }
    return out;
  }

private:
  double angular(double t) const {
    return 2.0 * std::numbers::pi * frequency * t + phase;
  }

  double cycle_fraction(double t) const {
    double th = frequency * t + phase / (2.0 * std::numbers::pi);
    th -= std::floor(th);
    return th;
  }

  // Corners belong to the interval that ends there.
  static bool rising(double th) { return th <= 0.25 || th > 0.75; }

  static double triangle(double th) {
    if (th < 0.25)
      return 4.0 * th;
    if (th < 0.75)
      return 2.0 - 4.0 * th;
    return 4.0 * th - 4.0;
  }
};

} // namespace memsim
