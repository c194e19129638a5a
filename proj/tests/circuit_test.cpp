#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "memsim/circuit.hpp"
#include "memsim/devices.hpp"

using namespace memsim;

namespace {

constexpr double kPi = std::numbers::pi;

IntegratorConfig rk4(double period, int steps, int periods = 2) {
  IntegratorConfig cfg;
  cfg.dt = period / steps;
  cfg.n_periods = periods;
  return cfg;
}

double kirchhoff_error(const TimeSeries& ts, const DriveWaveform& d, double c_std) {
  double worst = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k)
    worst = std::max(worst, std::abs(d.value(ts.t[k]) - ts.u[k] - ts.y[k] / c_std));
  return worst / d.peak();
}

} // namespace

TEST(SeriesCircuit, CapacitiveDividerIsExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lg(-10.0, -6.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double c_std = std::pow(10.0, lg(rng)), c_dev = std::pow(10.0, lg(rng));
    for (auto shape : {WaveShape::Sinusoidal, WaveShape::Triangular}) {
      DriveWaveform d{shape, Quantity::Voltage, 5.0, 1000.0};
      const auto ts = simulate_series_circuit({c_std, linear_capacitor(c_dev), d}, rk4(1e-3, 200));
      for (std::size_t k = 0; k < ts.size(); ++k) {
        const double expected = d.value(ts.t[k]) * c_std / (c_std + c_dev);
        EXPECT_LE(std::abs(ts.u[k] - expected), 1e-9 * std::max(std::abs(expected), 1e-300) +
                                                    1e-12 * d.peak());
      }
    }
  }
}

TEST(SeriesCircuit, LargeStandardCapacitorShortsOut) {
  const double c_dev = 33e-9;
  DriveWaveform d{WaveShape::Triangular, Quantity::Voltage, 1.0, 1000.0};
  const auto ts = simulate_series_circuit({1e4 * c_dev, linear_capacitor(c_dev), d}, rk4(1e-3, 400));
  for (std::size_t k = 0; k < ts.size(); ++k)
    EXPECT_NEAR(ts.u[k], d.value(ts.t[k]), 1e-3 * d.peak());
}

TEST(SeriesCircuit, KirchhoffHoldsAtEverySample) {
  for (double c_std : {33e-9, 330e-9, 3.3e-9}) {
    DriveWaveform d{WaveShape::Triangular, Quantity::Voltage, 10.0, 1000.0};
    const auto ts =
        simulate_series_circuit({c_std, ferroelectric_memcapacitor({}), d}, rk4(1e-3, 2000, 3));
    EXPECT_LT(kirchhoff_error(ts, d, c_std), 1e-9) << "c_std " << c_std;
  }
}

TEST(SeriesCircuit, DeterministicDeviceVoltages) {
  DriveWaveform d{WaveShape::Triangular, Quantity::Voltage, 10.0, 1000.0};
  SeriesCircuit ckt{33e-9, ferroelectric_memcapacitor({}), d};
  const auto a = simulate_series_circuit(ckt, rk4(1e-3, 1000));
  const auto b = simulate_series_circuit(ckt, rk4(1e-3, 1000));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a.u[k], b.u[k]);
    EXPECT_EQ(a.y[k], b.y[k]);
  }
}

TEST(SeriesCircuit, SteadyFerroelectricLoopEnclosesArea) {
  DriveWaveform d{WaveShape::Triangular, Quantity::Voltage, 10.0, 1000.0};
  const auto ts =
      simulate_series_circuit({33e-9, ferroelectric_memcapacitor({}), d}, rk4(1e-3, 2000, 4));
  const auto loop = steady_loop(ts, d.period(), 1e-3);
  EXPECT_GT(loop_area(loop).enclosed(), 1e-3 * loop.u_scale() * loop.y_scale());
}

TEST(SeriesCircuit, RejectsNonCapacitiveDevicesAndBadCapacitors) {
  DriveWaveform v{WaveShape::Triangular, Quantity::Voltage, 1.0, 1000.0};
  EXPECT_THROW(simulate_series_circuit({33e-9, linear_resistor(1.0), v}, rk4(1e-3, 100)),
               InputError);
  EXPECT_THROW(simulate_series_circuit({0.0, linear_capacitor(1e-9), v}, rk4(1e-3, 100)),
               InputError);
  DriveWaveform i{WaveShape::Triangular, Quantity::Current, 1.0, 1000.0};
  EXPECT_THROW(simulate_series_circuit({33e-9, linear_capacitor(1e-9), i}, rk4(1e-3, 100)),
               InputError);
}

TEST(SeriesCircuit, UnbracketedRootIsANumericalError) {
  // q decreasing in v has no root in any bracket.
  MemElement bad(ElementKind::Memcapacitive, "inverted", {}, {},
                 [](std::span<const double>, double v) { return -1e-6 * v; }, nullptr);
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Voltage, 1.0, 1000.0};
  EXPECT_THROW(simulate_series_circuit({1e-9, bad, d}, rk4(1e-3, 100)), NumericalError);
}

TEST(SeriesCircuit, SolverMeetsItsResidualTolerance) {
  const auto dev = ferroelectric_memcapacitor({});
  const DeviceVoltageSolver s(dev, 33e-9, 10.0);
  for (double p : {-0.3, -0.1, 0.0, 0.25})
    for (double vs : {-10.0, -3.0, 0.0, 0.5, 9.9}) {
      std::vector<double> x{p};
      const double v = s.solve(x, vs);
      EXPECT_LT(std::abs(s.residual(x, vs, v)), s.tolerance());
    }
}

TEST(NumericCurrent, DifferentiatesASine) {
  const double c = 33e-9, a = 1.0, w = 2 * kPi * 1000.0;
  for (int n : {200, 400}) {
    TimeSeries ts;
    const double h = 1e-3 / n;
    for (int k = 0; k <= n; ++k) {
      ts.t.push_back(k * h);
      ts.u.push_back(std::sin(w * k * h));
      ts.y.push_back(c * a * std::sin(w * k * h));
    }
    const auto i = numeric_current(ts);
    double err = 0.0;
    for (int k = 1; k < n; ++k) err = std::max(err, std::abs(i.y[k] - c * a * w * std::cos(w * k * h)));
    // central differences: error ~ (w h)^2 / 6 relative
    EXPECT_LT(err / (c * a * w), 0.2 * (w * h) * (w * h));
  }
}

TEST(NumericCurrent, ConstantChargeGivesZeroCurrent) {
  TimeSeries ts;
  for (int k = 0; k < 10; ++k) {
    ts.t.push_back(0.1 * k);
    ts.u.push_back(0.0);
    ts.y.push_back(4.2e-9);
  }
  for (std::size_t w : {1u, 3u, 5u})
    for (double v : numeric_current(ts, w).y) EXPECT_EQ(v, 0.0);
}

TEST(NumericCurrent, SmoothingAveragesAnOddWindow) {
  TimeSeries ts;
  for (int k = 0; k < 7; ++k) {
    ts.t.push_back(k);
    ts.u.push_back(0.0);
    ts.y.push_back(k % 2 ? 1.0 : 0.0);
  }
  const auto raw = numeric_current(ts);
  const auto smooth = numeric_current(ts, 3);
  EXPECT_DOUBLE_EQ(smooth.y[3], (raw.y[2] + raw.y[3] + raw.y[4]) / 3.0);
  EXPECT_THROW(numeric_current(ts, 2), InputError);
}

TEST(NumericCurrent, Preconditions) {
  TimeSeries two{{0.0, 1.0}, {0.0, 0.0}, {0.0, 1.0}, {}, ""};
  EXPECT_THROW(numeric_current(two), InputError);
  TimeSeries uneven{{0.0, 1.0, 3.0}, {0, 0, 0}, {0, 1, 2}, {}, ""};
  EXPECT_THROW(numeric_current(uneven), InputError);
}
