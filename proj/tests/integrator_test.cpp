#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "memsim/circuit.hpp"
#include "memsim/devices.hpp"
#include "memsim/integrator.hpp"

using namespace memsim;

namespace {

constexpr double kPi = std::numbers::pi;

// x' = beta (|i|/i_ref - x) at constant i: x(t) = s + (x0 - s) exp(-beta t).
double relaxation_error(Method m, double dt) {
  const TangentPinchParams p{.beta = 3.0, .i_ref = 1.0, .x0 = 0.1};
  const auto e = tangent_pinch_memristor(p);
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Current, 0.0, 0.5, 0.0, 0.7};
  IntegratorConfig cfg;
  cfg.method = m;
  cfg.dt = dt;
  cfg.n_periods = 2;
  const auto ts = integrate(e, d, cfg);
  double err = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double exact = 0.7 + (0.1 - 0.7) * std::exp(-3.0 * ts.t[k]);
    err = std::max(err, std::abs(ts.x[0][k] - exact) / std::abs(exact));
  }
  return err;
}

} // namespace

TEST(Integrator, LinearCapacitorFollowsTheDrive) {
  const double c = 33e-9, a = 1.5, f = 1000.0;
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Voltage, a, f};
  IntegratorConfig cfg;
  cfg.dt = 1.0 / (1000 * f);
  cfg.n_periods = 2;
  const auto ts = integrate(linear_capacitor(c), d, cfg);
  ASSERT_EQ(ts.size(), 2001u);
  ASSERT_TRUE(ts.uniform_step());
  for (std::size_t k = 0; k < ts.size(); ++k)
    EXPECT_NEAR(ts.y[k], c * a * std::sin(2 * kPi * f * ts.t[k]), 1e-6 * c * a);
}

TEST(Integrator, LinearCapacitorStoresNoEnergyPerPeriod) {
  const double c = 33e-9, a = 1.0, f = 1000.0;
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Voltage, a, f};
  IntegratorConfig cfg;
  cfg.dt = 1.0 / (1000 * f);
  cfg.n_periods = 2;
  const auto ts = integrate(linear_capacitor(c), d, cfg);
  double work = 0.0;
  for (std::size_t k = ts.size() - 1001; k + 1 < ts.size(); ++k)
    work += 0.5 * (ts.u[k] + ts.u[k + 1]) * (ts.y[k + 1] - ts.y[k]);
  EXPECT_LT(std::abs(work), 1e-6 * 0.5 * c * a * a);
}

TEST(Integrator, ExponentialRelaxationOracle) {
  EXPECT_LT(relaxation_error(Method::RK4Fixed, 1e-3), 1e-8);
  EXPECT_LT(relaxation_error(Method::RK45Adaptive, 1e-3), 1e-8);
}

TEST(Integrator, RK4ConvergesAtFourthOrder) {
  std::vector<double> lh, le;
  for (double dt : {0.08, 0.04, 0.02, 0.01}) {
    lh.push_back(std::log(dt));
    le.push_back(std::log(relaxation_error(Method::RK4Fixed, dt)));
  }
  const double n = static_cast<double>(lh.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lh.size(); ++i) mx += lh[i] / n, my += le[i] / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lh.size(); ++i)
    sxy += (lh[i] - mx) * (le[i] - my), sxx += (lh[i] - mx) * (lh[i] - mx);
  EXPECT_NEAR(sxy / sxx, 4.0, 0.3);
}

TEST(Integrator, FrozenStateStaysConstant) {
  const auto e = divergent_r_memristor({.beta = 0.0, .x0 = 0.5});
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Current, 1.0, 1.0};
  for (Method m : {Method::RK4Fixed, Method::RK45Adaptive}) {
    IntegratorConfig cfg;
    cfg.method = m;
    const auto ts = integrate(e, d, cfg);
    for (double x : ts.x[0]) EXPECT_EQ(x, 0.5);
  }
}

TEST(Integrator, StatesNeverLeaveTheirBounds) {
  // A large rate constant drives x hard into the [0, 1] window.
  const auto e = divergent_r_memristor({.beta = 500.0, .x0 = 0.5});
  for (auto shape : {WaveShape::Sinusoidal, WaveShape::Triangular}) {
    for (Method m : {Method::RK4Fixed, Method::RK45Adaptive}) {
      DriveWaveform d{shape, Quantity::Current, 2.0, 1.0};
      IntegratorConfig cfg;
      cfg.method = m;
      cfg.dt = 2e-3;
      cfg.n_periods = 3;
      const auto ts = integrate(e, d, cfg);
      for (double x : ts.x[0]) {
        EXPECT_GE(x, 0.0);
        EXPECT_LE(x, 1.0);
      }
    }
  }
  const FerroParams p{.tau = 1e-7};
  DriveWaveform d{WaveShape::Triangular, Quantity::Voltage, 20.0, 1000.0};
  IntegratorConfig cfg;
  cfg.dt = 1e-6;
  cfg.n_periods = 2;
  const auto ts = integrate(ferroelectric_memcapacitor(p), d, cfg);
  for (double pol : ts.x[0])
    EXPECT_LE(std::abs(pol), p.p_s);
}

TEST(Integrator, ClampingIsAHardGuarantee) {
  OdeSystem sys;
  sys.bounds = {StateBounds{0.0, 1.0}};
  sys.x0 = {0.99};
  sys.rate = [](double, double, std::span<const double>, std::span<double> dx) { dx[0] = 1e6; };
  sys.observe = [](double t, std::span<const double> x) { return std::pair{t, x[0]}; };
  IntegratorConfig cfg;
  cfg.dt = 0.01;
  const auto ts = integrate_system(sys, 1.0, cfg, 1.0);
  for (double x : ts.x[0]) EXPECT_LE(x, 1.0);
  EXPECT_EQ(ts.x[0].back(), 1.0);
}

TEST(Integrator, AdaptiveStepUnderflowReportsTheTime) {
  OdeSystem sys;
  sys.bounds = {StateBounds{}};
  sys.x0 = {1.0};
  // Finite-time blow-up at t = 0.5.
  sys.rate = [](double t, double, std::span<const double> x, std::span<double> dx) {
    dx[0] = x[0] * x[0] / (0.5 - t) / (0.5 - t);
  };
  sys.observe = [](double t, std::span<const double> x) { return std::pair{t, x[0]}; };
  IntegratorConfig cfg;
  cfg.method = Method::RK45Adaptive;
  cfg.dt_min = 1e-6;
  try {
    integrate_system(sys, 1.0, cfg, 1.0);
    FAIL() << "expected a numerical error";
  } catch (const NumericalError& e) {
    EXPECT_GT(e.time(), 0.0);
    EXPECT_LT(e.time(), 0.5);
  }
}

TEST(Integrator, DriveElementMismatchIsRejected) {
  DriveWaveform v{WaveShape::Sinusoidal, Quantity::Voltage};
  DriveWaveform i{WaveShape::Sinusoidal, Quantity::Current};
  IntegratorConfig cfg;
  EXPECT_THROW(integrate(divergent_r_memristor({}), v, cfg), InputError);
  EXPECT_THROW(integrate(divergent_g_memristor({}), i, cfg), InputError);
  EXPECT_THROW(integrate(linear_capacitor(1e-9), i, cfg), InputError);
}

TEST(Integrator, ConfigValidation) {
  IntegratorConfig cfg;
  cfg.n_periods = 1;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = {};
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), InputError);
  cfg = {};
  cfg.method = Method::RK45Adaptive;
  cfg.rtol = 0.0;
  EXPECT_THROW(cfg.validate(), InputError);
}

TEST(Integrator, AdaptiveStepsLandOnTriangleCorners) {
  const auto e = tangent_pinch_memristor({});
  DriveWaveform d{WaveShape::Triangular, Quantity::Current, 1.0, 1.0};
  IntegratorConfig cfg;
  cfg.method = Method::RK45Adaptive;
  const auto ts = integrate(e, d, cfg);
  for (double c : d.corner_times(0.0, cfg.n_periods * d.period())) {
    bool hit = false;
    for (double t : ts.t) hit = hit || t == c;
    EXPECT_TRUE(hit) << "no sample at corner " << c;
  }
}

TEST(Integrator, AdaptiveAgreesWithFixedStep) {
  const auto e = divergent_r_memristor({});
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Current, 1.0, 1.0};
  IntegratorConfig fixed;
  fixed.dt = 1e-4;
  IntegratorConfig adaptive;
  adaptive.method = Method::RK45Adaptive;
  adaptive.rtol = 1e-10;
  adaptive.atol = 1e-13;
  const auto a = integrate(e, d, fixed);
  const auto b = integrate(e, d, adaptive);
  EXPECT_NEAR(a.x[0].back(), b.x[0].back(), 1e-8);
}

TEST(SteadyLoop, MemorylessResistorIsADegenerateSegment) {
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Current, 1.0, 1.0};
  IntegratorConfig cfg;
  cfg.n_periods = 2;
  const auto ts = integrate(linear_resistor(2.0), d, cfg);
  EXPECT_LT(period_distance(ts, 1.0, 0.0, 1.0), 1e-12);
  const auto loop = steady_loop(ts, 1.0, 1e-9);
  EXPECT_EQ(loop.points().front(), loop.points().back());
  EXPECT_EQ(loop.vertices().size(), 1000u);
  EXPECT_NEAR(loop_area(loop).enclosed(), 0.0, 1e-12);
}

TEST(SteadyLoop, TangentPinchConvergesWithinFiveTimeConstants) {
  const TangentPinchParams p{};
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Current, 1.0, 1.0};
  IntegratorConfig cfg;
  cfg.n_periods = 8;
  const auto ts = integrate(tangent_pinch_memristor(p), d, cfg);
  const double settle = 5.0 / p.beta;
  const double t0 = std::ceil(settle / d.period()) * d.period();
  EXPECT_LT(period_distance(ts, d.period(), t0, t0 + d.period()), 1e-3);
  EXPECT_GT(period_distance(ts, d.period(), 0.0, d.period()), 1e-2);
}

TEST(SteadyLoop, FerroelectricVirginCurveDiffersFromLaterPeriods) {
  SeriesCircuit ckt{33e-9, ferroelectric_memcapacitor({}),
                    {WaveShape::Triangular, Quantity::Voltage, 10.0, 1000.0}};
  IntegratorConfig cfg;
  cfg.dt = 1e-3 / 2000;
  cfg.n_periods = 4;
  const auto ts = simulate_series_circuit(ckt, cfg);
  const double T = 1e-3;
  const double first = period_distance(ts, T, 0.0, T);
  const double later = period_distance(ts, T, 2 * T, 3 * T);
  EXPECT_GT(first, 0.05);
  EXPECT_LT(later, 1e-6);
  EXPECT_NO_THROW(steady_loop(ts, T, 1e-3));
}

TEST(SteadyLoop, ReportsTheAchievedDistance) {
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Current, 1.0, 1.0};
  IntegratorConfig cfg;
  cfg.n_periods = 2;
  const auto ts = integrate(tangent_pinch_memristor({.beta = 0.5}), d, cfg);
  try {
    steady_loop(ts, 1.0, 1e-6);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("distance"), std::string::npos);
  }
  EXPECT_THROW(steady_loop(ts, 1.5, 1e-3), InputError);
}

TEST(SteadyLoop, AdaptiveSeriesKeepsItsSamples) {
  DriveWaveform d{WaveShape::Sinusoidal, Quantity::Current, 1.0, 1.0};
  IntegratorConfig cfg;
  cfg.method = Method::RK45Adaptive;
  cfg.n_periods = 6;
  const auto ts = integrate(tangent_pinch_memristor({}), d, cfg);
  ASSERT_FALSE(ts.uniform_step());
  const auto loop = steady_loop(ts, 1.0, 1e-3, 256);
  std::size_t in_last = 0;
  for (double t : ts.t) in_last += t > 5.0 + 1e-9;
  EXPECT_EQ(loop.vertices().size(), in_last);
  EXPECT_EQ(loop.vertices().back().u, ts.u.back());
}
