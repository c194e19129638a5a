#include <cmath>

#include <gtest/gtest.h>

#include "memsim/devices.hpp"
#include "memsim/scaling.hpp"
#include "support.hpp"

using namespace memsim;

namespace {

IntegratorConfig rk4(int steps = 1000, int periods = 3) {
  IntegratorConfig cfg;
  cfg.dt = 1.0 / steps;
  cfg.n_periods = periods;
  return cfg;
}

} // namespace

TEST(PowerLaw, RecoversExactExponents) {
  for (double p : {-0.5, 0.0, 0.7}) {
    const auto l = fixtures::parametric(2000, [p](double th) {
      const double u = std::sin(th);
      return LoopPoint{u, std::copysign(std::pow(std::abs(u), 1.0 + p), u)};
    });
    const auto fit = fit_power_law(l);
    EXPECT_NEAR(fit.exponent, p, 1e-9);
    EXPECT_GE(fit.groups, 2u);
  }
}

TEST(PowerLaw, PerGroupPrefactorsDoNotBiasTheSlope) {
  // Different prefactors on the two branches; same exponent.
  const auto l = fixtures::parametric(2000, [](double th) {
    const double u = std::sin(th);
    const double g = std::cos(th) > 0 ? 1.0 : 3.0;
    return LoopPoint{u, g * std::copysign(std::sqrt(std::abs(u)), u)};
  });
  EXPECT_NEAR(fit_power_law(l).exponent, -0.5, 1e-6);
}

TEST(PowerLaw, UndefinedWithoutSamplesNearZero) {
  const auto l = fixtures::parametric(8, [](double th) { return LoopPoint{2.0 + std::cos(th), 1.0}; });
  const auto fit = fit_power_law(l);
  EXPECT_TRUE(std::isnan(fit.exponent));
  EXPECT_EQ(fit.samples, 0u);
}

TEST(LimitScan, DivergentResistance) {
  const auto r = limit_scan(divergent_r_memristor({}),
                            {WaveShape::Sinusoidal, Quantity::Current, 1.0, 1.0}, 2, rk4());
  EXPECT_NEAR(r.exponent, -0.5, 0.05);
  EXPECT_TRUE(r.response_vanishes);
  ASSERT_EQ(r.amplitudes.size(), 5u);
  EXPECT_DOUBLE_EQ(r.amplitudes.back(), 0.01);
  for (std::size_t k = 1; k < r.max_response.size(); ++k)
    EXPECT_LT(r.max_response[k], r.max_response[k - 1]);
}

TEST(LimitScan, DivergentConductance) {
  const auto r = limit_scan(divergent_g_memristor({}),
                            {WaveShape::Sinusoidal, Quantity::Voltage, 1.0, 1.0}, 3, rk4());
  EXPECT_NEAR(r.exponent, -0.5, 0.05);
  EXPECT_TRUE(r.response_vanishes);
}

TEST(LimitScan, LinearResistorIsFlat) {
  const auto r = limit_scan(linear_resistor(2.0),
                            {WaveShape::Sinusoidal, Quantity::Current, 1.0, 1.0}, 2, rk4(1000, 2));
  EXPECT_NEAR(r.exponent, 0.0, 0.02);
}

TEST(LimitScan, TriangularDriveAndAdaptiveIntegration) {
  IntegratorConfig cfg;
  cfg.method = Method::RK45Adaptive;
  cfg.n_periods = 3;
  const auto r = limit_scan(divergent_r_memristor({}),
                            {WaveShape::Triangular, Quantity::Current, 1.0, 1.0}, 2, cfg);
  EXPECT_NEAR(r.exponent, -0.5, 0.05);
}

TEST(LimitScan, Preconditions) {
  const DriveWaveform v{WaveShape::Sinusoidal, Quantity::Voltage, 1.0, 1.0};
  EXPECT_THROW(limit_scan(linear_capacitor(1e-9), v, 2, rk4()), InputError);
  const DriveWaveform i{WaveShape::Sinusoidal, Quantity::Current, 1.0, 1.0};
  EXPECT_THROW(limit_scan(divergent_r_memristor({}), i, 1, rk4()), InputError);
}
