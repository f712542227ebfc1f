#include <cmath>

#include "doctest.h"
#include "fevo/error.hpp"
#include "fevo/oscillation.hpp"

using namespace fevo;

namespace {

Trajectory synthetic(double t_end, double dt, auto&& x_of_t) {
  Trajectory tr;
  tr.layout = {GameKind::PD, true};
  for (double t = 0; t <= t_end + 1e-12; t += dt) tr.samples.push_back({{x_of_t(t)}, 0.5, t});
  return tr;
}

}  // namespace

TEST_CASE("sinusoid: sustained with the right period") {
  const double pi = std::acos(-1.0);
  const auto tr = synthetic(100, 0.05, [&](double t) { return 0.5 + 0.2 * std::sin(2 * pi * t / 7.0); });
  const auto r = detect_oscillation(tr, 0, 40);
  CHECK(r.oscillating);
  CHECK(r.amplitude_trend == AmplitudeTrend::Sustained);
  REQUIRE(r.estimated_period);
  CHECK(*r.estimated_period == doctest::Approx(7.0).epsilon(1e-3));
  CHECK(r.mean_amplitude == doctest::Approx(0.2).epsilon(1e-3));
  CHECK(r.extrema_count >= 10);
  REQUIRE(r.drift_per_period);
  CHECK(*r.drift_per_period < 0.01);
}

TEST_CASE("damped and growing oscillations") {
  const double pi = std::acos(-1.0);
  const auto d = synthetic(100, 0.05, [&](double t) { return 0.5 + 0.3 * std::exp(-0.02 * t) * std::sin(2 * pi * t / 5); });
  CHECK(detect_oscillation(d, 0, 40).amplitude_trend == AmplitudeTrend::Decaying);
  const auto g = synthetic(100, 0.05, [&](double t) { return 0.5 + 0.01 * std::exp(0.02 * t) * std::sin(2 * pi * t / 5); });
  CHECK(detect_oscillation(g, 0, 40).amplitude_trend == AmplitudeTrend::Growing);
}

TEST_CASE("constant trajectory") {
  const auto tr = synthetic(10, 0.1, [](double) { return 1.0 / 3; });
  const auto r = detect_oscillation(tr, 0, 4);
  CHECK_FALSE(r.oscillating);
  CHECK(r.extrema_count == 0);
  CHECK_FALSE(r.estimated_period);
}

TEST_CASE("monotone convergence is not an oscillation") {
  const auto tr = synthetic(50, 0.1, [](double t) { return 0.3 + 0.5 * std::exp(-t); });
  CHECK_FALSE(detect_oscillation(tr, 0, 20).oscillating);
}

TEST_CASE("noise below the hysteresis is ignored") {
  const auto tr = synthetic(20, 0.01, [](double t) { return 0.4 + 1e-8 * std::sin(37 * t); });
  CHECK(detect_oscillation(tr, 0, 5).extrema_count == 0);
}

TEST_CASE("window precondition") {
  const auto tr = synthetic(10, 0.1, [](double t) { return t; });
  CHECK_THROWS_AS(detect_oscillation(tr, 0, 6), InsufficientData);
  CHECK_THROWS_AS(detect_oscillation(tr, 5, 2), DimensionMismatch);
  CHECK_NOTHROW(detect_oscillation(tr, 1, 2));
}
