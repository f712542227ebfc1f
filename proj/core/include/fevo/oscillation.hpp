#pragma once

// Detection of periodic behaviour in the trailing window of a trajectory.

#include <cstddef>
#include <optional>
#include <string_view>

#include "fevo/integrator.hpp"

namespace fevo {

enum class AmplitudeTrend { Sustained, Decaying, Growing };

std::string_view to_string(AmplitudeTrend t);

struct OscillationOptions {
  double hysteresis = 1e-6;          // minimum swing that confirms an extremum
  double sustained_fraction = 0.01;  // |slope| * window below this fraction of the mean amplitude
};

struct OscillationReport {
  bool oscillating = false;          // at least four confirmed extrema
  std::optional<double> estimated_period;
  AmplitudeTrend amplitude_trend = AmplitudeTrend::Decaying;
  std::size_t extrema_count = 0;
  double mean_amplitude = 0.0;       // half peak-to-trough swing, averaged
  double amplitude_slope = 0.0;      // least-squares slope of amplitude against time
  // |slope| * period / mean amplitude; empty without a period estimate.
  std::optional<double> drift_per_period;
};

// `component` indexes (strategy coordinates..., n): 0 = x (PD) or x1 (OPD).
// Only samples with t >= t_last - window are examined. Throws InsufficientData
// if the trajectory spans less than 2 * window.
OscillationReport detect_oscillation(const Trajectory& traj, std::size_t component, double window,
                                     OscillationOptions opts = {});

}  // namespace fevo
