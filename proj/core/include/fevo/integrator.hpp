#pragma once

// Forward integration of the game-environment ODEs with domain projection,
// plus regular-lattice sampling of a field for quiver plots.

#include <cstddef>
#include <string_view>
#include <vector>

#include "fevo/vector_field.hpp"

namespace fevo {

enum class Method { RK4Fixed, RK45Adaptive };

std::string_view to_string(Method m);
Method parse_method(std::string_view s);  // "rk4" | "rk45"

struct IntegratorConfig {
  Method method = Method::RK45Adaptive;
  double step = 1e-3;      // fixed step (RK4) or initial step (RK45)
  double abs_tol = 1e-8;
  double rel_tol = 1e-8;
  double t_end = 30.0;     // absolute end time; integration starts at s0.t
  double max_step = 0.1;   // RK45 step ceiling; keeps samples dense enough for extrema
  std::size_t max_steps = 20'000'000;  // attempted steps, accepted or rejected

  bool operator==(const IntegratorConfig&) const = default;
};

// Throws ValidationError on non-positive step/tolerances/horizon.
void validate_config(const IntegratorConfig& cfg);

enum class ClampKind { StrategyBound, Simplex, EnvironmentBound };

std::string_view to_string(ClampKind k);

// A post-step repair larger than kClampEventThreshold.
struct ClampEvent {
  double t = 0.0;
  ClampKind kind = ClampKind::StrategyBound;
  double magnitude = 0.0;
};

inline constexpr double kClampEventThreshold = 1e-9;

struct Trajectory {
  Layout layout;
  std::vector<PopulationState> samples;  // strictly increasing t
  std::vector<ClampEvent> events;
  IntegratorConfig config;

  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  // Sum of all repairs, including those below the event threshold.
  double total_clamp_magnitude = 0.0;
  // Largest |x1 + x2 + x3 - 1| seen before projection (OPD; 0 for PD).
  double max_simplex_drift = 0.0;

  bool empty() const { return samples.empty(); }
  const PopulationState& back() const { return samples.back(); }
};

// Integrates `field` from s0 (validated against the layout) until cfg.t_end.
// After every accepted step strategy shares and n are clamped to [0,1] and
// OPD shares are renormalised onto the simplex. OPD fields that provide an
// embedded right-hand side are integrated in (x1, x2, x3[, n]) coordinates.
// Throws StepLimitExceeded or NonFiniteState.
Trajectory integrate(const VectorField& field, const PopulationState& s0,
                     const IntegratorConfig& cfg);

// Linear interpolation of the trajectory on t0, t0 + dt, ..., plus the final time.
Trajectory resample_uniform(const Trajectory& traj, double dt);

struct GridSample {
  PopulationState state;
  StateDerivative derivative;
};

// Evaluates the field on a regular lattice with `resolution` points per axis
// over [0,1] for each reduced coordinate, keeping only points with
// x1 + x2 <= 1 for OPD. Without feedback `fixed_n` is reported as n.
std::vector<GridSample> sample_phase_grid(const VectorField& field, std::size_t resolution,
                                          double fixed_n = 1.0);

}  // namespace fevo
