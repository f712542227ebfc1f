#include "fevo/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "fevo/error.hpp"

namespace fevo {

std::string_view to_string(Method m) { return m == Method::RK4Fixed ? "rk4" : "rk45"; }

Method parse_method(std::string_view s) {
  if (s == "rk4") return Method::RK4Fixed;
  if (s == "rk45") return Method::RK45Adaptive;
  throw ValidationError("unknown integration method '" + std::string(s) + "' (expected rk4|rk45)");
}

std::string_view to_string(ClampKind k) {
  switch (k) {
    case ClampKind::StrategyBound: return "strategy-bound";
    case ClampKind::Simplex: return "simplex";
    case ClampKind::EnvironmentBound: return "environment-bound";
  }
  return "?";
}

void validate_config(const IntegratorConfig& c) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(c.step)) throw ValidationError("integrator step must be > 0");
  if (!positive(c.abs_tol) || !positive(c.rel_tol)) throw ValidationError("tolerances must be > 0");
  if (!positive(c.t_end)) throw ValidationError("t_end must be > 0");
  if (!(c.max_step >= 0.0)) throw ValidationError("max_step must be >= 0");
  if (c.max_steps == 0) throw ValidationError("max_steps must be positive");
}

namespace {

// Integration coordinates: reduced for PD (and OPD fields without an
// embedding), (x1, x2, x3[, n]) otherwise.
struct Coordinates {
  Layout layout;
  bool embedded = false;

  std::size_t dim() const { return layout.dim() + (embedded ? 1 : 0); }
  std::size_t strategies() const { return layout.strategy_coords() + (embedded ? 1 : 0); }
  bool has_n() const { return layout.feedback; }
  std::size_t n_index() const { return strategies(); }

  Vec from_state(const PopulationState& s) const {
    Vec v(s.x.begin(), s.x.end());
    if (embedded) v.push_back(std::max(0.0, 1.0 - s.x[0] - s.x[1]));
    if (has_n()) v.push_back(s.n);
    return v;
  }

  PopulationState to_state(const Vec& v, double t, double fixed_n) const {
    PopulationState s;
    s.x.assign(v.begin(), v.begin() + layout.strategy_coords());
    s.n = has_n() ? v[n_index()] : fixed_n;
    s.t = t;
    return s;
  }
};

class Stepper {
 public:
  Stepper(const VectorField& f, Coordinates c) : field_(f), coords_(c) {}

  Vec eval(const Vec& y) const {
    Vec d = coords_.embedded ? field_.embedded_rhs(y) : field_.rhs(y);
    for (double v : d) {
      if (!std::isfinite(v)) throw NonFiniteState("field returned a non-finite derivative");
    }
    return d;
  }

 private:
  const VectorField& field_;
  Coordinates coords_;
};

void axpy(Vec& out, const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  out = y;
  for (auto [c, k] : terms) {
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * c * (*k)[i];
  }
}

struct Projector {
  Coordinates coords;
  Trajectory& traj;

  void record(double t, ClampKind kind, double magnitude) {
    traj.total_clamp_magnitude += magnitude;
    if (magnitude > kClampEventThreshold) traj.events.push_back({t, kind, magnitude});
  }

  void operator()(Vec& y, double t) {
    const std::size_t k = coords.strategies();
    if (coords.embedded) {
      double raw = 0.0;
      for (std::size_t i = 0; i < k; ++i) raw += y[i];
      traj.max_simplex_drift = std::max(traj.max_simplex_drift, std::abs(raw - 1.0));
    }
    double bound = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double c = std::clamp(y[i], 0.0, 1.0);
      bound += std::abs(c - y[i]);
      y[i] = c;
    }
    if (bound > 0.0) record(t, ClampKind::StrategyBound, bound);

    if (coords.embedded) {
      double sum = 0.0;
      for (std::size_t i = 0; i < k; ++i) sum += y[i];
      if (sum > 0.0 && sum != 1.0) {
        for (std::size_t i = 0; i < k; ++i) y[i] /= sum;
        record(t, ClampKind::Simplex, std::abs(sum - 1.0));
      }
    } else if (coords.layout.kind == GameKind::OPD && y[0] + y[1] > 1.0) {
      // Euclidean projection onto the face x1 + x2 = 1.
      const double excess = y[0] + y[1] - 1.0;
      double a = y[0] - 0.5 * excess, b = y[1] - 0.5 * excess;
      if (a < 0.0) { b += a; a = 0.0; }
      if (b < 0.0) { a += b; b = 0.0; }
      y[0] = a;
      y[1] = b;
      record(t, ClampKind::Simplex, excess);
    }

    if (coords.has_n()) {
      double& n = y[coords.n_index()];
      const double c = std::clamp(n, 0.0, 1.0);
      if (c != n) record(t, ClampKind::EnvironmentBound, std::abs(c - n));
      n = c;
    }
  }
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - b* (difference between the 5th and embedded 4th order weights).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Trajectory integrate(const VectorField& field, const PopulationState& s0,
                     const IntegratorConfig& cfg) {
  validate_config(cfg);
  validate_state(s0, field.layout.kind);
  if (!(cfg.t_end > s0.t)) throw ValidationError("t_end must exceed the initial time");

  Coordinates coords{field.layout, field.layout.kind == GameKind::OPD &&
                                       static_cast<bool>(field.embedded_rhs)};
  Trajectory traj;
  traj.layout = field.layout;
  traj.config = cfg;
  Projector project{coords, traj};
  Stepper stepper(field, coords);

  Vec y = coords.from_state(s0);
  double t = s0.t;
  project(y, t);
  traj.samples.push_back(coords.to_state(y, t, s0.n));

  const std::size_t dim = coords.dim();
  Vec k1, k2, k3, k4, k5, k6, k7, tmp, ynew(dim);
  std::size_t attempts = 0;

  if (cfg.method == Method::RK4Fixed) {
    while (t < cfg.t_end) {
      if (++attempts > cfg.max_steps) throw StepLimitExceeded("RK4: step limit exceeded");
      const double h = std::min(cfg.step, cfg.t_end - t);
      k1 = stepper.eval(y);
      axpy(tmp, y, h, {{0.5, &k1}});
      k2 = stepper.eval(tmp);
      axpy(tmp, y, h, {{0.5, &k2}});
      k3 = stepper.eval(tmp);
      axpy(tmp, y, h, {{1.0, &k3}});
      k4 = stepper.eval(tmp);
      for (std::size_t i = 0; i < dim; ++i)
        y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      const double tn = (cfg.t_end - t <= cfg.step) ? cfg.t_end : t + h;
      if (!(tn > t)) break;
      t = tn;
      project(y, t);
      traj.samples.push_back(coords.to_state(y, t, s0.n));
      ++traj.accepted_steps;
    }
    return traj;
  }

  double h = std::min(cfg.step, cfg.t_end - t);
  const double hmax = cfg.max_step > 0.0 ? cfg.max_step : cfg.t_end - s0.t;
  k1 = stepper.eval(y);
  while (t < cfg.t_end) {
    if (++attempts > cfg.max_steps) throw StepLimitExceeded("RK45: step limit exceeded");
    h = std::min({h, hmax, cfg.t_end - t});
    if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
      throw StepLimitExceeded("RK45: step size underflow at t = " + std::to_string(t));
    }

    axpy(tmp, y, h, {{a21, &k1}});
    k2 = stepper.eval(tmp);
    axpy(tmp, y, h, {{a31, &k1}, {a32, &k2}});
    k3 = stepper.eval(tmp);
    axpy(tmp, y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    k4 = stepper.eval(tmp);
    axpy(tmp, y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    k5 = stepper.eval(tmp);
    axpy(tmp, y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    k6 = stepper.eval(tmp);
    axpy(ynew, y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    k7 = stepper.eval(ynew);

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                            e7 * k7[i]);
      const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(e) / sc);
    }

    if (err <= 1.0) {
      const double tn = (cfg.t_end - t <= h) ? cfg.t_end : t + h;
      t = tn;
      y = ynew;
      const Vec before = y;
      project(y, t);
      traj.samples.push_back(coords.to_state(y, t, s0.n));
      ++traj.accepted_steps;
      // First-same-as-last, unless the projection moved the state.
      k1 = (y == before) ? k7 : stepper.eval(y);
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= factor;
    } else {
      ++traj.rejected_steps;
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }
  return traj;
}

Trajectory resample_uniform(const Trajectory& traj, double dt) {
  if (traj.samples.empty()) throw EmptyTrajectory("cannot resample an empty trajectory");
  if (!(std::isfinite(dt) && dt > 0.0)) throw ValidationError("resampling interval must be > 0");
  Trajectory out = traj;
  out.samples.clear();
  const auto& s = traj.samples;
  const double t0 = s.front().t, t1 = s.back().t;
  std::size_t seg = 0;
  auto at = [&](double t) {
    while (seg + 1 < s.size() && s[seg + 1].t < t) ++seg;
    if (seg + 1 >= s.size()) return s.back();
    const PopulationState& a = s[seg];
    const PopulationState& b = s[seg + 1];
    const double w = (t - a.t) / (b.t - a.t);
    PopulationState p = a;
    for (std::size_t i = 0; i < p.x.size(); ++i) p.x[i] = a.x[i] + w * (b.x[i] - a.x[i]);
    p.n = a.n + w * (b.n - a.n);
    p.t = t;
    return p;
  };
  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    if (t >= t1) break;
    out.samples.push_back(at(t));
  }
  out.samples.push_back(s.back());
  return out;
}

std::vector<GridSample> sample_phase_grid(const VectorField& field, std::size_t resolution,
                                          double fixed_n) {
  if (resolution < 2) throw ValidationError("phase grid needs at least 2 points per axis");
  const Layout layout = field.layout;
  const std::size_t last = resolution - 1;
  auto coord = [last](std::size_t i) { return static_cast<double>(i) / static_cast<double>(last); };

  std::vector<GridSample> out;
  auto emit = [&](Vec v) {
    const Vec d = field.rhs(v);
    GridSample g;
    g.state = to_state(v, layout, 0.0, fixed_n);
    g.derivative.dx.assign(d.begin(), d.begin() + layout.strategy_coords());
    if (layout.feedback) g.derivative.dn = d[layout.n_index()];
    out.push_back(std::move(g));
  };

  const std::size_t n_count = layout.feedback ? resolution : 1;
  if (layout.kind == GameKind::PD) {
    for (std::size_t i = 0; i <= last; ++i)
      for (std::size_t k = 0; k < n_count; ++k) {
        Vec v{coord(i)};
        if (layout.feedback) v.push_back(coord(k));
        emit(std::move(v));
      }
  } else {
    for (std::size_t i = 0; i <= last; ++i)
      for (std::size_t j = 0; i + j <= last; ++j)
        for (std::size_t k = 0; k < n_count; ++k) {
          Vec v{coord(i), coord(j)};
          if (layout.feedback) v.push_back(coord(k));
          emit(std::move(v));
        }
  }
  return out;
}

}  // namespace fevo
