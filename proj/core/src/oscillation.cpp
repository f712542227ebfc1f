#include "fevo/oscillation.hpp"

#include <cmath>
#include <vector>

#include "fevo/error.hpp"

namespace fevo {

std::string_view to_string(AmplitudeTrend t) {
  switch (t) {
    case AmplitudeTrend::Sustained: return "sustained";
    case AmplitudeTrend::Decaying: return "decaying";
    case AmplitudeTrend::Growing: return "growing";
  }
  return "?";
}

namespace {

struct Extremum {
  double t, v;
  bool max;
};

double component_of(const PopulationState& s, const Layout& layout, std::size_t c) {
  if (c < layout.strategy_coords()) return s.x[c];
  return s.n;
}

}  // namespace

OscillationReport detect_oscillation(const Trajectory& traj, std::size_t component, double window,
                                     OscillationOptions opts) {
  if (!(window > 0.0)) throw ValidationError("oscillation window must be positive");
  if (component > traj.layout.strategy_coords()) throw DimensionMismatch("oscillation: component out of range");
  if (traj.samples.size() < 3) throw InsufficientData("trajectory too short for oscillation analysis");
  const double t0 = traj.samples.front().t, t1 = traj.samples.back().t;
  if (t1 - t0 < 2.0 * window) throw InsufficientData("trajectory spans less than twice the window");

  std::vector<double> ts, vs;
  for (const auto& s : traj.samples) {
    if (s.t < t1 - window) continue;
    ts.push_back(s.t);
    vs.push_back(component_of(s, traj.layout, component));
  }

  const double h = opts.hysteresis;
  std::vector<Extremum> ext;
  auto confirm = [&](std::size_t i, bool is_max) {
    double t = ts[i], v = vs[i];
    if (i > 0 && i + 1 < ts.size()) {
      // vertex of the parabola through the three neighbouring samples
      const double ta = ts[i - 1] - ts[i], tc = ts[i + 1] - ts[i];
      const double da = vs[i - 1] - vs[i], dc = vs[i + 1] - vs[i];
      const double denom = ta * tc * (ta - tc);
      if (denom != 0.0) {
        const double a = (da * tc - dc * ta) / denom;
        const double b = (dc * ta * ta - da * tc * tc) / denom;
        if (a != 0.0) {
          const double u = -b / (2.0 * a);
          if (u > ta && u < tc) {
            t += u;
            v += b * u + a * u * u;
          }
        }
      }
    }
    ext.push_back({t, v, is_max});
  };

  int dir = 0;
  std::size_t cand = 0;
  for (std::size_t i = 1; i < vs.size(); ++i) {
    if (dir == 0) {
      if (vs[i] > vs[0] + h) dir = 1;
      else if (vs[i] < vs[0] - h) dir = -1;
      else continue;
      cand = i;
      // the running extreme since the start is the better candidate
      for (std::size_t k = 0; k <= i; ++k)
        if ((dir > 0 && vs[k] > vs[cand]) || (dir < 0 && vs[k] < vs[cand])) cand = k;
      continue;
    }
    if (dir > 0) {
      if (vs[i] > vs[cand]) cand = i;
      else if (vs[i] < vs[cand] - h) {
        confirm(cand, true);
        dir = -1;
        cand = i;
      }
    } else {
      if (vs[i] < vs[cand]) cand = i;
      else if (vs[i] > vs[cand] + h) {
        confirm(cand, false);
        dir = 1;
        cand = i;
      }
    }
  }

  OscillationReport rep;
  rep.extrema_count = ext.size();
  rep.oscillating = ext.size() >= 4;

  double spacing = 0.0;
  std::size_t gaps = 0;
  for (std::size_t i = 2; i < ext.size(); ++i) {
    spacing += ext[i].t - ext[i - 2].t;
    ++gaps;
  }
  if (gaps > 0) rep.estimated_period = spacing / static_cast<double>(gaps);

  std::vector<double> at, amp;
  for (std::size_t i = 1; i < ext.size(); ++i) {
    at.push_back(0.5 * (ext[i].t + ext[i - 1].t));
    amp.push_back(0.5 * std::abs(ext[i].v - ext[i - 1].v));
  }
  if (amp.size() < 2) return rep;

  const double m = static_cast<double>(amp.size());
  double st = 0.0, sa = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    st += at[i];
    sa += amp[i];
  }
  const double mt = st / m, ma = sa / m;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    sxy += (at[i] - mt) * (amp[i] - ma);
    sxx += (at[i] - mt) * (at[i] - mt);
  }
  rep.mean_amplitude = ma;
  rep.amplitude_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  if (std::abs(rep.amplitude_slope) * window < opts.sustained_fraction * ma) {
    rep.amplitude_trend = AmplitudeTrend::Sustained;
  } else {
    rep.amplitude_trend = rep.amplitude_slope < 0.0 ? AmplitudeTrend::Decaying : AmplitudeTrend::Growing;
  }
  if (rep.estimated_period && ma > 0.0) {
    rep.drift_per_period = std::abs(rep.amplitude_slope) * *rep.estimated_period / ma;
  }
  return rep;
}

}  // namespace fevo
