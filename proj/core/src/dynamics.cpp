#include "fevo/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fevo/error.hpp"

namespace fevo {

namespace {

double pos(double z) { return z > 0.0 ? z : 0.0; }

kernel::Freq full_frequencies(const PopulationState& s, GameKind kind) {
  if (kind == GameKind::PD) return {s.x[0], 1.0 - s.x[0], 0.0};
  return {s.x[0], s.x[1], 1.0 - s.x[0] - s.x[1]};
}

StateDerivative to_reduced(const kernel::Rates& r, GameKind kind) {
  StateDerivative d;
  d.dx.assign(r.dx.begin(), r.dx.begin() + (kind == GameKind::PD ? 1 : 2));
  d.dn = r.dn;
  return d;
}

}  // namespace

void validate_state(const PopulationState& s, GameKind kind) {
  const std::size_t want = kind == GameKind::PD ? 1 : 2;
  if (s.x.size() != want) {
    throw DomainError("state for " + std::string(to_string(kind)) + " needs " +
                      std::to_string(want) + " frequency coordinate(s), got " +
                      std::to_string(s.x.size()));
  }
  double sum = 0.0;
  for (double v : s.x) {
    if (!std::isfinite(v) || v < -kSimplexTolerance || v > 1.0 + kSimplexTolerance) {
      throw DomainError("strategy frequency " + std::to_string(v) + " outside [0,1]");
    }
    sum += v;
  }
  if (kind == GameKind::OPD && sum > 1.0 + kSimplexTolerance) {
    throw DomainError("simplex constraint violated: x1 + x2 = " + std::to_string(sum) + " > 1");
  }
  if (!std::isfinite(s.n) || s.n < -kSimplexTolerance || s.n > 1.0 + kSimplexTolerance) {
    throw DomainError("environment level n = " + std::to_string(s.n) + " outside [0,1]");
  }
}

std::string_view to_string(Protocol p) {
  return p == Protocol::Replicator ? "replicator" : "pairwise";
}

std::string_view to_string(ComparisonRule r) {
  return r == ComparisonRule::FitnessDifference ? "fitness" : "entrywise";
}

Protocol parse_protocol(std::string_view s) {
  if (s == "replicator" || s == "rd" || s == "RD") return Protocol::Replicator;
  if (s == "pairwise" || s == "pcd" || s == "PCD") return Protocol::PairwiseComparison;
  throw ValidationError("unknown protocol '" + std::string(s) + "' (expected replicator|pairwise)");
}

ComparisonRule parse_comparison_rule(std::string_view s) {
  if (s == "fitness") return ComparisonRule::FitnessDifference;
  if (s == "entrywise") return ComparisonRule::EntrywiseExpectation;
  throw ValidationError("unknown comparison rule '" + std::string(s) + "' (expected fitness|entrywise)");
}

StateDerivative replicator_field(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
                                 const PopulationState& s) {
  validate_state(s, spec.kind);
  return to_reduced(kernel::replicator(spec, coupling, full_frequencies(s, spec.kind), s.n),
                    spec.kind);
}

StateDerivative pairwise_field(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
                               const PopulationState& s, ComparisonRule rule) {
  validate_state(s, spec.kind);
  return to_reduced(kernel::pairwise(spec, coupling, full_frequencies(s, spec.kind), s.n, rule),
                    spec.kind);
}

namespace kernel {

PayoffMatrix active_matrix(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
                           double n) {
  return coupling ? detail::payoff_matrix_unchecked(spec, n) : base_matrix(spec);
}

double environment_rate(const EnvCoupling& coupling, double x1, double n) {
  return n * (1.0 - n) * ((1.0 + coupling.lambda) * x1 - 1.0);
}

Rates replicator(const GameSpec& spec, const std::optional<EnvCoupling>& coupling, const Freq& x,
                 double n) {
  const PayoffMatrix a = active_matrix(spec, coupling, n);
  const Freq r = detail::fitness_unchecked(a, x);
  const double eps = coupling ? coupling->epsilon : 1.0;
  Rates out;
  if (spec.kind == GameKind::PD) {
    out.dx[0] = x[0] * x[1] * (r[0] - r[1]) / eps;
    out.dx[1] = -out.dx[0];
  } else {
    const double mean = x[0] * r[0] + x[1] * r[1] + x[2] * r[2];
    for (std::size_t i = 0; i < 3; ++i) out.dx[i] = x[i] * (r[i] - mean) / eps;
  }
  if (coupling) out.dn = environment_rate(*coupling, x[0], n);
  return out;
}

std::array<std::array<double, 3>, 3> switching_rates(const PayoffMatrix& a, const Freq& x,
                                                     ComparisonRule rule) {
  const std::size_t k = a.dim();
  std::array<std::array<double, 3>, 3> phi{};
  if (rule == ComparisonRule::FitnessDifference) {
    const Freq r = detail::fitness_unchecked(a, x);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (i != j) phi[i][j] = pos(r[j] - r[i]);
  } else {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        double s = 0.0;
        for (std::size_t c = 0; c < k; ++c) s += pos(a(j, c) - a(i, c)) * x[c];
        phi[i][j] = s;
      }
  }
  return phi;
}

Rates pairwise(const GameSpec& spec, const std::optional<EnvCoupling>& coupling, const Freq& x,
               double n, ComparisonRule rule) {
  const PayoffMatrix a = active_matrix(spec, coupling, n);
  const auto phi = switching_rates(a, x, rule);
  const std::size_t k = a.dim();
  const double eps = coupling ? coupling->epsilon : 1.0;
  Rates out;
  for (std::size_t i = 0; i < k; ++i) {
    double inflow = 0.0, outrate = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      inflow += x[j] * phi[j][i];
      outrate += phi[i][j];
    }
    out.dx[i] = (inflow - x[i] * outrate) / eps;
  }
  if (coupling) out.dn = environment_rate(*coupling, x[0], n);
  return out;
}

double pairwise_kink_distance(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
                              const Freq& x, double n, ComparisonRule rule) {
  const PayoffMatrix a = active_matrix(spec, coupling, n);
  const std::size_t k = a.dim();
  double best = std::numeric_limits<double>::infinity();
  if (rule == ComparisonRule::FitnessDifference) {
    const Freq r = detail::fitness_unchecked(a, x);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) best = std::min(best, std::abs(r[j] - r[i]));
    return best;
  }
  // Entrywise arguments depend on n only; skip those that vanish for every n.
  const PayoffMatrix lo = base_matrix(spec);
  const PayoffMatrix hi = flipped_matrix(spec);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      for (std::size_t c = 0; c < k; ++c) {
        const bool identically_zero =
            lo(j, c) == lo(i, c) && (!coupling || hi(j, c) == hi(i, c));
        if (identically_zero) continue;
        best = std::min(best, std::abs(a(j, c) - a(i, c)));
      }
  return best;
}

}  // namespace kernel

}  // namespace fevo
