#pragma once

// Right-hand sides of the replicator and pairwise-comparison dynamics,
// with and without game-environment feedback.
//
// Public states use reduced coordinates: PD carries the cooperator share x,
// OPD carries (x1, x2) with the abstainer share x3 = 1 - x1 - x2 implied.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "fevo/game_model.hpp"

namespace fevo {

struct PopulationState {
  std::vector<double> x;  // length 1 (PD) or 2 (OPD)
  double n = 1.0;         // environment level
  double t = 0.0;

  bool operator==(const PopulationState&) const = default;
};

// Throws DomainError unless the state is admissible for `kind`: x has the
// right length, 0 <= x_i <= 1, x1 + x2 <= 1 (OPD) and 0 <= n <= 1, all
// within kSimplexTolerance.
void validate_state(const PopulationState& s, GameKind kind);

enum class Protocol { Replicator, PairwiseComparison };

// How the pairwise switching rate phi_ij from strategy i to j is formed:
//  FitnessDifference:    phi_ij = [r_j - r_i]_+
//  EntrywiseExpectation: phi_ij = sum_k [a_jk - a_ik]_+ x_k
// The two agree whenever all entrywise differences between two rows share
// a sign, which holds for every PD with T > R and P > S.
enum class ComparisonRule { FitnessDifference, EntrywiseExpectation };

inline constexpr ComparisonRule kDefaultComparisonRule = ComparisonRule::EntrywiseExpectation;

std::string_view to_string(Protocol p);
std::string_view to_string(ComparisonRule r);
Protocol parse_protocol(std::string_view s);
ComparisonRule parse_comparison_rule(std::string_view s);

struct DynamicsConfig {
  Protocol protocol = Protocol::Replicator;
  bool feedback = false;
  ComparisonRule comparison_rule = kDefaultComparisonRule;
};

struct StateDerivative {
  std::vector<double> dx;  // same length as PopulationState::x
  double dn = 0.0;

  bool operator==(const StateDerivative&) const = default;
};

// Without coupling the base matrix A(1) is used and dn = 0. With coupling,
// A(n) is used, strategy rows are divided by epsilon and
// dn = n (1 - n) [(1 + lambda) x1 - 1].
StateDerivative replicator_field(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
                                 const PopulationState& s);

StateDerivative pairwise_field(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
                               const PopulationState& s,
                               ComparisonRule rule = kDefaultComparisonRule);

namespace kernel {

// Full frequency vector (x1, x2[, x3]) and its time derivative. These
// kernels perform no domain checks so that analysis code can evaluate
// fields at out-of-domain points.
using Freq = std::array<double, 3>;

struct Rates {
  Freq dx{};
  double dn = 0.0;
};

// Matrix in force at environment level n (A(1) when there is no coupling).
PayoffMatrix active_matrix(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
                           double n);

double environment_rate(const EnvCoupling& coupling, double x1, double n);

Rates replicator(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
                 const Freq& x, double n);

Rates pairwise(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
               const Freq& x, double n, ComparisonRule rule);

// Switching-rate matrix phi(i, j) for the chosen rule.
std::array<std::array<double, 3>, 3> switching_rates(const PayoffMatrix& a, const Freq& x,
                                                     ComparisonRule rule);

// Smallest |argument| over the positive parts entering the pairwise field
// at (x, n); arguments that vanish identically in n are ignored.
double pairwise_kink_distance(const GameSpec& spec, const std::optional<EnvCoupling>& coupling,
                              const Freq& x, double n, ComparisonRule rule);

}  // namespace kernel

}  // namespace fevo
