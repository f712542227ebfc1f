#pragma once

// Payoff structures for the prisoner's dilemma (PD) and the optional
// prisoner's dilemma (OPD), the environment-dependent payoff matrix A(n)
// and fitness evaluation.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fevo {

enum class GameKind { PD, OPD };

std::string_view to_string(GameKind k);
GameKind parse_game_kind(std::string_view s);

// Payoffs of the symmetric two-player game. Strategy order is
// cooperate, defect[, abstain]. `L` (the loner's payoff) is present iff
// kind == OPD.
struct GameSpec {
  GameKind kind = GameKind::PD;
  double R = 0.0;  // reward
  double S = 0.0;  // sucker
  double T = 0.0;  // temptation
  double P = 0.0;  // punishment
  std::optional<double> L;

  static GameSpec pd(double R, double S, double T, double P);
  static GameSpec opd(double R, double S, double T, double P, double L);

  std::size_t strategies() const { return kind == GameKind::PD ? 2 : 3; }
  double loner() const;  // throws ValidationError when absent

  bool operator==(const GameSpec&) const = default;
};

// Payoff gaps. The L-based gaps are only meaningful for OPD and are zero
// for PD.
struct Deltas {
  double TR = 0.0;  // T - R
  double PS = 0.0;  // P - S
  double TL = 0.0;  // T - L
  double RL = 0.0;  // R - L
  double PL = 0.0;  // P - L
};

Deltas deltas(const GameSpec& spec);

enum class Strictness { Strict, Lenient };

struct ValidatedSpec {
  GameSpec spec;
  Deltas deltas;
  // Ordering violations that were tolerated under Strictness::Lenient.
  std::vector<std::string> warnings;
};

// Checks finiteness and the ordering T > R > P > S (PD) or
// T > R > L > P > S (OPD). Under Strict an OrderingViolation naming the
// first violated inequality is thrown; under Lenient violations become
// warnings.
ValidatedSpec validate_spec(const GameSpec& spec, Strictness strictness);

// Dense 2x2 or 3x3 payoff matrix, row = focal strategy.
class PayoffMatrix {
 public:
  PayoffMatrix() = default;
  explicit PayoffMatrix(std::size_t dim);
  PayoffMatrix(std::size_t dim, std::initializer_list<double> row_major);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * 3 + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * 3 + j]; }

  bool operator==(const PayoffMatrix&) const = default;

 private:
  std::size_t dim_ = 0;
  std::array<double, 9> a_{};
};

// [[R,S],[T,P]] (plus the constant abstain row/column for OPD).
PayoffMatrix base_matrix(const GameSpec& spec);
// Rows swapped: [[T,P],[R,S]] (plus abstain row/column for OPD).
PayoffMatrix flipped_matrix(const GameSpec& spec);

// A(n) = (1-n) * flipped + n * base. Entries involving abstention are L
// for every n. Throws DomainError unless 0 <= n <= 1.
PayoffMatrix payoff_matrix_at(const GameSpec& spec, double n);

struct EnvCoupling {
  double lambda = 1.0;   // enhancement-to-degradation ratio
  double epsilon = 1.0;  // time-scale separation; divides strategy rows

  bool operator==(const EnvCoupling&) const = default;
};

// Throws ValidationError unless lambda > 0 and epsilon > 0 (both finite).
void validate_coupling(const EnvCoupling& coupling);

// r_i = (A x)_i. `x` must have matrix.dim() entries on the probability
// simplex; sums within 1e-9 of one are renormalised, anything else throws
// DomainError. DimensionMismatch on size mismatch.
std::vector<double> fitness(const PayoffMatrix& matrix, std::span<const double> x);

inline constexpr double kSimplexTolerance = 1e-9;

namespace detail {

// A(n) without range checks; analysis routines evaluate fields at
// out-of-domain catalog points (e.g. n = 1.5).
PayoffMatrix payoff_matrix_unchecked(const GameSpec& spec, double n);

// d A(n) / d n.
PayoffMatrix payoff_matrix_slope(const GameSpec& spec);

// (A x)_i for a full frequency vector (no simplex checks).
std::array<double, 3> fitness_unchecked(const PayoffMatrix& a, const std::array<double, 3>& x);

}  // namespace detail

}  // namespace fevo
