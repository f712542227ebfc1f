#pragma once

// A concrete dynamical system (game + coupling + protocol) and its vector
// field over flat coordinate vectors, as consumed by the integrator and the
// equilibrium analysis.

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "fevo/dynamics.hpp"
#include "fevo/linalg.hpp"

namespace fevo {

// Reduced coordinates: the strategy coordinates (x for PD, x1 x2 for OPD)
// followed by n when feedback is on. Dimension is 1..3.
struct Layout {
  GameKind kind = GameKind::PD;
  bool feedback = false;

  std::size_t strategy_coords() const { return kind == GameKind::PD ? 1 : 2; }
  std::size_t dim() const { return strategy_coords() + (feedback ? 1 : 0); }
  std::size_t n_index() const { return strategy_coords(); }

  bool operator==(const Layout&) const = default;
};

Vec to_vector(const PopulationState& s, const Layout& layout);
// `fixed_n` fills PopulationState::n when the layout has no n coordinate.
PopulationState to_state(std::span<const double> v, const Layout& layout, double t,
                         double fixed_n = 1.0);

struct Model {
  GameSpec game;
  std::optional<EnvCoupling> coupling;  // feedback is on iff engaged
  Protocol protocol = Protocol::Replicator;
  ComparisonRule rule = kDefaultComparisonRule;

  Layout layout() const { return {game.kind, coupling.has_value()}; }
  DynamicsConfig config() const { return {protocol, coupling.has_value(), rule}; }
};

std::string describe(const Model& m);

class VectorField {
 public:
  using Rhs = std::function<Vec(std::span<const double>)>;
  using Jacobian = std::function<Matrix(std::span<const double>)>;
  using Kink = std::function<double(std::span<const double>)>;

  Layout layout;
  std::string name;
  Rhs rhs;                    // reduced coordinates, no domain checks
  Jacobian analytic_jacobian; // empty when no closed form is available
  Kink kink_distance;         // empty for smooth fields
  // OPD only: same dynamics over the embedding (x1, x2, x3[, n]) with x3
  // explicit, which keeps every face x_i = 0 exactly invariant under
  // integration. Empty for PD.
  Rhs embedded_rhs;

  Vec operator()(std::span<const double> v) const { return rhs(v); }
  bool has_analytic_jacobian() const { return static_cast<bool>(analytic_jacobian); }
  // +inf for smooth fields.
  double kink(std::span<const double> v) const;
};

// The protocol-defined field (authoritative for simulation).
VectorField general_field(const Model& model);

}  // namespace fevo
