#pragma once

// Declarative scenario configs: a flat sectioned key = value text format,
// plus the built-in catalog of worked examples.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fevo/dynamics.hpp"
#include "fevo/integrator.hpp"
#include "fevo/vector_field.hpp"

namespace fevo {

struct Analyses {
  bool fixed_points = false;
  bool jacobians = false;
  bool oscillation = false;
  double oscillation_window = 0.0;         // 0: a third of the horizon
  std::optional<std::size_t> phase_grid;   // points per axis
  std::size_t search_resolution = 11;      // seeds per axis for the Newton search
  double output_interval = 0.0;            // 0: every accepted step

  bool any() const { return fixed_points || jacobians || oscillation || phase_grid.has_value(); }
  bool operator==(const Analyses&) const = default;
};

struct Scenario {
  std::string name;
  GameSpec game;
  Strictness strictness = Strictness::Strict;
  std::optional<EnvCoupling> coupling;
  std::vector<Protocol> protocols{Protocol::Replicator};
  ComparisonRule rule = kDefaultComparisonRule;
  std::vector<PopulationState> initial_conditions;
  IntegratorConfig integrator;
  Analyses analyses;
  std::vector<std::string> warnings;  // e.g. lenient payoff ordering

  Model model(Protocol p) const { return {game, coupling, p, rule}; }
  Layout layout() const { return {game.kind, coupling.has_value()}; }
};

// Checks every nested invariant; throws ValidationError. Fills `warnings`.
void validate_scenario(Scenario& s);

// `origin` is used in messages only. Throws ParseError (with line) or
// ValidationError.
Scenario parse_scenario(std::string_view text, std::string_view origin = "<string>");

// Builtin name or path to a config file. Throws UnknownBuiltin, IoError,
// ParseError or ValidationError.
Scenario load_scenario(std::string_view name_or_path);

std::vector<std::string> builtin_names();
std::string_view builtin_text(std::string_view name);  // throws UnknownBuiltin

// Inverse of parse_scenario up to floating-point formatting (round-trips
// exactly: numbers are written with 17 significant digits).
std::string to_config_text(const Scenario& s);

}  // namespace fevo
