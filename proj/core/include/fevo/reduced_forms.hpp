#pragma once

// Closed-form reduced fields, evaluated literally as derived by hand for
// specific game/protocol combinations. They exist to cross-check the
// general fields; simulation always uses general_field().

#include <optional>
#include <string_view>

#include "fevo/vector_field.hpp"

namespace fevo {

enum class ReducedForm {
  // PD replicator, no feedback: dx = -x(1-x)(dTR x + dPS (1-x)).
  PdReplicator,
  // PD pairwise, no feedback: dx = -x(dTR x + dPS (1-x)).
  PdPairwise,
  // PD pairwise with feedback, single smooth expression:
  //   eps dx = (1-x)[dPS + (dTR - dPS) x](1 - 2n).
  // Matches the protocol only while r1 >= r2, i.e. n <= 1/2.
  PdPairwiseFeedbackSmooth,
  // OPD replicator with feedback, expanded per strategy:
  //   eps dx_i = x_i(1-x_i) r_i - x_i x_j r_j - x_i L (1 - x_i - x_j).
  OpdReplicatorFeedback,
  // OPD pairwise with feedback, closed form in the payoff gaps:
  //   eps dx1 = (x2 - 3n x1)(dTR x1 + dPS x2) + dTL x1 x3 + dPL x1 x2
  //   eps dx2 = (x1 - 2n x2)(dTR x1 + dPS x2) + x3((dRL + dTR n) x1 + dPS n x2) + dTL x1 x2
  OpdPairwiseFeedbackClosedForm,
};

std::string_view to_string(ReducedForm f);

// Throws FormMismatch when the form does not fit the game kind / feedback
// mode; validates the state like the general fields do.
StateDerivative reduced_field_oracle(ReducedForm form, const GameSpec& spec,
                                     const std::optional<EnvCoupling>& coupling,
                                     const PopulationState& s);

// The same closed form as a VectorField (no domain checks). The smooth PD
// forms carry analytic Jacobians.
VectorField oracle_field(ReducedForm form, const GameSpec& spec,
                         const std::optional<EnvCoupling>& coupling);

}  // namespace fevo
