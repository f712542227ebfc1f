#include "fevo/reduced_forms.hpp"

#include <string>

#include "fevo/error.hpp"

namespace fevo {

std::string_view to_string(ReducedForm f) {
  switch (f) {
    case ReducedForm::PdReplicator: return "pd-replicator";
    case ReducedForm::PdPairwise: return "pd-pairwise";
    case ReducedForm::PdPairwiseFeedbackSmooth: return "pd-pairwise-feedback-smooth";
    case ReducedForm::OpdReplicatorFeedback: return "opd-replicator-feedback";
    case ReducedForm::OpdPairwiseFeedbackClosedForm: return "opd-pairwise-feedback-closed-form";
  }
  return "?";
}

namespace {

void check_form(ReducedForm form, const GameSpec& spec, const std::optional<EnvCoupling>& c) {
  GameKind kind = GameKind::PD;
  bool feedback = false;
  switch (form) {
    case ReducedForm::PdReplicator:
    case ReducedForm::PdPairwise: break;
    case ReducedForm::PdPairwiseFeedbackSmooth: feedback = true; break;
    case ReducedForm::OpdReplicatorFeedback:
    case ReducedForm::OpdPairwiseFeedbackClosedForm:
      kind = GameKind::OPD;
      feedback = true;
      break;
  }
  if (spec.kind != kind || c.has_value() != feedback) {
    throw FormMismatch(std::string("form ") + std::string(to_string(form)) + " needs " +
                       std::string(to_string(kind)) + (feedback ? " with" : " without") +
                       " feedback");
  }
  if (c) validate_coupling(*c);
}

Vec evaluate(ReducedForm form, const GameSpec& spec, const std::optional<EnvCoupling>& c,
             std::span<const double> v) {
  const Deltas d = deltas(spec);
  switch (form) {
    case ReducedForm::PdReplicator: {
      const double x = v[0];
      return {-x * (1.0 - x) * (d.TR * x + d.PS * (1.0 - x))};
    }
    case ReducedForm::PdPairwise: {
      const double x = v[0];
      return {-x * (d.TR * x + d.PS * (1.0 - x))};
    }
    case ReducedForm::PdPairwiseFeedbackSmooth: {
      const double x = v[0], n = v[1];
      return {(1.0 - x) * (d.PS + (d.TR - d.PS) * x) * (1.0 - 2.0 * n) / c->epsilon,
              kernel::environment_rate(*c, x, n)};
    }
    case ReducedForm::OpdReplicatorFeedback: {
      const double x1 = v[0], x2 = v[1], n = v[2];
      const double L = spec.loner();
      const PayoffMatrix a = detail::payoff_matrix_unchecked(spec, n);
      const auto r = detail::fitness_unchecked(a, {x1, x2, 1.0 - x1 - x2});
      const double e = c->epsilon;
      return {(x1 * (1.0 - x1) * r[0] - x1 * x2 * r[1] - x1 * L * (1.0 - x1 - x2)) / e,
              (x2 * (1.0 - x2) * r[1] - x1 * x2 * r[0] - x2 * L * (1.0 - x1 - x2)) / e,
              kernel::environment_rate(*c, x1, n)};
    }
    case ReducedForm::OpdPairwiseFeedbackClosedForm: {
      const double x1 = v[0], x2 = v[1], n = v[2];
      const double x3 = 1.0 - x1 - x2;
      const double common = d.TR * x1 + d.PS * x2;
      const double e = c->epsilon;
      return {((x2 - 3.0 * n * x1) * common + d.TL * x1 * x3 + d.PL * x1 * x2) / e,
              ((x1 - 2.0 * n * x2) * common + x3 * ((d.RL + d.TR * n) * x1 + d.PS * n * x2) +
               d.TL * x1 * x2) /
                  e,
              kernel::environment_rate(*c, x1, n)};
    }
  }
  return {};
}

}  // namespace

StateDerivative reduced_field_oracle(ReducedForm form, const GameSpec& spec,
                                     const std::optional<EnvCoupling>& coupling,
                                     const PopulationState& s) {
  check_form(form, spec, coupling);
  validate_state(s, spec.kind);
  const Layout layout{spec.kind, coupling.has_value()};
  const Vec out = evaluate(form, spec, coupling, to_vector(s, layout));
  StateDerivative d;
  d.dx.assign(out.begin(), out.begin() + layout.strategy_coords());
  if (layout.feedback) d.dn = out[layout.n_index()];
  return d;
}

VectorField oracle_field(ReducedForm form, const GameSpec& spec,
                         const std::optional<EnvCoupling>& coupling) {
  check_form(form, spec, coupling);
  VectorField f;
  f.layout = Layout{spec.kind, coupling.has_value()};
  f.name = std::string("closed form ") + std::string(to_string(form));
  f.rhs = [form, spec, coupling](std::span<const double> v) {
    return evaluate(form, spec, coupling, v);
  };
  const Deltas d = deltas(spec);
  switch (form) {
    case ReducedForm::PdReplicator:
      f.analytic_jacobian = [d](std::span<const double> v) {
        const double x = v[0];
        const double g = d.TR * x + d.PS * (1.0 - x);
        return Matrix(1, 1, {-((1.0 - 2.0 * x) * g + x * (1.0 - x) * (d.TR - d.PS))});
      };
      break;
    case ReducedForm::PdPairwise:
      f.analytic_jacobian = [d](std::span<const double> v) {
        const double x = v[0];
        const double g = d.TR * x + d.PS * (1.0 - x);
        return Matrix(1, 1, {-(g + x * (d.TR - d.PS))});
      };
      break;
    case ReducedForm::PdPairwiseFeedbackSmooth: {
      const EnvCoupling c = *coupling;
      f.analytic_jacobian = [d, c](std::span<const double> v) {
        const double x = v[0], n = v[1];
        const double g = d.PS + (d.TR - d.PS) * x;
        const double lam1 = 1.0 + c.lambda;
        return Matrix(2, 2,
                      {(1.0 - 2.0 * n) * (-g + (1.0 - x) * (d.TR - d.PS)) / c.epsilon,
                       -2.0 * (1.0 - x) * g / c.epsilon, n * (1.0 - n) * lam1,
                       (1.0 - 2.0 * n) * (lam1 * x - 1.0)});
      };
      break;
    }
    case ReducedForm::OpdReplicatorFeedback:
    case ReducedForm::OpdPairwiseFeedbackClosedForm: break;
  }
  return f;
}

}  // namespace fevo
