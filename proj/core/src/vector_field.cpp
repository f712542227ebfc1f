#include "fevo/vector_field.hpp"

#include <limits>
#include <sstream>

#include "fevo/error.hpp"

namespace fevo {

Vec to_vector(const PopulationState& s, const Layout& layout) {
  if (s.x.size() != layout.strategy_coords()) throw DimensionMismatch("state/layout mismatch");
  Vec v(s.x.begin(), s.x.end());
  if (layout.feedback) v.push_back(s.n);
  return v;
}

PopulationState to_state(std::span<const double> v, const Layout& layout, double t,
                         double fixed_n) {
  if (v.size() != layout.dim()) throw DimensionMismatch("vector/layout mismatch");
  PopulationState s;
  s.x.assign(v.begin(), v.begin() + layout.strategy_coords());
  s.n = layout.feedback ? v[layout.n_index()] : fixed_n;
  s.t = t;
  return s;
}

std::string describe(const Model& m) {
  std::ostringstream os;
  os << to_string(m.game.kind) << ' ' << to_string(m.protocol);
  if (m.protocol == Protocol::PairwiseComparison) os << " (" << to_string(m.rule) << " rule)";
  if (m.coupling) {
    os << " with feedback (lambda=" << m.coupling->lambda << ", epsilon=" << m.coupling->epsilon
       << ')';
  } else {
    os << " without feedback";
  }
  return os.str();
}

double VectorField::kink(std::span<const double> v) const {
  return kink_distance ? kink_distance(v) : std::numeric_limits<double>::infinity();
}

namespace {

kernel::Freq reduced_to_freq(std::span<const double> v, GameKind kind) {
  if (kind == GameKind::PD) return {v[0], 1.0 - v[0], 0.0};
  return {v[0], v[1], 1.0 - v[0] - v[1]};
}

double pos(double z) { return z > 0.0 ? z : 0.0; }

// Jacobian rows for dn = n(1-n)[(1+lambda)x1 - 1].
void fill_environment_row(Matrix& j, const Layout& layout, const EnvCoupling& c, double x1,
                          double n) {
  const std::size_t r = layout.n_index();
  j(r, 0) = n * (1.0 - n) * (1.0 + c.lambda);
  j(r, r) = (1.0 - 2.0 * n) * ((1.0 + c.lambda) * x1 - 1.0);
}

Matrix pd_jacobian(const Model& m, std::span<const double> v) {
  const Layout layout = m.layout();
  const double x = v[0];
  const double n = layout.feedback ? v[1] : 1.0;
  const double eps = m.coupling ? m.coupling->epsilon : 1.0;
  const PayoffMatrix a = kernel::active_matrix(m.game, m.coupling, n);
  const PayoffMatrix s = detail::payoff_matrix_slope(m.game);

  // d = r1 - r2 and its partial derivatives.
  const double u1 = a(0, 0) - a(1, 0), u2 = a(0, 1) - a(1, 1);
  const double du1 = s(0, 0) - s(1, 0), du2 = s(0, 1) - s(1, 1);
  const double d = u1 * x + u2 * (1.0 - x);
  const double d_x = u1 - u2;
  const double d_n = du1 * x + du2 * (1.0 - x);

  double f_x = 0.0, f_n = 0.0;
  if (m.protocol == Protocol::Replicator) {
    f_x = (1.0 - 2.0 * x) * d + x * (1.0 - x) * d_x;
    f_n = x * (1.0 - x) * d_n;
  } else if (m.rule == ComparisonRule::FitnessDifference) {
    // dx = (1-x) d on d >= 0 and x d on d < 0.
    if (d >= 0.0) {
      f_x = -d + (1.0 - x) * d_x;
      f_n = (1.0 - x) * d_n;
    } else {
      f_x = d + x * d_x;
      f_n = x * d_n;
    }
  } else {
    // phi_21 = p1 x + p2 (1-x), phi_12 = m1 x + m2 (1-x) with p = [u]_+, m = [-u]_+.
    const double p1 = pos(u1), p2 = pos(u2), m1 = pos(-u1), m2 = pos(-u2);
    // At u = 0 take the limit from below in n, as the d >= 0 tie above does.
    auto dpos = [](double u, double du) { return (u > 0.0 || (u == 0.0 && du < 0.0)) ? du : 0.0; };
    const double dp1 = dpos(u1, du1), dp2 = dpos(u2, du2);
    const double dm1 = dpos(-u1, -du1), dm2 = dpos(-u2, -du2);
    const double phi21 = p1 * x + p2 * (1.0 - x);
    const double phi12 = m1 * x + m2 * (1.0 - x);
    f_x = -phi21 + (1.0 - x) * (p1 - p2) - phi12 - x * (m1 - m2);
    f_n = (1.0 - x) * (dp1 * x + dp2 * (1.0 - x)) - x * (dm1 * x + dm2 * (1.0 - x));
  }

  Matrix j(layout.dim(), layout.dim());
  j(0, 0) = f_x / eps;
  if (layout.feedback) {
    j(0, 1) = f_n / eps;
    fill_environment_row(j, layout, *m.coupling, x, n);
  }
  return j;
}

Matrix opd_replicator_jacobian(const Model& m, std::span<const double> v) {
  const Layout layout = m.layout();
  const double n = layout.feedback ? v[2] : 1.0;
  const double eps = m.coupling ? m.coupling->epsilon : 1.0;
  const kernel::Freq x = reduced_to_freq(v, GameKind::OPD);
  const PayoffMatrix a = kernel::active_matrix(m.game, m.coupling, n);
  const PayoffMatrix s = detail::payoff_matrix_slope(m.game);
  const kernel::Freq r = detail::fitness_unchecked(a, x);
  const kernel::Freq rn = detail::fitness_unchecked(s, x);  // dr/dn
  const double mean = x[0] * r[0] + x[1] * r[1] + x[2] * r[2];
  const double mean_n = x[0] * rn[0] + x[1] * rn[1] + x[2] * rn[2];

  // Moving along x_m (m = 1, 2) implicitly moves x3 the opposite way.
  double dr[3][2], dmean[2];
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < 3; ++i) dr[i][c] = a(i, c) - a(i, 2);
    dmean[c] = r[c] - r[2] + x[0] * dr[0][c] + x[1] * dr[1][c] + x[2] * dr[2][c];
  }

  Matrix j(layout.dim(), layout.dim());
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t c = 0; c < 2; ++c) {
      j(i, c) = ((i == c ? r[i] - mean : 0.0) + x[i] * (dr[i][c] - dmean[c])) / eps;
    }
    if (layout.feedback) j(i, 2) = x[i] * (rn[i] - mean_n) / eps;
  }
  if (layout.feedback) fill_environment_row(j, layout, *m.coupling, x[0], n);
  return j;
}

}  // namespace

VectorField general_field(const Model& model) {
  validate_spec(model.game, Strictness::Lenient);
  if (model.coupling) validate_coupling(*model.coupling);

  VectorField f;
  f.layout = model.layout();
  f.name = describe(model);
  const Layout layout = f.layout;
  const Model m = model;

  auto eval = [m](const kernel::Freq& x, double n) {
    return m.protocol == Protocol::Replicator
               ? kernel::replicator(m.game, m.coupling, x, n)
               : kernel::pairwise(m.game, m.coupling, x, n, m.rule);
  };

  f.rhs = [layout, eval](std::span<const double> v) {
    if (v.size() != layout.dim()) throw DimensionMismatch("field: wrong state dimension");
    const double n = layout.feedback ? v[layout.n_index()] : 1.0;
    const kernel::Rates r = eval(reduced_to_freq(v, layout.kind), n);
    Vec out(layout.dim());
    for (std::size_t i = 0; i < layout.strategy_coords(); ++i) out[i] = r.dx[i];
    if (layout.feedback) out[layout.n_index()] = r.dn;
    return out;
  };

  if (layout.kind == GameKind::OPD) {
    f.embedded_rhs = [layout, eval](std::span<const double> v) {
      if (v.size() != layout.dim() + 1) throw DimensionMismatch("field: wrong embedded dimension");
      const double n = layout.feedback ? v[3] : 1.0;
      const kernel::Rates r = eval({v[0], v[1], v[2]}, n);
      Vec out{r.dx[0], r.dx[1], r.dx[2]};
      if (layout.feedback) out.push_back(r.dn);
      return out;
    };
  }

  if (m.protocol == Protocol::PairwiseComparison) {
    f.kink_distance = [layout, m](std::span<const double> v) {
      const double n = layout.feedback ? v[layout.n_index()] : 1.0;
      return kernel::pairwise_kink_distance(m.game, m.coupling, reduced_to_freq(v, layout.kind), n,
                                            m.rule);
    };
  }

  if (layout.kind == GameKind::PD) {
    f.analytic_jacobian = [m](std::span<const double> v) { return pd_jacobian(m, v); };
  } else if (m.protocol == Protocol::Replicator) {
    f.analytic_jacobian = [m](std::span<const double> v) { return opd_replicator_jacobian(m, v); };
  }
  return f;
}

}  // namespace fevo
