#include "fevo/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fevo/error.hpp"

namespace fevo {

std::string_view to_string(StabilityClass c) {
  switch (c) {
    case StabilityClass::AsymptoticallyStable: return "asymptotically-stable";
    case StabilityClass::Unstable: return "unstable";
    case StabilityClass::NeutralCenter: return "linear-center";
    case StabilityClass::Marginal: return "marginal";
    case StabilityClass::Undetermined: return "undetermined";
  }
  return "?";
}

std::string_view to_string(Provenance p) {
  return p == Provenance::Catalog ? "catalog" : "numerical-search";
}

std::string_view to_string(JacobianMode m) {
  return m == JacobianMode::Analytic ? "analytic" : "finite-difference";
}

bool on_kink(const VectorField& field, std::span<const double> point) {
  return field.kink(point) < kKinkThreshold;
}

Matrix jacobian(const VectorField& field, std::span<const double> point, JacobianMode mode) {
  const std::size_t n = field.layout.dim();
  if (point.size() != n) throw DimensionMismatch("jacobian: point has wrong dimension");
  if (mode == JacobianMode::Analytic) {
    if (!field.has_analytic_jacobian()) {
      throw AnalyticUnavailable("no closed-form Jacobian for " + field.name);
    }
    return field.analytic_jacobian(point);
  }
  const bool one_sided = on_kink(field, point);
  const double h = kFiniteDifferenceStep;
  Matrix j(n, n);
  Vec p(point.begin(), point.end());
  const Vec f0 = one_sided ? field.rhs(p) : Vec{};
  for (std::size_t c = 0; c < n; ++c) {
    Vec col(n);
    if (one_sided) {
      p[c] = point[c] + h;
      const Vec f1 = field.rhs(p);
      p[c] = point[c] + 2.0 * h;
      const Vec f2 = field.rhs(p);
      for (std::size_t r = 0; r < n; ++r) col[r] = (-3.0 * f0[r] + 4.0 * f1[r] - f2[r]) / (2.0 * h);
    } else {
      p[c] = point[c] + h;
      const Vec fp = field.rhs(p);
      p[c] = point[c] - h;
      const Vec fm = field.rhs(p);
      for (std::size_t r = 0; r < n; ++r) col[r] = (fp[r] - fm[r]) / (2.0 * h);
    }
    p[c] = point[c];
    for (std::size_t r = 0; r < n; ++r) j(r, c) = col[r];
  }
  return j;
}

Classification classify_eigenvalues(std::span<const std::complex<double>> ev,
                                    StabilityTolerances tol) {
  bool any_pos = false, any_neg = false, all_neg = !ev.empty(), all_flat = !ev.empty();
  bool any_zero = false, any_rotation = false;
  for (const auto& l : ev) {
    const double re = l.real(), im = std::abs(l.imag());
    if (re > tol.re_tol) any_pos = true;
    if (re < -tol.re_tol) any_neg = true;
    if (!(re < -tol.re_tol)) all_neg = false;
    if (std::abs(re) >= tol.re_tol) all_flat = false;
    if (std::abs(re) < tol.re_tol && im < tol.im_tol) any_zero = true;
    if (im > tol.im_tol) any_rotation = true;
  }
  if (any_pos) return {StabilityClass::Unstable, any_neg};
  if (all_neg) return {StabilityClass::AsymptoticallyStable, false};
  if (all_flat && any_rotation && !any_zero) return {StabilityClass::NeutralCenter, false};
  if (any_zero) return {StabilityClass::Marginal, false};
  return {StabilityClass::Undetermined, false};
}

FixedPointReport classify(FixedPointReport report) {
  if (report.eigenvalues.empty()) report.eigenvalues = eigenvalues(report.jacobian);
  const Classification c =
      classify_eigenvalues(report.eigenvalues, StabilityTolerances::for_mode(report.jacobian_mode));
  report.cls = c.cls;
  report.saddle = c.saddle;
  return report;
}

bool in_unit_domain(const Layout& layout, std::span<const double> v, double tol) {
  for (double c : v)
    if (!(c >= -tol && c <= 1.0 + tol)) return false;
  if (layout.kind == GameKind::OPD && v[0] + v[1] > 1.0 + tol) return false;
  return true;
}

namespace {

std::string format_point(std::span<const double> v) {
  std::ostringstream os;
  os.precision(6);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

}  // namespace

FixedPointReport analyze_point(const VectorField& field, std::span<const double> point,
                               Provenance provenance, std::string label) {
  FixedPointReport r;
  r.coordinates.assign(point.begin(), point.end());
  r.point = to_state(point, field.layout, 0.0);
  r.label = label.empty() ? format_point(point) : std::move(label);
  r.provenance = provenance;
  r.residual = norm_inf(field.rhs(point));
  r.in_domain = in_unit_domain(field.layout, point);
  r.nonsmooth = on_kink(field, point);
  r.jacobian_mode = (!r.nonsmooth && field.has_analytic_jacobian()) ? JacobianMode::Analytic
                                                                     : JacobianMode::FiniteDifference;
  r.jacobian = jacobian(field, point, r.jacobian_mode);
  return classify(std::move(r));
}

namespace {

struct Entry {
  std::string label;
  Vec point;
};

std::vector<Entry> catalog_entries(const Model& m) {
  const Deltas d = deltas(m.game);
  const double cross = d.PS / (d.PS - d.TR);  // root of dTR x + dPS (1-x)
  std::vector<Entry> e;
  if (m.game.kind == GameKind::PD) {
    if (!m.coupling) {
      if (m.protocol == Protocol::Replicator) {
        e = {{"all defect", {0.0}}, {"all cooperate", {1.0}}, {"payoff-balance root", {cross}}};
      } else {
        e = {{"all defect", {0.0}},
             {"root dPS/(dPS-dTR)", {cross}},
             {"root 1-dPS/dTR", {1.0 - d.PS / d.TR}}};
      }
    } else {
      const double xi = 1.0 / (m.coupling->lambda + 1.0);
      if (m.protocol == Protocol::Replicator) {
        e = {{"defectors, depleted", {0.0, 0.0}}, {"defectors, replete", {0.0, 1.0}}};
      }
      e.push_back({"cooperators, depleted", {1.0, 0.0}});
      e.push_back({"cooperators, replete", {1.0, 1.0}});
      e.push_back({"payoff balance, depleted", {cross, 0.0}});
      e.push_back({"payoff balance, replete", {cross, 1.0}});
      e.push_back({"interior", {xi, 0.5}});
    }
    return e;
  }

  if (!m.coupling) {
    if (m.protocol == Protocol::Replicator) {
      e = {{"all cooperate", {1.0, 0.0}}, {"all defect", {0.0, 1.0}}, {"all abstain", {0.0, 0.0}}};
    }
    return e;
  }
  const double lam = m.coupling->lambda;
  const double L = m.game.loner();
  const auto& g = m.game;
  const double x1 = 1.0 / (1.0 + lam);
  e = {
      {"all abstain, depleted", {0.0, 0.0, 0.0}},
      {"all cooperate, depleted", {1.0, 0.0, 0.0}},
      {"all defect, depleted", {0.0, 1.0, 0.0}},
      {"all abstain, replete", {0.0, 0.0, 1.0}},
      {"all cooperate, replete", {1.0, 0.0, 1.0}},
      {"all defect, replete", {0.0, 1.0, 1.0}},
      {"C-D balance, depleted", {cross, -d.TR / (d.PS - d.TR), 0.0}},
      {"C-D balance, replete", {cross, -d.TR / (d.PS - d.TR), 1.0}},
      {"no abstainers, interior", {x1, lam / (1.0 + lam), 0.5}},
      {"mixed interior", {x1, -(g.R - 2.0 * L + g.T) / ((g.P - 2.0 * L + g.S) * (1.0 + lam)), 0.5}},
      {"no defectors", {x1, 0.0, (L - g.T) / (g.R - g.T)}},
  };
  return e;
}

}  // namespace

std::vector<FixedPointReport> catalog_fixed_points(const Model& model) {
  return catalog_fixed_points(model, general_field(model));
}

std::vector<FixedPointReport> catalog_fixed_points(const Model& model, const VectorField& target) {
  if (!(target.layout == model.layout())) throw DimensionMismatch("catalog: field/model layout mismatch");
  std::vector<FixedPointReport> out;
  for (const Entry& e : catalog_entries(model)) {
    const bool finite = std::all_of(e.point.begin(), e.point.end(), [](double v) { return std::isfinite(v); });
    if (!finite) {
      FixedPointReport r;
      r.label = e.label;
      r.coordinates = e.point;
      r.rejected = true;
      r.note = "closed form undefined for these payoffs";
      out.push_back(std::move(r));
      continue;
    }
    FixedPointReport r = analyze_point(target, e.point, Provenance::Catalog, e.label);
    if (!(r.residual < kResidualThreshold)) {
      r.rejected = true;
      std::ostringstream os;
      os << "not an equilibrium of " << target.name << " (residual " << r.residual << ")";
      r.note = os.str();
    }
    out.push_back(std::move(r));
  }
  return out;
}

SearchDomain SearchDomain::unit(const Layout& layout) {
  SearchDomain d;
  d.bounds.assign(layout.dim(), {0.0, 1.0});
  d.simplex = layout.kind == GameKind::OPD;
  return d;
}

bool SearchDomain::contains(std::span<const double> v, double tol) const {
  if (v.size() != bounds.size()) return false;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] >= bounds[i].first - tol && v[i] <= bounds[i].second + tol)) return false;
  if (simplex && v.size() >= 2 && v[0] + v[1] > 1.0 + tol) return false;
  return true;
}

namespace {

std::optional<Vec> newton(const VectorField& field, Vec x, int max_iterations) {
  const std::size_t n = x.size();
  Vec f = field.rhs(x);
  double r = norm_inf(f);
  for (int it = 0; it < max_iterations && r > 1e-14; ++it) {
    const Matrix j = jacobian(field, x, JacobianMode::FiniteDifference);
    Vec rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -f[i];
    std::optional<Vec> step = solve(j, rhs);
    if (!step) {
      // Regularised normal equations for (near-)singular Jacobians.
      Matrix jtj(n, n);
      Vec jtf(n, 0.0);
      double scale = 0.0;
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          double s = 0.0;
          for (std::size_t k = 0; k < n; ++k) s += j(k, a) * j(k, b);
          jtj(a, b) = s;
          scale = std::max(scale, std::abs(s));
        }
        for (std::size_t k = 0; k < n; ++k) jtf[a] -= j(k, a) * f[k];
      }
      for (std::size_t a = 0; a < n; ++a) jtj(a, a) += 1e-10 * (1.0 + scale);
      step = solve(jtj, jtf, 0.0);
      if (!step) return std::nullopt;
    }
    double alpha = 1.0;
    bool accepted = false;
    Vec trial(n);
    Vec ft;
    while (alpha > 1e-8) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + alpha * (*step)[i];
      ft = field.rhs(trial);
      const double rt = norm_inf(ft);
      if (std::isfinite(rt) && rt < (1.0 - 1e-4 * alpha) * r) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    const double moved = alpha * norm_inf(*step);
    x = trial;
    f = ft;
    r = norm_inf(f);
    if (moved < 1e-16 * (1.0 + norm_inf(x))) break;
  }
  if (!(r < kResidualThreshold)) return std::nullopt;
  return x;
}

void lattice(const SearchDomain& dom, std::size_t res, std::size_t axis, Vec& cur,
             std::vector<Vec>& out) {
  if (axis == dom.bounds.size()) {
    if (!dom.simplex || cur.size() < 2 || cur[0] + cur[1] <= 1.0 + 1e-12) out.push_back(cur);
    return;
  }
  const auto [lo, hi] = dom.bounds[axis];
  for (std::size_t i = 0; i < res; ++i) {
    cur[axis] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(res - 1);
    lattice(dom, res, axis + 1, cur, out);
  }
}

}  // namespace

std::vector<FixedPointReport> find_fixed_points(const VectorField& field, const SearchDomain& domain,
                                                std::size_t resolution, SearchOptions opts) {
  if (resolution < 4) throw ValidationError("fixed-point search needs >= 4 seeds per axis");
  if (domain.bounds.size() != field.layout.dim()) throw DimensionMismatch("search domain dimension");

  std::vector<Vec> seeds;
  Vec cur(domain.bounds.size());
  lattice(domain, resolution, 0, cur, seeds);

  std::vector<std::pair<Vec, double>> found;
  for (const Vec& seed : seeds) {
    std::optional<Vec> root = newton(field, seed, opts.max_iterations);
    if (!root || !domain.contains(*root)) continue;
    Vec snapped = *root;
    for (double& c : snapped) {
      if (std::abs(c) < 1e-10) c = 0.0;
      else if (std::abs(c - 1.0) < 1e-10) c = 1.0;
    }
    if (norm_inf(field.rhs(snapped)) < kResidualThreshold) *root = snapped;
    const double res = norm_inf(field.rhs(*root));
    bool merged = false;
    for (auto& [p, pr] : found) {
      double dist = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) dist = std::max(dist, std::abs(p[i] - (*root)[i]));
      if (dist < kDedupRadius) {
        if (res < pr) {
          p = *root;
          pr = res;
        }
        merged = true;
        break;
      }
    }
    if (!merged) found.emplace_back(*root, res);
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<FixedPointReport> out;
  for (const auto& [p, res] : found) out.push_back(analyze_point(field, p, Provenance::NumericalSearch));
  return out;
}

}  // namespace fevo
