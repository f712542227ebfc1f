#include "fevo/game_model.hpp"

#include <cmath>

#include "fevo/error.hpp"

namespace fevo {

std::string_view to_string(GameKind k) { return k == GameKind::PD ? "PD" : "OPD"; }

GameKind parse_game_kind(std::string_view s) {
  if (s == "PD" || s == "pd") return GameKind::PD;
  if (s == "OPD" || s == "opd") return GameKind::OPD;
  throw ValidationError("unknown game kind '" + std::string(s) + "' (expected PD or OPD)");
}

GameSpec GameSpec::pd(double R, double S, double T, double P) {
  return GameSpec{GameKind::PD, R, S, T, P, std::nullopt};
}

GameSpec GameSpec::opd(double R, double S, double T, double P, double L) {
  return GameSpec{GameKind::OPD, R, S, T, P, L};
}

double GameSpec::loner() const {
  if (!L) throw ValidationError("loner's payoff L is not set");
  return *L;
}

Deltas deltas(const GameSpec& spec) {
  Deltas d;
  d.TR = spec.T - spec.R;
  d.PS = spec.P - spec.S;
  if (spec.kind == GameKind::OPD && spec.L) {
    d.TL = spec.T - *spec.L;
    d.RL = spec.R - *spec.L;
    d.PL = spec.P - *spec.L;
  }
  return d;
}

namespace {

struct Named {
  const char* name;
  double value;
};

}  // namespace

ValidatedSpec validate_spec(const GameSpec& spec, Strictness strictness) {
  for (double v : {spec.R, spec.S, spec.T, spec.P}) {
    if (!std::isfinite(v)) throw ValidationError("payoffs must be finite");
  }
  if (spec.kind == GameKind::OPD) {
    if (!spec.L) throw ValidationError("OPD requires the loner's payoff L");
    if (!std::isfinite(*spec.L)) throw ValidationError("payoffs must be finite");
  } else if (spec.L) {
    throw ValidationError("loner's payoff L is only valid for OPD");
  }

  std::vector<Named> chain;
  if (spec.kind == GameKind::PD) {
    chain = {{"T", spec.T}, {"R", spec.R}, {"P", spec.P}, {"S", spec.S}};
  } else {
    chain = {{"T", spec.T}, {"R", spec.R}, {"L", *spec.L}, {"P", spec.P}, {"S", spec.S}};
  }

  ValidatedSpec out{spec, deltas(spec), {}};
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (chain[i].value > chain[i + 1].value) continue;
    std::string msg = std::string("ordering violated: ") + chain[i].name + " > " +
                      chain[i + 1].name + " (" + std::to_string(chain[i].value) +
                      " vs " + std::to_string(chain[i + 1].value) + ")";
    if (strictness == Strictness::Strict) throw OrderingViolation(msg);
    out.warnings.push_back(std::move(msg));
  }
  return out;
}

PayoffMatrix::PayoffMatrix(std::size_t dim) : dim_(dim) {
  if (dim != 2 && dim != 3) throw DimensionMismatch("payoff matrix must be 2x2 or 3x3");
}

PayoffMatrix::PayoffMatrix(std::size_t dim, std::initializer_list<double> row_major)
    : PayoffMatrix(dim) {
  if (row_major.size() != dim * dim) throw DimensionMismatch("wrong number of payoff entries");
  std::size_t k = 0;
  for (double v : row_major) {
    a_[(k / dim) * 3 + k % dim] = v;
    ++k;
  }
}

namespace {

PayoffMatrix with_abstain(const GameSpec& spec, double a11, double a12, double a21, double a22) {
  PayoffMatrix m(spec.strategies());
  m(0, 0) = a11;
  m(0, 1) = a12;
  m(1, 0) = a21;
  m(1, 1) = a22;
  if (spec.kind == GameKind::OPD) {
    const double L = spec.loner();
    for (std::size_t k = 0; k < 3; ++k) {
      m(2, k) = L;
      m(k, 2) = L;
    }
  }
  return m;
}

}  // namespace

PayoffMatrix base_matrix(const GameSpec& spec) {
  return with_abstain(spec, spec.R, spec.S, spec.T, spec.P);
}

PayoffMatrix flipped_matrix(const GameSpec& spec) {
  return with_abstain(spec, spec.T, spec.P, spec.R, spec.S);
}

PayoffMatrix payoff_matrix_at(const GameSpec& spec, double n) {
  if (!std::isfinite(n) || n < 0.0 || n > 1.0) {
    throw DomainError("environment level n must lie in [0,1], got " + std::to_string(n));
  }
  return detail::payoff_matrix_unchecked(spec, n);
}

void validate_coupling(const EnvCoupling& c) {
  if (!(std::isfinite(c.lambda) && c.lambda > 0.0)) throw ValidationError("lambda must be > 0");
  if (!(std::isfinite(c.epsilon) && c.epsilon > 0.0)) throw ValidationError("epsilon must be > 0");
}

std::vector<double> fitness(const PayoffMatrix& matrix, std::span<const double> x) {
  if (x.size() != matrix.dim()) {
    throw DimensionMismatch("frequency vector has " + std::to_string(x.size()) +
                            " entries, matrix is " + std::to_string(matrix.dim()) + "x" +
                            std::to_string(matrix.dim()));
  }
  double sum = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < -kSimplexTolerance) throw DomainError("frequencies must be >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance) {
    throw DomainError("frequencies must sum to 1 (got " + std::to_string(sum) + ")");
  }
  std::vector<double> r(matrix.dim(), 0.0);
  for (std::size_t i = 0; i < matrix.dim(); ++i) {
    for (std::size_t j = 0; j < matrix.dim(); ++j) r[i] += matrix(i, j) * (x[j] / sum);
  }
  return r;
}

namespace detail {

PayoffMatrix payoff_matrix_unchecked(const GameSpec& spec, double n) {
  const PayoffMatrix base = base_matrix(spec);
  const PayoffMatrix flip = flipped_matrix(spec);
  PayoffMatrix m = base;
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) m(i, j) = (1.0 - n) * flip(i, j) + n * base(i, j);
  }
  return m;
}

PayoffMatrix payoff_matrix_slope(const GameSpec& spec) {
  PayoffMatrix m(spec.strategies());
  const Deltas d = deltas(spec);
  m(0, 0) = -d.TR;
  m(0, 1) = -d.PS;
  m(1, 0) = d.TR;
  m(1, 1) = d.PS;
  return m;
}

std::array<double, 3> fitness_unchecked(const PayoffMatrix& a, const std::array<double, 3>& x) {
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) r[i] += a(i, j) * x[j];
  }
  return r;
}

}  // namespace detail

}  // namespace fevo
