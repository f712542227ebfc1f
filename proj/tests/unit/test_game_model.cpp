#include <cmath>
#include <random>

#include "doctest.h"
#include "fevo/error.hpp"
#include "fevo/game_model.hpp"
#include "oracles.hpp"

using namespace fevo;

TEST_CASE("ordering validation") {
  CHECK_NOTHROW(validate_spec(GameSpec::pd(3, 0, 5, 1), Strictness::Strict));
  CHECK_NOTHROW(validate_spec(GameSpec::opd(3, 0, 5, 1, 2), Strictness::Strict));

  // R = 5 > T = 3: not a dilemma
  CHECK_THROWS_AS(validate_spec(GameSpec::pd(5, 1, 3, 0), Strictness::Strict), OrderingViolation);
  try {
    validate_spec(GameSpec::pd(5, 1, 3, 0), Strictness::Strict);
  } catch (const OrderingViolation& e) {
    CHECK(std::string(e.what()).find("T > R") != std::string::npos);
  }
  const auto lenient = validate_spec(GameSpec::pd(5, 1, 3, 0), Strictness::Lenient);
  CHECK_FALSE(lenient.warnings.empty());

  CHECK_THROWS_AS(validate_spec(GameSpec::opd(3, 0, 5, 1, 4), Strictness::Strict), OrderingViolation);
  CHECK_THROWS_AS(validate_spec(GameSpec::pd(3, 1, 5, 1), Strictness::Strict), OrderingViolation);
  CHECK(validate_spec(GameSpec::pd(3, 1, 5, 1), Strictness::Lenient).warnings.size() == 1);
  CHECK_THROWS(validate_spec(GameSpec::pd(3, 0, NAN, 1), Strictness::Lenient));
}

TEST_CASE("deltas") {
  const Deltas d = deltas(GameSpec::opd(3, 0, 5, 1, 2));
  CHECK(d.TR == 2);
  CHECK(d.PS == 1);
  CHECK(d.TL == 3);
  CHECK(d.RL == 1);
  CHECK(d.PL == -1);
}

TEST_CASE("payoff matrix endpoints and convexity") {
  const GameSpec g = GameSpec::pd(3, 0, 5, 1);
  CHECK(payoff_matrix_at(g, 1.0) == PayoffMatrix(2, {3, 0, 5, 1}));
  CHECK(payoff_matrix_at(g, 0.0) == PayoffMatrix(2, {5, 1, 3, 0}));
  const PayoffMatrix half = payoff_matrix_at(g, 0.5);
  CHECK(half(0, 0) == doctest::Approx(4.0));
  CHECK(half(0, 1) == doctest::Approx(0.5));
  CHECK(half(1, 0) == doctest::Approx(4.0));
  CHECK(half(1, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(payoff_matrix_at(g, 1.5), DomainError);
  CHECK_THROWS_AS(payoff_matrix_at(g, -0.1), DomainError);

  const GameSpec o = GameSpec::opd(3, 0, 5, 1, 2);
  for (double n : {0.0, 0.3, 1.0}) {
    const PayoffMatrix a = payoff_matrix_at(o, n);
    REQUIRE(a.dim() == 3);
    for (int i = 0; i < 3; ++i) {
      CHECK(a(2, i) == 2.0);
      CHECK(a(i, 2) == 2.0);
    }
  }
}

TEST_CASE("fitness difference matches the longhand formula") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const oracle::Pd p = oracle::random_strict_pd(rng);
    const GameSpec g = GameSpec::pd(p.R, p.S, p.T, p.P);
    const double x = u(rng), n = u(rng);
    const auto r = fitness(payoff_matrix_at(g, n), std::vector<double>{x, 1 - x});
    CHECK(r[0] == doctest::Approx(oracle::r_coop(p, x, n)).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(oracle::r_defect(p, x, n)).epsilon(1e-12));
    // r1 - r2 = (1 - 2n) (dPS + (dTR - dPS) x)
    CHECK(r[0] - r[1] == doctest::Approx((1 - 2 * n) * (p.dPS() + (p.dTR() - p.dPS()) * x)).epsilon(1e-10));
  }
}

TEST_CASE("fitness input checks") {
  const PayoffMatrix a = base_matrix(GameSpec::pd(3, 0, 5, 1));
  CHECK_THROWS_AS(fitness(a, std::vector<double>{0.3, 0.3, 0.4}), DimensionMismatch);
  CHECK_THROWS_AS(fitness(a, std::vector<double>{0.3, 0.3}), DomainError);
  const auto r = fitness(a, std::vector<double>{0.5, 0.5 + 1e-12});
  CHECK(r[0] == doctest::Approx(1.5));
}

TEST_CASE("coupling validation") {
  CHECK_NOTHROW(validate_coupling({2.0, 0.1}));
  CHECK_THROWS_AS(validate_coupling({0.0, 0.1}), ValidationError);
  CHECK_THROWS_AS(validate_coupling({1.0, -1.0}), ValidationError);
}
