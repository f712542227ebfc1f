#pragma once

// Reference formulas written out longhand, independent of the library's
// kernels, plus a bisection root finder and a textbook RK4.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

struct Pd {
  double R, S, T, P;
  double dTR() const { return T - R; }
  double dPS() const { return P - S; }
};

// Fitness of cooperators / defectors under A(n) = (1-n) flipped + n base.
inline double r_coop(const Pd& g, double x, double n) {
  const double a11 = n * g.R + (1 - n) * g.T, a12 = n * g.S + (1 - n) * g.P;
  return a11 * x + a12 * (1 - x);
}
inline double r_defect(const Pd& g, double x, double n) {
  const double a21 = n * g.T + (1 - n) * g.R, a22 = n * g.P + (1 - n) * g.S;
  return a21 * x + a22 * (1 - x);
}

inline double pd_replicator(const Pd& g, double x) {
  return -x * (1 - x) * (g.dTR() * x + g.dPS() * (1 - x));
}

inline double pd_pairwise(const Pd& g, double x) { return -x * (g.dTR() * x + g.dPS() * (1 - x)); }

inline double pos(double v) { return v > 0 ? v : 0; }

// Pairwise protocol with the switching rate [r_j - r_i]_+ at level n.
inline double pd_pairwise_env(const Pd& g, double x, double n, double eps) {
  const double d = r_coop(g, x, n) - r_defect(g, x, n);
  return ((1 - x) * pos(d) - x * pos(-d)) / eps;
}

// The single smooth expression eps dx = (1-x) g(x) (1-2n).
inline double pd_pairwise_smooth(const Pd& g, double x, double n, double eps) {
  return (1 - x) * (g.dPS() + (g.dTR() - g.dPS()) * x) * (1 - 2 * n) / eps;
}

inline double env_rate(double lambda, double x1, double n) { return n * (1 - n) * ((1 + lambda) * x1 - 1); }

struct Opd {
  double R, S, T, P, L;
};

// Three-strategy replicator with environment, written per strategy.
inline std::array<double, 3> opd_replicator(const Opd& g, double lambda, double eps, double x1, double x2,
                                            double n) {
  const double x3 = 1 - x1 - x2;
  const double a11 = n * g.R + (1 - n) * g.T, a12 = n * g.S + (1 - n) * g.P;
  const double a21 = n * g.T + (1 - n) * g.R, a22 = n * g.P + (1 - n) * g.S;
  const double r1 = a11 * x1 + a12 * x2 + g.L * x3;
  const double r2 = a21 * x1 + a22 * x2 + g.L * x3;
  const double r3 = g.L;
  const double avg = x1 * r1 + x2 * r2 + x3 * r3;
  return {x1 * (r1 - avg) / eps, x2 * (r2 - avg) / eps, env_rate(lambda, x1, n)};
}

inline double bisect(const std::function<double(double)>& f, double a, double b, double tol = 1e-14) {
  double fa = f(a);
  for (int i = 0; i < 200 && b - a > tol; ++i) {
    const double m = 0.5 * (a + b), fm = f(m);
    if (fm == 0.0) return m;
    if ((fa < 0) == (fm < 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Sign-change brackets on a uniform scan plus exact zeros at scan points.
inline std::vector<double> scan_roots(const std::function<double(double)>& f, double lo, double hi, int n) {
  std::vector<double> roots;
  double xp = lo, fp = f(lo);
  if (fp == 0.0) roots.push_back(lo);
  for (int i = 1; i <= n; ++i) {
    const double x = lo + (hi - lo) * i / n, fx = f(x);
    if (fx == 0.0) roots.push_back(x);
    else if (fp != 0.0 && (fp < 0) != (fx < 0)) roots.push_back(bisect(f, xp, x));
    xp = x;
    fp = fx;
  }
  return roots;
}

using System = std::function<std::vector<double>(double, const std::vector<double>&)>;

inline std::vector<double> rk4(const System& f, std::vector<double> y, double t0, double t1, int steps) {
  const double h = (t1 - t0) / steps;
  const std::size_t d = y.size();
  std::vector<double> tmp(d);
  for (int s = 0; s < steps; ++s) {
    const double t = t0 + s * h;
    const auto k1 = f(t, y);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    const auto k2 = f(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    const auto k3 = f(t + 0.5 * h, tmp);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = y[i] + h * k3[i];
    const auto k4 = f(t + h, tmp);
    for (std::size_t i = 0; i < d; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return y;
}

// Strict PD payoffs T > R > P > S drawn from [0, 10].
inline Pd random_strict_pd(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::array<double, 4> v{};
  do {
    for (auto& e : v) e = u(rng);
    std::sort(v.begin(), v.end());
  } while (v[1] - v[0] < 0.05 || v[2] - v[1] < 0.05 || v[3] - v[2] < 0.05);
  return {v[2], v[0], v[3], v[1]};  // R, S, T, P
}

}  // namespace oracle
