#include "fevo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fevo/error.hpp"

namespace fevo {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> row_major)
    : rows_(rows), cols_(cols), a_(row_major) {
  if (a_.size() != rows * cols) throw DimensionMismatch("matrix initializer has wrong size");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("matrix shapes differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

std::optional<Vec> solve(Matrix a, Vec b, double singular_tol) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.size() != n) throw DimensionMismatch("solve: shape mismatch");
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (scale == 0.0) return std::nullopt;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= singular_tol * scale) return std::nullopt;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(b[k], b[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
    }
  }
  Vec x(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

namespace {

using cplx = std::complex<double>;

void sort_roots(std::vector<cplx>& r) {
  std::sort(r.begin(), r.end(), [](const cplx& a, const cplx& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
}

// Roots of x^2 + b x + c.
void quadratic_roots(double b, double c, std::vector<cplx>& out) {
  const double half = -0.5 * b;
  const double disc = half * half - c;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    const double big = half + std::copysign(s, half);
    out.emplace_back(big, 0.0);
    out.emplace_back(big != 0.0 ? c / big : half - s, 0.0);
  } else {
    const double s = std::sqrt(-disc);
    out.emplace_back(half, s);
    out.emplace_back(half, -s);
  }
}

double polish_cubic_root(double x, double c2, double c1, double c0) {
  for (int it = 0; it < 8; ++it) {
    const double p = ((x + c2) * x + c1) * x + c0;
    const double dp = (3.0 * x + 2.0 * c2) * x + c1;
    if (dp == 0.0) break;
    const double step = p / dp;
    const double nx = x - step;
    if (!std::isfinite(nx)) break;
    const double np = ((nx + c2) * nx + c1) * nx + c0;
    if (std::abs(np) >= std::abs(p)) break;
    x = nx;
    if (step == 0.0) break;
  }
  return x;
}

bool is_triangular(const Matrix& m) {
  bool upper = true, lower = true;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (i > j && m(i, j) != 0.0) upper = false;
      if (i < j && m(i, j) != 0.0) lower = false;
    }
  return upper || lower;
}

}  // namespace

std::vector<cplx> cubic_roots(double c2, double c1, double c0) {
  std::vector<cplx> roots;
  if (c0 == 0.0) {
    roots.emplace_back(0.0, 0.0);
    quadratic_roots(c2, c1, roots);
    sort_roots(roots);
    return roots;
  }
  // Depressed cubic t^3 + p t + q with x = t - c2/3.
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;

  double real_root;
  if (disc < 0.0) {
    // Three distinct real roots: trigonometric form, then polish each.
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const double t = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
      roots.emplace_back(polish_cubic_root(t - shift, c2, c1, c0), 0.0);
    }
    sort_roots(roots);
    return roots;
  } else {
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + s);
    const double v = std::cbrt(-q / 2.0 - s);
    real_root = polish_cubic_root(u + v - shift, c2, c1, c0);
  }
  // Deflate: x^3 + c2 x^2 + c1 x + c0 = (x - r)(x^2 + b1 x + b0).
  const double b1 = c2 + real_root;
  const double b0 = c1 + real_root * b1;
  roots.emplace_back(real_root, 0.0);
  quadratic_roots(b1, b0, roots);
  sort_roots(roots);
  return roots;
}

std::vector<cplx> eigenvalues(const Matrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n || n == 0 || n > 3) throw DimensionMismatch("eigenvalues: need a 1x1..3x3 matrix");
  std::vector<cplx> ev;
  if (is_triangular(m)) {
    for (std::size_t i = 0; i < n; ++i) ev.emplace_back(m(i, i), 0.0);
    sort_roots(ev);
    return ev;
  }
  if (n == 2) {
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    const double half = 0.5 * (a + d);
    // (a-d)^2/4 + bc avoids the cancellation in tr^2/4 - det.
    const double disc = 0.25 * (a - d) * (a - d) + b * c;
    if (disc >= 0.0) {
      const double s = std::sqrt(disc);
      const double big = half + std::copysign(s, half);
      const double det = a * d - b * c;
      ev.emplace_back(big, 0.0);
      ev.emplace_back(big != 0.0 ? det / big : half - s, 0.0);
    } else {
      const double s = std::sqrt(-disc);
      ev.emplace_back(half, s);
      ev.emplace_back(half, -s);
    }
    sort_roots(ev);
    return ev;
  }
  // 3x3: characteristic polynomial x^3 - tr x^2 + (sum of principal minors) x - det.
  const double tr = m.trace();
  const double minors = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0) + m(0, 0) * m(2, 2) -
                        m(0, 2) * m(2, 0) + m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  const double det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                     m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                     m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  return cubic_roots(-tr, minors, -det);
}

}  // namespace fevo
