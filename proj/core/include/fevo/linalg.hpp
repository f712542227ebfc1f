#pragma once

// Small dense linear algebra for state dimensions up to 3 (plus the 4-long
// integration embedding). Everything here is sized at runtime and
// allocation-light; no external BLAS.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fevo {

using Vec = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> row_major);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }

  double trace() const;
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

double norm_inf(std::span<const double> v);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Solves A x = b by Gaussian elimination with partial pivoting. Returns
// nullopt when a pivot falls below `singular_tol` times the largest entry.
std::optional<Vec> solve(Matrix a, Vec b, double singular_tol = 1e-13);

// Eigenvalues of a square matrix of dimension 1..3 from the characteristic
// polynomial: quadratic formula in the cancellation-free form for 2x2, a
// polished real root plus deflation for 3x3. Triangular matrices return
// their diagonal exactly. Sorted by (real, imag).
std::vector<std::complex<double>> eigenvalues(const Matrix& m);

// Roots of x^3 + c2 x^2 + c1 x + c0, sorted by (real, imag).
std::vector<std::complex<double>> cubic_roots(double c2, double c1, double c0);

}  // namespace fevo
