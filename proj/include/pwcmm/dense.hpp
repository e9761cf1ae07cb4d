#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pwcmm::linalg {

// Minimal row-major dense matrix; only what the analysis paths need.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::vector<double> matvec(const Matrix& a, std::span<const double> x);

// Inverse of a symmetric positive definite matrix via Cholesky.
// Throws std::runtime_error if the factorization breaks down.
Matrix spd_inverse(const Matrix& a);

// Induced infinity norm (max absolute row sum).
double inf_norm(const Matrix& a);

// All eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi sweeps.
std::vector<double> symmetric_eigenvalues(Matrix a);

// k-th smallest eigenvalue (k in 1..m) of the symmetric tridiagonal matrix
// with diagonal d (size m) and off-diagonal e (size m-1), by Sturm-count
// bisection inside the Gershgorin interval. Relative accuracy ~1e-13.
double tridiagonal_eigenvalue(std::span<const double> d, std::span<const double> e, int k);

} // namespace pwcmm::linalg
