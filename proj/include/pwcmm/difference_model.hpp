#pragma once

#include <span>
#include <vector>

namespace pwcmm {

// Reparameterization of the mean-filtering problem in terms of the first
// differences z, built around the implicit n x (n-1) design matrix
//
//   A[i][j] = (j - n)/n  if i <= j,   j/n  otherwise   (1-based i, j),
//
// for which x = mean(y) outer-term + A z reproduces any signal with
// differences z up to its mean. Solver paths never materialize A; the
// products below run in O(n) via prefix sums.

struct CenteredObservation {
  std::vector<double> y_tilde;  // y with its mean removed
  double y_mean = 0.0;
};

// Removes the sample mean. Throws on length < 2 or non-finite entries.
CenteredObservation center(std::span<const double> y);

// Closed-form entry of A, 1-based: i in 1..n, j in 1..n-1.
double design_entry(int n, int i, int j);

// A z for z of length n-1; result has length n and zero mean.
std::vector<double> apply_design(int n, std::span<const double> z);

// A^T v for v of length n; result has length n-1.
std::vector<double> apply_design_transpose(int n, std::span<const double> v);

// Rebuilds the signal from its differences so that mean(x) = mean(y) and
// diff(x) = z_hat.
std::vector<double> reconstruct_x(std::span<const double> z_hat, std::span<const double> y);

// ||a_j||^2 = j (n - j) / n for the j-th column of A (1-based), <= n/4.
double column_norm_sq(int n, int j);

// Smallest eigenvalue of A^T A. A^T A is the inverse of the (n-1) x (n-1)
// second-difference matrix tridiag(-1, 2, -1), so s_min is the reciprocal of
// that matrix's largest eigenvalue, obtained by Sturm bisection. Decreases
// from 1/2 at n = 2 toward 1/4 as n grows.
double smallest_gram_eigenvalue(int n);

enum class ConvexityVerdict { StrictlyConvex, NotCertified };

struct ConvexityCheck {
  ConvexityVerdict verdict = ConvexityVerdict::NotCertified;
  double margin = 0.0;  // sigma^2 - lambda_sigma * n * mu / s_min
  double s_min = 0.0;
};

// Certifies strict convexity of the penalized objective:
// StrictlyConvex iff sigma^2 > lambda_sigma * n * mu / s_min.
// mu = 0 (the l1 case) always certifies. Throws on nonpositive n/sigma or
// negative inputs.
ConvexityCheck check_convexity(int n, double lambda_sigma, double sigma, double mu);

} // namespace pwcmm
