#include "pwcmm/difference_model.hpp"

#include <cmath>
#include <stdexcept>

#include "pwcmm/dense.hpp"

namespace pwcmm {

namespace {

void require_n(int n) {
  if (n < 2) throw std::invalid_argument("sample count must be at least 2");
}

} // namespace

CenteredObservation center(std::span<const double> y) {
  const int n = static_cast<int>(y.size());
  require_n(n);
  long double sum = 0.0L;
  for (double v : y) {
    if (!std::isfinite(v)) throw std::invalid_argument("observation contains a non-finite value");
    sum += v;
  }
  const double mean = static_cast<double>(sum / n);
  CenteredObservation out;
  out.y_mean = mean;
  out.y_tilde.resize(y.size());
  for (int i = 0; i < n; ++i) out.y_tilde[i] = y[i] - mean;
  return out;
}

double design_entry(int n, int i, int j) {
  require_n(n);
  if (i < 1 || i > n || j < 1 || j > n - 1) throw std::out_of_range("design_entry: index out of range");
  return i <= j ? static_cast<double>(j - n) / n : static_cast<double>(j) / n;
}

std::vector<double> apply_design(int n, std::span<const double> z) {
  require_n(n);
  if (static_cast<int>(z.size()) != n - 1) throw std::invalid_argument("apply_design: z must have length n-1");
  // (A z)_i = (1/n) sum_j j z_j - sum_{j >= i} z_j
  long double weighted = 0.0L;
  for (int j = 0; j < n - 1; ++j) weighted += static_cast<long double>(j + 1) * z[j];
  const double base = static_cast<double>(weighted / n);
  std::vector<double> out(n);
  long double suffix = 0.0L;
  out[n - 1] = base;
  for (int i = n - 2; i >= 0; --i) {
    suffix += z[i];
    out[i] = base - static_cast<double>(suffix);
  }
  return out;
}

std::vector<double> apply_design_transpose(int n, std::span<const double> v) {
  require_n(n);
  if (static_cast<int>(v.size()) != n) throw std::invalid_argument("apply_design_transpose: v must have length n");
  // (A^T v)_j = (j/n) sum_i v_i - sum_{i <= j} v_i
  long double total = 0.0L;
  for (double x : v) total += x;
  std::vector<double> out(n - 1);
  long double prefix = 0.0L;
  for (int j = 1; j <= n - 1; ++j) {
    prefix += v[j - 1];
    out[j - 1] = static_cast<double>(static_cast<long double>(j) / n * total - prefix);
  }
  return out;
}

std::vector<double> reconstruct_x(std::span<const double> z_hat, std::span<const double> y) {
  const int n = static_cast<int>(y.size());
  require_n(n);
  if (static_cast<int>(z_hat.size()) != n - 1)
    throw std::invalid_argument("reconstruct_x: z_hat must have length n-1");
  const double mean = center(y).y_mean;
  std::vector<double> prefix(n - 1);
  long double acc = 0.0L, total = 0.0L;
  for (int i = 0; i < n - 1; ++i) {
    acc += z_hat[i];
    prefix[i] = static_cast<double>(acc);
    total += acc;
  }
  std::vector<double> x(n);
  x[0] = mean - static_cast<double>(total / n);
  for (int i = 1; i < n; ++i) x[i] = x[0] + prefix[i - 1];
  return x;
}

double column_norm_sq(int n, int j) {
  require_n(n);
  if (j < 1 || j > n - 1) throw std::out_of_range("column_norm_sq: column index out of range");
  return static_cast<double>(j) * (n - j) / n;
}

double smallest_gram_eigenvalue(int n) {
  require_n(n);
  // A^T A equals the inverse of tridiag(-1, 2, -1) of size n-1, so its
  // smallest eigenvalue is 1 / lambda_max of that matrix.
  const int m = n - 1;
  std::vector<double> d(m, 2.0), e(m > 1 ? m - 1 : 0, -1.0);
  const double lam_max = linalg::tridiagonal_eigenvalue(d, e, m);
  return 1.0 / lam_max;
}

ConvexityCheck check_convexity(int n, double lambda_sigma, double sigma, double mu) {
  require_n(n);
  if (!(lambda_sigma > 0.0) || !(sigma > 0.0) || mu < 0.0)
    throw std::invalid_argument("check_convexity: parameters must be positive (mu >= 0)");
  ConvexityCheck out;
  out.s_min = smallest_gram_eigenvalue(n);
  out.margin = sigma * sigma - lambda_sigma * n * mu / out.s_min;
  out.verdict = out.margin > 0.0 ? ConvexityVerdict::StrictlyConvex : ConvexityVerdict::NotCertified;
  return out;
}

} // namespace pwcmm
