#include "pwcmm/guarantees.hpp"

#include <cmath>
#include <stdexcept>

#include "pwcmm/difference_model.hpp"

namespace pwcmm {

namespace {

using linalg::Matrix;

void validate_tau(int n, std::span<const int> tau) {
  if (n < 2) throw std::invalid_argument("support: n must be at least 2");
  if (tau.empty()) throw std::invalid_argument("support: tau must be nonempty");
  int prev = 0;
  for (int t : tau) {
    if (t <= prev || t > n - 1)
      throw std::invalid_argument("support: indices must be strictly increasing in 1..n-1");
    prev = t;
  }
}

std::vector<int> complement(int n, std::span<const int> tau) {
  std::vector<int> out;
  out.reserve(n - 1 - tau.size());
  size_t p = 0;
  for (int j = 1; j <= n - 1; ++j) {
    if (p < tau.size() && tau[p] == j) {
      ++p;
    } else {
      out.push_back(j);
    }
  }
  return out;
}

Matrix design_columns(int n, std::span<const int> cols) {
  Matrix m(n, static_cast<int>(cols.size()));
  for (int c = 0; c < m.cols; ++c)
    for (int i = 0; i < n; ++i) m(i, c) = design_entry(n, i + 1, cols[c]);
  return m;
}

Matrix support_gram_inverse(int n, std::span<const int> tau, Matrix* gram_out = nullptr) {
  const Matrix at = design_columns(n, tau);
  const Matrix gram = linalg::matmul(linalg::transpose(at), at);
  if (gram_out) *gram_out = gram;
  return linalg::spd_inverse(gram);
}

void validate_signs(std::span<const int> signs, size_t expected) {
  if (signs.size() != expected) throw std::invalid_argument("signs must align with tau");
  for (int s : signs)
    if (s != 1 && s != -1) throw std::invalid_argument("signs must be +1 or -1");
}

} // namespace

Matrix build_irrepresentability_matrix(int n, std::span<const int> tau) {
  validate_tau(n, tau);
  const std::vector<int> tau_c = complement(n, tau);
  if (tau_c.empty())
    throw std::invalid_argument("support complement is empty; tau covers every difference");
  const Matrix atc = design_columns(n, tau_c);
  const Matrix at = design_columns(n, tau);
  const Matrix ginv = support_gram_inverse(n, tau);
  return linalg::matmul(linalg::matmul(linalg::transpose(atc), at), ginv);
}

double irrepresentable_lhs(const Matrix& b, std::span<const int> signs,
                           std::span<const double> weights) {
  validate_signs(signs, static_cast<size_t>(b.cols));
  if (weights.size() != static_cast<size_t>(b.cols))
    throw std::invalid_argument("weights must align with tau");
  std::vector<double> v(b.cols);
  for (int i = 0; i < b.cols; ++i) {
    if (!(weights[i] > 0.0) || weights[i] > 1.0)
      throw std::invalid_argument("weights must lie in (0, 1]");
    v[i] = signs[i] * weights[i];
  }
  double worst = 0.0;
  for (int i = 0; i < b.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < b.cols; ++j) s += b(i, j) * v[j];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

double support_gram_smallest_eigenvalue(int n, std::span<const int> tau) {
  validate_tau(n, tau);
  const Matrix at = design_columns(n, tau);
  const Matrix gram = linalg::matmul(linalg::transpose(at), at);
  return linalg::symmetric_eigenvalues(gram).front();
}

RecoveryConditions exact_recovery_conditions(int n, std::span<const int> tau,
                                             std::span<const double> z_star,
                                             std::span<const double> z_hat,
                                             std::span<const double> w_tilde, double lambda,
                                             double sigma, const PenaltySpec& penalty) {
  validate_tau(n, tau);
  if (static_cast<int>(z_star.size()) != n - 1 || static_cast<int>(z_hat.size()) != n - 1)
    throw std::invalid_argument("exact_recovery_conditions: difference vectors must have length n-1");
  if (static_cast<int>(w_tilde.size()) != n)
    throw std::invalid_argument("exact_recovery_conditions: noise vector must have length n");
  if (!(lambda > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("exact_recovery_conditions: lambda and sigma must be positive");
  {
    size_t p = 0;
    for (int j = 1; j <= n - 1; ++j) {
      const bool on_support = p < tau.size() && tau[p] == j;
      if (on_support) ++p;
      if (!on_support && z_star[j - 1] != 0.0)
        throw std::invalid_argument("exact_recovery_conditions: z_star must be supported on tau");
    }
  }

  const int t = static_cast<int>(tau.size());
  const Matrix at = design_columns(n, tau);
  const std::vector<int> tau_c = complement(n, tau);
  Matrix gram;
  const Matrix ginv = support_gram_inverse(n, tau, &gram);

  std::vector<double> sign_grad(t);  // sign(z*_t) . f'(|z^_t|/sigma)
  for (int i = 0; i < t; ++i) {
    const double zs = z_star[tau[i] - 1];
    if (zs == 0.0)
      throw std::invalid_argument("exact_recovery_conditions: z_star vanishes on tau");
    const double sgn = zs > 0.0 ? 1.0 : -1.0;
    sign_grad[i] = sgn * penalty.derivative(std::abs(z_hat[tau[i] - 1]) / sigma);
  }

  // cond1: || A_tc^T [ sigma A_t G^{-1} u_t + (lambda n)^{-1} P_perp w ] ||_inf <= 1,
  // with sigma * u_t = sign_grad, so the first term is A_t (G^{-1} sign_grad).
  const std::vector<double> g_sign = linalg::matvec(ginv, sign_grad);
  std::vector<double> vec = linalg::matvec(at, g_sign);  // length n

  const std::vector<double> atw = linalg::matvec(linalg::transpose(at), std::vector<double>(w_tilde.begin(), w_tilde.end()));
  const std::vector<double> g_atw = linalg::matvec(ginv, atw);
  const std::vector<double> proj = linalg::matvec(at, g_atw);  // A_t G^{-1} A_t^T w
  const double inv_ln = 1.0 / (lambda * n);
  for (int i = 0; i < n; ++i) vec[i] += inv_ln * (w_tilde[i] - proj[i]);

  double lhs = 0.0;
  for (int j : tau_c) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += design_entry(n, i + 1, j) * vec[i];
    lhs = std::max(lhs, std::abs(s));
  }

  RecoveryConditions out;
  out.cond1_lhs = lhs;
  out.cond1 = lhs <= 1.0 + 1e-12;
  out.cond1_boundary = std::abs(lhs - 1.0) <= 1e-9;

  // cond2: | G^{-1} (A_t^T w - lambda n sign_grad) | < |z*_t| elementwise.
  std::vector<double> rhs(t);
  for (int i = 0; i < t; ++i) rhs[i] = atw[i] - lambda * n * sign_grad[i];
  const std::vector<double> dev = linalg::matvec(ginv, rhs);
  bool cond2 = true;
  for (int i = 0; i < t; ++i)
    if (!(std::abs(dev[i]) < std::abs(z_star[tau[i] - 1]))) cond2 = false;
  out.cond2 = cond2;
  return out;
}

GuaranteeReport recovery_report(int n, const SupportSet& support,
                                std::span<const double> z_hat_tau, double sigma_w, double lambda,
                                double sigma, const PenaltySpec& penalty, double gamma) {
  validate_tau(n, support.tau);
  validate_signs(support.signs, support.tau.size());
  if (z_hat_tau.size() != support.tau.size())
    throw std::invalid_argument("recovery_report: z_hat_tau must align with tau");
  if (!(sigma_w > 0.0) || !(lambda > 0.0) || !(sigma > 0.0))
    throw std::invalid_argument("recovery_report: sigma_w, lambda, sigma must be positive");

  const int t = static_cast<int>(support.tau.size());
  GuaranteeReport rep;

  std::vector<double> weights(t);
  for (int i = 0; i < t; ++i) {
    weights[i] = penalty.derivative(std::abs(z_hat_tau[i]) / sigma);
    rep.alpha = std::max(rep.alpha, weights[i]);
  }

  const Matrix b = build_irrepresentability_matrix(n, support.tau);
  rep.irrepresentable_lhs = irrepresentable_lhs(b, support.signs, weights);

  if (gamma <= 0.0) {
    gamma = 1.0 - rep.irrepresentable_lhs;
    if (!(gamma > 0.0))
      throw std::invalid_argument("recovery_report: automatic gamma is nonpositive here");
  }
  if (!(gamma > 0.0 && gamma < 1.0))
    throw std::invalid_argument("recovery_report: gamma must lie in (0, 1)");
  rep.gamma = gamma;

  rep.lambda0 = std::sqrt(std::log(static_cast<double>(n)) / n * sigma_w * sigma_w) /
                (gamma * std::sqrt(2.0));

  Matrix gram;
  const Matrix ginv = support_gram_inverse(n, support.tau, &gram);
  rep.s_tilde_min = linalg::symmetric_eigenvalues(gram).front();
  rep.zmin_threshold = lambda * (2.0 * sigma_w * std::sqrt(n / rep.s_tilde_min) +
                                 n * linalg::inf_norm(ginv) * rep.alpha);

  rep.p1 = 1.0 - 2.0 * std::exp(-2.0 * gamma * gamma / (sigma_w * sigma_w) *
                                (lambda * lambda - rep.lambda0 * rep.lambda0) * n);
  rep.p2 = 1.0 - 2.0 * std::exp(std::log(static_cast<double>(t)) - 2.0 * lambda * lambda * n);

  // Noiseless recovery conditions evaluated at the fitted magnitudes; the
  // fitted jumps stand in for the unknown true ones.
  std::vector<double> z_star(n - 1, 0.0), z_hat_full(n - 1, 0.0), w0(n, 0.0);
  for (int i = 0; i < t; ++i) {
    const double magnitude = std::abs(z_hat_tau[i]);
    if (!(magnitude > 0.0))
      throw std::invalid_argument("recovery_report: fitted jumps on tau must be nonzero");
    z_star[support.tau[i] - 1] = support.signs[i] * magnitude;
    z_hat_full[support.tau[i] - 1] = support.signs[i] * magnitude;
  }
  const RecoveryConditions rc =
      exact_recovery_conditions(n, support.tau, z_star, z_hat_full, w0, lambda, sigma, penalty);
  rep.recovery_cond1 = rc.cond1;
  rep.recovery_cond2 = rc.cond2;
  return rep;
}

} // namespace pwcmm
