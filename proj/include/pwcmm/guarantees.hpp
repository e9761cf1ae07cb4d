#pragma once

#include <span>
#include <vector>

#include "pwcmm/dense.hpp"
#include "pwcmm/penalties.hpp"

namespace pwcmm {

// Change-point support with jump signs; indices are 1-based positions in the
// difference vector, strictly increasing, signs in {-1, +1}.
struct SupportSet {
  std::vector<int> tau;
  std::vector<int> signs;
};

// B = A_tc^T A_t (A_t^T A_t)^{-1}, rows indexed by the complement of tau in
// ascending order. Each row has at most two nonzeros, all entries lie in
// [0, 1), and two-nonzero rows have them at consecutive tau-positions summing
// to 1; ||B s||_inf <= 1 for every sign vector s, with equality exactly when
// two consecutive support jumps share a sign.
linalg::Matrix build_irrepresentability_matrix(int n, std::span<const int> tau);

// ||B (signs * weights)||_inf; with unit weights this is the plain l1
// irrepresentable quantity.
double irrepresentable_lhs(const linalg::Matrix& b, std::span<const int> signs,
                           std::span<const double> weights);

// Smallest eigenvalue of A_t^T A_t; never below smallest_gram_eigenvalue(n).
double support_gram_smallest_eigenvalue(int n, std::span<const int> tau);

struct RecoveryConditions {
  bool cond1 = false;        // no-false-change-point condition
  bool cond2 = false;        // sign-consistency condition
  double cond1_lhs = 0.0;
  bool cond1_boundary = false;  // lhs sits on the boundary value 1
};

// Deterministic exact-recovery conditions for a given noise realization:
//   cond1: || A_tc^T [ sigma A_t G^{-1} u_t + (lambda n)^{-1} P_perp w ] ||_inf <= 1
//   cond2: | G^{-1} (A_t^T w - lambda n sign(z*_t) . f'(|z^_t|/sigma)) | < |z*_t|
// with G = A_t^T A_t, u_t = sign(z*_t) . f'(|z^_t|/sigma) / sigma and P_perp
// the projector onto the orthogonal complement of range(A_t). z_star and
// z_hat are full difference vectors (length n-1); w_tilde has length n.
RecoveryConditions exact_recovery_conditions(int n, std::span<const int> tau,
                                             std::span<const double> z_star,
                                             std::span<const double> z_hat,
                                             std::span<const double> w_tilde, double lambda,
                                             double sigma, const PenaltySpec& penalty);

struct GuaranteeReport {
  double irrepresentable_lhs = 0.0;
  double gamma = 0.0;       // margin used for lambda0 / p1
  double lambda0 = 0.0;     // minimum lambda for the probabilistic guarantee
  double zmin_threshold = 0.0;  // required smallest true jump magnitude
  double p1 = 0.0;          // raw probability bounds; can be <= 0 at desk scale
  double p2 = 0.0;
  double alpha = 0.0;       // || f'(|z^_t|/sigma) ||_inf, 1 in the l1 case
  double s_tilde_min = 0.0;
  bool recovery_cond1 = false;  // noiseless (w = 0) recovery conditions at z_hat
  bool recovery_cond2 = false;
};

// Probabilistic recovery thresholds evaluated at z_hat:
//   lambda0 = (1/(gamma sqrt(2))) sqrt(ln(n)/n * sigma_w^2)
//   zmin_threshold = lambda (2 sigma_w sqrt(n/s~min) + n ||G^{-1}||_inf alpha)
//   p1 = 1 - 2 exp(-2 (gamma^2/sigma_w^2)(lambda^2 - lambda0^2) n)
//   p2 = 1 - 2 exp(ln|tau| - 2 lambda^2 n)
// gamma <= 0 requests the automatic choice gamma = 1 - irrepresentable_lhs
// (which must then be positive). z_hat_tau holds the fitted jump magnitudes
// on the support, aligned with tau.
GuaranteeReport recovery_report(int n, const SupportSet& support,
                                std::span<const double> z_hat_tau, double sigma_w, double lambda,
                                double sigma, const PenaltySpec& penalty, double gamma);

} // namespace pwcmm
