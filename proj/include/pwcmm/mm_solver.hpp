#pragma once

#include <span>
#include <vector>

#include "pwcmm/difference_model.hpp"
#include "pwcmm/penalties.hpp"

namespace pwcmm {

struct SolverConfig {
  double lambda = 0.0;  // base regularization weight
  double sigma = 0.0;   // penalty scaling; small sigma ~ l0, large sigma ~ l1
  PenaltySpec penalty = PenaltySpec::make(PenaltyKind::Exponential);
  double epsilon = 1e-4;  // stop when ||x_new - x_old|| / ||x_old|| <= epsilon
  int max_iter = 100;
  bool force = false;  // run even when the convexity certificate fails

  double lambda_sigma() const { return lambda * sigma; }

  // lambda = 4 sqrt(sigma_w^2 / n), sigma = 4 lambda n.
  static SolverConfig defaults(int n, double sigma_w, PenaltyKind kind);
};

struct IterationRecord {
  double objective = 0.0;
  double rel_change = 0.0;
  double kkt_residual = 0.0;
};

struct PwcFit {
  std::vector<double> x_hat;
  std::vector<double> z_hat;        // consecutive differences of x_hat
  std::vector<int> change_points;   // 1-based indices i with z_hat[i] nonzero
  int iterations = 0;
  bool converged = false;
  bool forced = false;              // ran outside the convexity certificate
  double convexity_margin = 0.0;
  std::vector<IterationRecord> trace;
};

// (1/(2n))||y - x||^2 + lambda_sigma * sum f(|dx_i|/sigma); for L1Limit this
// is the plain l1 objective (1/(2n))||y - x||^2 + lambda * sum |dx_i|.
double objective(std::span<const double> y, std::span<const double> x, const SolverConfig& config);

// Iteratively reweighted TV: starting from x = 0, repeatedly solve the
// weighted problem with edge weights n * lambda * f'(|dx_i|/sigma) until the
// relative change drops below epsilon. Rejects configurations that fail the
// convexity certificate unless config.force is set.
PwcFit solve_mm(std::span<const double> y, const SolverConfig& config);

// Same, from a caller-chosen starting point (used by uniqueness probes).
PwcFit solve_mm(std::span<const double> y, const SolverConfig& config,
                std::span<const double> x_start);

// Max distance of r = (1/n) A^T (y_tilde - A z_hat), scaled by lambda_sigma,
// from the Clarke subdifferential of the penalty at z_hat. Zero exactly at a
// minimizer.
double kkt_residual(std::span<const double> y, std::span<const double> z_hat,
                    const SolverConfig& config);

// { i : |z_hat_i| > tol_cp * max(1, y_scale) }, 1-based. y_scale should be
// ||y||_inf of the observations the fit came from.
std::vector<int> detect_change_points(std::span<const double> z_hat, double y_scale,
                                      double tol_cp = 1e-8);

} // namespace pwcmm
