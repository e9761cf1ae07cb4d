#include "pwcmm/mm_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pwcmm/taut_string.hpp"

namespace pwcmm {

namespace {

void validate_config(const SolverConfig& config) {
  if (!(config.lambda > 0.0)) throw std::invalid_argument("solver config: lambda must be positive");
  if (!(config.sigma > 0.0)) throw std::invalid_argument("solver config: sigma must be positive");
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("solver config: epsilon must be positive");
  if (config.max_iter < 1) throw std::invalid_argument("solver config: max_iter must be at least 1");
}

double norm2(std::span<const double> v) {
  long double s = 0.0L;
  for (double x : v) s += static_cast<long double>(x) * x;
  return static_cast<double>(std::sqrt(s));
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> diff(std::span<const double> x) {
  std::vector<double> z(x.size() - 1);
  for (size_t i = 0; i + 1 < x.size(); ++i) z[i] = x[i + 1] - x[i];
  return z;
}

} // namespace

SolverConfig SolverConfig::defaults(int n, double sigma_w, PenaltyKind kind) {
  if (n < 2) throw std::invalid_argument("solver config: n must be at least 2");
  if (!(sigma_w > 0.0)) throw std::invalid_argument("solver config: sigma_w must be positive");
  SolverConfig c;
  c.lambda = 4.0 * std::sqrt(sigma_w * sigma_w / n);
  c.penalty = PenaltySpec::make(kind);
  // 4 lambda n for the mu = 1 families; the mu factor keeps the certificate
  // valid for curvier penalties since s_min > 1/4
  c.sigma = 4.0 * c.lambda * n * (c.penalty.mu > 0.0 ? c.penalty.mu : 1.0);
  return c;
}

double objective(std::span<const double> y, std::span<const double> x,
                 const SolverConfig& config) {
  if (y.size() != x.size()) throw std::invalid_argument("objective: dimension mismatch");
  validate_config(config);
  const size_t n = y.size();
  long double quad = 0.0L;
  for (size_t i = 0; i < n; ++i) {
    const long double d = static_cast<long double>(y[i]) - x[i];
    quad += d * d;
  }
  long double pen = 0.0L;
  if (config.penalty.kind == PenaltyKind::L1Limit) {
    for (size_t i = 0; i + 1 < n; ++i) pen += std::abs(x[i + 1] - x[i]);
    pen *= config.lambda;
  } else {
    for (size_t i = 0; i + 1 < n; ++i)
      pen += config.penalty.scaled_value(x[i + 1] - x[i], config.sigma);
    pen *= config.lambda_sigma();
  }
  return static_cast<double>(quad / (2.0L * static_cast<long double>(n)) + pen);
}

PwcFit solve_mm(std::span<const double> y, const SolverConfig& config) {
  const std::vector<double> zeros(y.size(), 0.0);
  return solve_mm(y, config, zeros);
}

PwcFit solve_mm(std::span<const double> y, const SolverConfig& config,
                std::span<const double> x_start) {
  const int n = static_cast<int>(y.size());
  if (n < 2) throw std::invalid_argument("solve_mm: need at least 2 samples");
  if (x_start.size() != y.size()) throw std::invalid_argument("solve_mm: bad starting point size");
  validate_config(config);

  PwcFit fit;
  if (config.penalty.kind == PenaltyKind::L1Limit) {
    // The unit-weight objective is strictly convex for any sigma.
    fit.convexity_margin = config.sigma * config.sigma;
  } else {
    const ConvexityCheck check =
        check_convexity(n, config.lambda_sigma(), config.sigma, config.penalty.mu);
    fit.convexity_margin = check.margin;
    if (check.verdict == ConvexityVerdict::NotCertified) {
      if (!config.force)
        throw std::invalid_argument(
            "solve_mm: configuration fails the strict-convexity certificate "
            "(margin " + std::to_string(check.margin) + "); pass force to run anyway");
      fit.forced = true;
    }
  }

  WeightedTvProblem problem;
  problem.y.assign(y.begin(), y.end());
  problem.edge_weights.resize(n - 1);

  std::vector<double> x(x_start.begin(), x_start.end());
  std::vector<double> z = diff(x);
  fit.converged = false;
  for (int k = 0; k < config.max_iter; ++k) {
    for (int i = 0; i < n - 1; ++i) {
      const double w =
          n * config.lambda * config.penalty.derivative(std::abs(z[i]) / config.sigma);
      // f' > 0 mathematically but can underflow for extreme forced configs
      problem.edge_weights[i] = std::max(w, 1e-300);
    }
    std::vector<double> x_next = solve_weighted_tv(problem);

    long double change = 0.0L;
    for (int i = 0; i < n; ++i) {
      const long double d = static_cast<long double>(x_next[i]) - x[i];
      change += d * d;
    }
    const double num = static_cast<double>(std::sqrt(change));
    const double den = norm2(x);
    const double d = num == 0.0 ? 0.0
                     : den == 0.0 ? std::numeric_limits<double>::infinity()
                                  : num / den;
    x = std::move(x_next);
    z = diff(x);

    IterationRecord rec;
    rec.objective = objective(y, x, config);
    rec.rel_change = d;
    rec.kkt_residual = kkt_residual(y, z, config);
    fit.trace.push_back(rec);
    fit.iterations = k + 1;
    if (d <= config.epsilon) {
      fit.converged = true;
      break;
    }
  }

  fit.x_hat = std::move(x);
  fit.z_hat = std::move(z);
  fit.change_points = detect_change_points(fit.z_hat, inf_norm(y));
  return fit;
}

double kkt_residual(std::span<const double> y, std::span<const double> z_hat,
                    const SolverConfig& config) {
  const int n = static_cast<int>(y.size());
  if (static_cast<int>(z_hat.size()) != n - 1)
    throw std::invalid_argument("kkt_residual: dimension mismatch");
  validate_config(config);

  const CenteredObservation centered = center(y);
  const std::vector<double> az = apply_design(n, z_hat);
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = centered.y_tilde[i] - az[i];
  std::vector<double> r = apply_design_transpose(n, v);
  for (double& ri : r) ri /= n;

  const bool l1 = config.penalty.kind == PenaltyKind::L1Limit;
  const double lam_sig = config.lambda_sigma();
  double worst = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    double resid;
    if (z_hat[i] != 0.0) {
      const double sgn = z_hat[i] > 0.0 ? 1.0 : -1.0;
      if (l1) {
        resid = std::abs(r[i] - config.lambda * sgn);
      } else {
        const double grad =
            sgn * config.penalty.derivative(std::abs(z_hat[i]) / config.sigma) / config.sigma;
        resid = std::abs(r[i] / lam_sig - grad);
      }
    } else {
      resid = l1 ? std::max(0.0, std::abs(r[i]) - config.lambda)
                 : std::max(0.0, std::abs(r[i]) / lam_sig - 1.0 / config.sigma);
    }
    worst = std::max(worst, resid);
  }
  return worst;
}

std::vector<int> detect_change_points(std::span<const double> z_hat, double y_scale,
                                      double tol_cp) {
  if (!(tol_cp > 0.0)) throw std::invalid_argument("detect_change_points: tol_cp must be positive");
  const double threshold = tol_cp * std::max(1.0, y_scale);
  std::vector<int> cps;
  for (size_t i = 0; i < z_hat.size(); ++i)
    if (std::abs(z_hat[i]) > threshold) cps.push_back(static_cast<int>(i) + 1);
  return cps;
}

} // namespace pwcmm
