#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "pwcmm/difference_model.hpp"
#include "pwcmm/experiments.hpp"
#include "pwcmm/guarantees.hpp"
#include "pwcmm/mm_solver.hpp"

using namespace pwcmm;
using linalg::Matrix;

namespace {

std::vector<int> random_support(std::mt19937_64& rng, int n, int max_size) {
  const int t = 1 + static_cast<int>(rng() % max_size);
  std::vector<int> all(n - 1);
  for (int j = 0; j < n - 1; ++j) all[j] = j + 1;
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<int> tau(all.begin(), all.begin() + std::min<int>(t, n - 2));
  std::sort(tau.begin(), tau.end());
  return tau;
}

double bs_inf(const Matrix& b, const std::vector<double>& v) {
  double worst = 0.0;
  for (int i = 0; i < b.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < b.cols; ++j) s += b(i, j) * v[j];
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

} // namespace

TEST_CASE("single-support case n=3") {
  const std::vector<int> tau{1};
  const Matrix b = build_irrepresentability_matrix(3, tau);
  REQUIRE(b.rows == 1);
  REQUIRE(b.cols == 1);
  CHECK(b(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(support_gram_smallest_eigenvalue(3, tau) == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("full support has no complement") {
  CHECK_THROWS_AS(build_irrepresentability_matrix(4, std::vector<int>{1, 2, 3}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_irrepresentability_matrix(4, std::vector<int>{0, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_irrepresentability_matrix(4, std::vector<int>{2, 2}),
                  std::invalid_argument);
}

TEST_CASE("row structure: at most two nonzeros, in [0,1), pairs sum to 1") {
  std::mt19937_64 rng(909);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 4 + static_cast<int>(rng() % 47);
    const auto tau = random_support(rng, n, 6);
    const Matrix b = build_irrepresentability_matrix(n, tau);
    for (int i = 0; i < b.rows; ++i) {
      int nonzeros = 0;
      double sum = 0.0;
      for (int j = 0; j < b.cols; ++j) {
        const double v = b(i, j);
        CHECK(v >= -1e-10);
        CHECK(v < 1.0);
        if (std::abs(v) > 1e-10) {
          ++nonzeros;
          sum += v;
        }
      }
      CHECK(nonzeros <= 2);
      if (nonzeros == 2) CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("rows interpolate between neighbouring support positions") {
  // For tau_p < j < tau_{p+1} the row at j carries the linear interpolation
  // weights ((tau_{p+1}-j), (j-tau_p)) / (tau_{p+1}-tau_p); outside the
  // support range a single entry j/tau_1 or (n-j)/(n-tau_last) remains.
  const int n = 12;
  const std::vector<int> tau{3, 8};
  const Matrix b = build_irrepresentability_matrix(n, tau);
  int row = 0;
  for (int j = 1; j <= n - 1; ++j) {
    if (j == 3 || j == 8) continue;
    if (j < 3) {
      CHECK(b(row, 0) == doctest::Approx(j / 3.0).epsilon(1e-10));
      CHECK(std::abs(b(row, 1)) <= 1e-12);
    } else if (j < 8) {
      CHECK(b(row, 0) == doctest::Approx((8.0 - j) / 5.0).epsilon(1e-10));
      CHECK(b(row, 1) == doctest::Approx((j - 3.0) / 5.0).epsilon(1e-10));
    } else {
      CHECK(std::abs(b(row, 0)) <= 1e-12);
      CHECK(b(row, 1) == doctest::Approx((n - j) / 4.0).epsilon(1e-10));
    }
    ++row;
  }
}

TEST_CASE("irrepresentable quantity at the staircase support") {
  const int n = 200;
  const std::vector<int> tau{50, 100};
  const Matrix b = build_irrepresentability_matrix(n, tau);
  const std::vector<int> same{1, 1}, opposite{1, -1};
  const std::vector<double> ones{1.0, 1.0}, small{0.1, 0.1};

  CHECK(irrepresentable_lhs(b, same, ones) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(irrepresentable_lhs(b, same, small) < 1.0);
  CHECK(irrepresentable_lhs(b, opposite, ones) < 1.0);

  CHECK_THROWS_AS(irrepresentable_lhs(b, same, std::vector<double>{0.5, 1.5}),
                  std::invalid_argument);
  CHECK_THROWS_AS(irrepresentable_lhs(b, std::vector<int>{2, 1}, ones), std::invalid_argument);
}

TEST_CASE("sign-flattening bullets hold on random supports") {
  std::mt19937_64 rng(2718);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const int n = 5 + static_cast<int>(rng() % 46);
    const auto tau = random_support(rng, n, 8);
    const int t = static_cast<int>(tau.size());
    const Matrix b = build_irrepresentability_matrix(n, tau);
    // exhaustive sign vectors
    for (unsigned mask = 0; mask < (1u << t); ++mask) {
      std::vector<double> s(t);
      for (int i = 0; i < t; ++i) s[i] = (mask >> i) & 1 ? 1.0 : -1.0;
      const double base = bs_inf(b, s);
      CHECK(base <= 1.0 + 1e-10);
      std::vector<double> st(t), st_strict(t);
      for (int i = 0; i < t; ++i) {
        const double w = 0.05 + 0.949 * unit(rng);  // strictly inside (0,1)
        st[i] = s[i] * std::min(1.0, w + 0.05);
        st_strict[i] = s[i] * w;
      }
      CHECK(bs_inf(b, st) <= 1.0 + 1e-10);
      // strictly interior weights always land strictly inside, whether the
      // sign vector saturates the bound or not
      CHECK(bs_inf(b, st_strict) < 1.0);
    }
  }
}

TEST_CASE("exponential weights shrink the lhs as jumps grow") {
  const int n = 80;
  const std::vector<int> tau{20, 40};
  const std::vector<int> signs{1, 1};
  const Matrix b = build_irrepresentability_matrix(n, tau);
  const double sigma = 30.0;
  double prev = 2.0;
  for (double magnitude : {0.5, 2.0, 8.0, 32.0}) {
    std::vector<double> w(2, std::exp(-magnitude / sigma));
    const double lhs = irrepresentable_lhs(b, signs, w);
    CHECK(lhs <= prev + 1e-12);
    prev = lhs;
  }
}

TEST_CASE("recovery conditions") {
  const int n = 200;
  const std::vector<int> tau{50, 100};
  const auto exp_pen = PenaltySpec::make(PenaltyKind::Exponential);
  const auto l1_pen = PenaltySpec::make(PenaltyKind::L1Limit);
  const double lambda = 4.0 * std::sqrt(1.0 / n);
  const double sigma = 4.0 * lambda * n;

  std::vector<double> z_star(n - 1, 0.0), z_hat(n - 1, 0.0), w0(n, 0.0);
  z_star[49] = z_star[99] = 20.0;
  z_hat[49] = z_hat[99] = 20.0;

  SUBCASE("noiseless, exponential, large jumps: both conditions hold") {
    const auto rc = exact_recovery_conditions(n, tau, z_star, z_hat, w0, lambda, sigma, exp_pen);
    CHECK(rc.cond1);
    CHECK(rc.cond2);
    CHECK(rc.cond1_lhs < 1.0);
  }
  SUBCASE("noiseless l1 sits exactly on the boundary") {
    const auto rc = exact_recovery_conditions(n, tau, z_star, z_hat, w0, lambda, sigma, l1_pen);
    CHECK(rc.cond1);  // lhs == 1 still passes the non-strict condition
    CHECK(rc.cond1_boundary);
    CHECK(rc.cond1_lhs == doctest::Approx(1.0).epsilon(1e-10));
    // consistency: equals ||B signs||_inf exactly
    const Matrix b = build_irrepresentability_matrix(n, tau);
    const double direct = irrepresentable_lhs(b, std::vector<int>{1, 1}, std::vector<double>{1.0, 1.0});
    CHECK(rc.cond1_lhs == doctest::Approx(direct).epsilon(1e-12));
  }
  SUBCASE("overwhelming noise kills the first condition") {
    std::vector<double> w_big(n, 0.0);
    std::mt19937_64 rng(6);
    for (double& v : w_big) v = (rng() % 2 ? 1.0 : -1.0) * 1e3 * lambda * n;
    const auto rc =
        exact_recovery_conditions(n, tau, z_star, z_hat, w_big, lambda, sigma, exp_pen);
    CHECK(!rc.cond1);
  }
  SUBCASE("off-support z_star is rejected") {
    auto bad = z_star;
    bad[10] = 1.0;
    CHECK_THROWS_AS(exact_recovery_conditions(n, tau, bad, z_hat, w0, lambda, sigma, exp_pen),
                    std::invalid_argument);
  }
}

TEST_CASE("noisy first condition matches a fully dense reconstruction") {
  // Second route: materialize A_t, A_tc and the projector I - A_t G^{-1} A_t^T
  // as explicit matrices and evaluate the whole expression densely.
  std::mt19937_64 rng(62);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 15; ++rep) {
    const int n = 8 + static_cast<int>(rng() % 40);
    const auto tau = random_support(rng, n, 4);
    const double lambda = 0.1 + std::uniform_real_distribution<double>()(rng);
    const double sigma = 5.0 + 40.0 * std::uniform_real_distribution<double>()(rng);
    const auto pen = PenaltySpec::make(PenaltyKind::Exponential);

    std::vector<double> z_star(n - 1, 0.0), z_hat(n - 1, 0.0), w(n);
    for (int t : tau) {
      const double mag = 0.5 + 10.0 * std::uniform_real_distribution<double>()(rng);
      const double sgn = rng() % 2 ? 1.0 : -1.0;
      z_star[t - 1] = sgn * mag;
      z_hat[t - 1] = sgn * (mag + 0.3 * gauss(rng));
    }
    for (double& v : w) v = gauss(rng);

    const auto rc = exact_recovery_conditions(n, tau, z_star, z_hat, w, lambda, sigma, pen);

    const int t = static_cast<int>(tau.size());
    Matrix at(n, t);
    for (int c = 0; c < t; ++c)
      for (int i = 0; i < n; ++i) at(i, c) = design_entry(n, i + 1, tau[c]);
    std::vector<int> tau_c;
    for (int j = 1; j <= n - 1; ++j)
      if (std::find(tau.begin(), tau.end(), j) == tau.end()) tau_c.push_back(j);
    Matrix atc(n, static_cast<int>(tau_c.size()));
    for (size_t c = 0; c < tau_c.size(); ++c)
      for (int i = 0; i < n; ++i) atc(i, static_cast<int>(c)) = design_entry(n, i + 1, tau_c[c]);
    const Matrix ginv = linalg::spd_inverse(linalg::matmul(linalg::transpose(at), at));
    // projector
    Matrix proj = linalg::matmul(linalg::matmul(at, ginv), linalg::transpose(at));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) proj(i, j) = (i == j ? 1.0 : 0.0) - proj(i, j);
    std::vector<double> u(t);
    for (int i = 0; i < t; ++i) {
      const double sgn = z_star[tau[i] - 1] > 0 ? 1.0 : -1.0;
      u[i] = sgn * pen.derivative(std::abs(z_hat[tau[i] - 1]) / sigma) / sigma;
    }
    std::vector<double> inner = linalg::matvec(linalg::matmul(at, ginv), u);
    const std::vector<double> pw = linalg::matvec(proj, std::vector<double>(w.begin(), w.end()));
    for (int i = 0; i < n; ++i) inner[i] = sigma * inner[i] + pw[i] / (lambda * n);
    double dense_lhs = 0.0;
    for (double v : linalg::matvec(linalg::transpose(atc), inner))
      dense_lhs = std::max(dense_lhs, std::abs(v));

    CHECK(rc.cond1_lhs == doctest::Approx(dense_lhs).epsilon(1e-10));
  }
}

TEST_CASE("conditions evaluated at the fit predict its support behavior") {
  // When both conditions hold at the solver's own fit with the true noise,
  // the fitted support must sit inside the true one with matching signs.
  const int n = 200;
  const SolverConfig config = SolverConfig::defaults(n, 1.0, PenaltyKind::Exponential);
  const std::vector<int> tau{50, 100};
  StairCaseSpec spec;
  spec.n = n;
  int asserted = 0;
  for (double a : {3.0, 50.0}) {
    spec.amplitude = a;
    const auto x_star = generate_staircase(spec);
    std::vector<double> z_star(n - 1, 0.0);
    z_star[49] = z_star[99] = a;
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
      const auto y = add_noise(x_star, 1.0, seed);
      std::vector<double> w(n);
      for (int i = 0; i < n; ++i) w[i] = y[i] - x_star[i];
      const auto w_tilde = center(w).y_tilde;
      const PwcFit fit = solve_mm(y, config);
      const auto rc = exact_recovery_conditions(n, tau, z_star, fit.z_hat, w_tilde, config.lambda,
                                                config.sigma, config.penalty);
      if (rc.cond1 && !rc.cond1_boundary && rc.cond2) {
        ++asserted;
        REQUIRE(fit.change_points.size() == 2);
        CHECK(fit.change_points[0] == 50);
        CHECK(fit.change_points[1] == 100);
        CHECK(fit.z_hat[49] > 0.0);
        CHECK(fit.z_hat[99] > 0.0);
      }
    }
  }
  CHECK(asserted >= 10);  // the large-amplitude seeds must mostly qualify
}

TEST_CASE("support gram eigenvalue dominates the full one") {
  std::mt19937_64 rng(515);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 5 + static_cast<int>(rng() % 60);
    const auto tau = random_support(rng, n, 6);
    CHECK(support_gram_smallest_eigenvalue(n, tau) >= smallest_gram_eigenvalue(n) - 1e-10);
  }
  // the full support reproduces s_min exactly
  std::vector<int> full;
  const int n = 40;
  for (int j = 1; j <= n - 1; ++j) full.push_back(j);
  CHECK(support_gram_smallest_eigenvalue(n, full) ==
        doctest::Approx(smallest_gram_eigenvalue(n)).epsilon(1e-9));
}

TEST_CASE("threshold report") {
  const int n = 200;
  SupportSet support;
  support.tau = {50, 100};
  support.signs = {1, 1};
  const double lambda = 4.0 * std::sqrt(1.0 / n);
  const double sigma = 4.0 * lambda * n;

  SUBCASE("l1 thresholds use unit weights") {
    const auto rep = recovery_report(n, support, std::vector<double>{20.0, 20.0}, 1.0, lambda,
                                     sigma, PenaltySpec::make(PenaltyKind::L1Limit), 0.5);
    CHECK(rep.alpha == 1.0);
    CHECK(rep.irrepresentable_lhs == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.gamma == 0.5);
  }
  SUBCASE("exponential alpha is exp(-zmin/sigma)") {
    const std::vector<double> z_hat_tau{5.0 * sigma, 7.0 * sigma};
    const auto rep = recovery_report(n, support, z_hat_tau, 1.0, lambda, sigma,
                                     PenaltySpec::make(PenaltyKind::Exponential), 0.5);
    CHECK(rep.alpha == doctest::Approx(std::exp(-5.0)).epsilon(1e-12));
  }
  SUBCASE("lambda0 hand value and the p1 floor") {
    const auto rep = recovery_report(n, support, std::vector<double>{20.0, 20.0}, 1.0,
                                     0.23018074130013647, sigma,
                                     PenaltySpec::make(PenaltyKind::Exponential), 0.5);
    CHECK(rep.lambda0 == doctest::Approx(0.23018074130013647).epsilon(1e-12));
    // lambda == lambda0 degenerates to p1 = 1 - 2 = -1
    CHECK(rep.p1 == doctest::Approx(-1.0).epsilon(1e-12));
  }
  SUBCASE("automatic gamma uses 1 - lhs") {
    const std::vector<double> z_hat_tau{40.0, 40.0};
    const auto rep = recovery_report(n, support, z_hat_tau, 1.0, lambda, sigma,
                                     PenaltySpec::make(PenaltyKind::Exponential), 0.0);
    CHECK(rep.gamma == doctest::Approx(1.0 - rep.irrepresentable_lhs).epsilon(1e-12));
    CHECK(rep.gamma > 0.0);
  }
  SUBCASE("bad gamma is rejected") {
    CHECK_THROWS_AS(recovery_report(n, support, std::vector<double>{20.0, 20.0}, 1.0, lambda,
                                    sigma, PenaltySpec::make(PenaltyKind::Exponential), 1.5),
                    std::invalid_argument);
  }
}
