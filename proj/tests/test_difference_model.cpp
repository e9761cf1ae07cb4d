#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "pwcmm/dense.hpp"
#include "pwcmm/difference_model.hpp"

using namespace pwcmm;

namespace {

linalg::Matrix dense_design(int n) {
  linalg::Matrix a(n, n - 1);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n - 1; ++j) a(i - 1, j - 1) = design_entry(n, i, j);
  return a;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

} // namespace

TEST_CASE("centering") {
  auto c = center(std::vector<double>{1.0, 1.0, 1.0});
  CHECK(c.y_mean == 1.0);
  for (double v : c.y_tilde) CHECK(v == 0.0);

  c = center(std::vector<double>{0.0, 4.0});
  CHECK(c.y_mean == 2.0);
  CHECK(c.y_tilde[0] == -2.0);
  CHECK(c.y_tilde[1] == 2.0);

  c = center(std::vector<double>{1.0, 2.0, 6.0});
  CHECK(c.y_mean == 3.0);
  CHECK(c.y_tilde == std::vector<double>{-2.0, -1.0, 3.0});

  CHECK_THROWS_AS(center(std::vector<double>{1.0}), std::invalid_argument);
  CHECK_THROWS_AS(center(std::vector<double>{1.0, std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
}

TEST_CASE("design entries follow the two-branch table") {
  std::mt19937_64 rng(5);
  for (int n : {2, 3, 17, 64}) {
    for (int rep = 0; rep < 40; ++rep) {
      const int i = 1 + static_cast<int>(rng() % n);
      const int j = 1 + static_cast<int>(rng() % (n - 1));
      const double expected = i <= j ? double(j - n) / n : double(j) / n;
      CHECK(design_entry(n, i, j) == expected);
    }
  }
  CHECK_THROWS_AS(design_entry(3, 0, 1), std::out_of_range);
  CHECK_THROWS_AS(design_entry(3, 1, 3), std::out_of_range);
}

TEST_CASE("apply_design closed cases") {
  auto v = apply_design(3, std::vector<double>{1.0, 0.0});
  CHECK(v[0] == doctest::Approx(-2.0 / 3).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(v[2] == doctest::Approx(1.0 / 3).epsilon(1e-15));

  v = apply_design(3, std::vector<double>{0.0, 1.0});
  CHECK(v[0] == doctest::Approx(-1.0 / 3).epsilon(1e-15));
  CHECK(v[1] == doctest::Approx(-1.0 / 3).epsilon(1e-15));
  CHECK(v[2] == doctest::Approx(2.0 / 3).epsilon(1e-15));

  v = apply_design(5, std::vector<double>(4, 0.0));
  for (double x : v) CHECK(x == 0.0);

  CHECK_THROWS_AS(apply_design(3, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("fast products agree with the dense matrix and are mean-free") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int n : {2, 3, 9, 41}) {
    const auto a = dense_design(n);
    std::vector<double> z(n - 1), v(n);
    for (double& x : z) x = gauss(rng);
    for (double& x : v) x = gauss(rng);

    const auto az = apply_design(n, z);
    const auto az_dense = linalg::matvec(a, z);
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
      CHECK(az[i] == doctest::Approx(az_dense[i]).epsilon(1e-12));
      mean += az[i];
    }
    CHECK(std::abs(mean / n) <= 1e-12 * std::max(1.0, norm2(z)));

    const auto atv = apply_design_transpose(n, v);
    const auto atv_dense = linalg::matvec(linalg::transpose(a), v);
    for (int j = 0; j < n - 1; ++j)
      CHECK(atv[j] == doctest::Approx(atv_dense[j]).epsilon(1e-12));
  }
}

TEST_CASE("reconstruction") {
  SUBCASE("zero differences give the constant mean") {
    const auto x = reconstruct_x(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 5.0, 3.0});
    for (double v : x) CHECK(v == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("hand case n=2") {
    const auto x = reconstruct_x(std::vector<double>{2.0}, std::vector<double>{0.0, 4.0});
    CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(x[1] == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("diff of reconstruction is the identity") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss(0.0, 4.0);
    for (int n : {2, 7, 100}) {
      std::vector<double> z(n - 1), y(n);
      for (double& v : z) v = gauss(rng);
      for (double& v : y) v = gauss(rng);
      const auto x = reconstruct_x(z, y);
      for (int i = 0; i < n - 1; ++i) CHECK(std::abs((x[i + 1] - x[i]) - z[i]) <= 1e-12);
      double mx = 0.0, my = 0.0;
      for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
      }
      CHECK(mx / n == doctest::Approx(my / n).epsilon(1e-12));
    }
  }
}

TEST_CASE("column norms") {
  CHECK(column_norm_sq(3, 1) == doctest::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(column_norm_sq(4, 2) == doctest::Approx(1.0).epsilon(1e-15));
  for (int n : {3, 10, 57}) {
    for (int j = 1; j <= n - 1; ++j) {
      double explicit_sq = 0.0;
      for (int i = 1; i <= n; ++i) explicit_sq += design_entry(n, i, j) * design_entry(n, i, j);
      CHECK(column_norm_sq(n, j) == doctest::Approx(explicit_sq).epsilon(1e-13));
      CHECK(column_norm_sq(n, j) <= n / 4.0 + 1e-12);
    }
  }
  CHECK_THROWS_AS(column_norm_sq(5, 0), std::out_of_range);
  CHECK_THROWS_AS(column_norm_sq(5, 5), std::out_of_range);
}

TEST_CASE("smallest gram eigenvalue") {
  CHECK(smallest_gram_eigenvalue(2) == doctest::Approx(0.5).epsilon(1e-12));

  SUBCASE("dense eigensolver oracle for small n") {
    for (int n = 2; n <= 40; ++n) {
      const auto a = dense_design(n);
      const auto gram = linalg::matmul(linalg::transpose(a), a);
      const double oracle = linalg::symmetric_eigenvalues(gram).front();
      CHECK(smallest_gram_eigenvalue(n) == doctest::Approx(oracle).epsilon(1e-10));
    }
  }
  SUBCASE("trigonometric closed form") {
    for (int n : {2, 3, 10, 200, 2000}) {
      const double cf = 1.0 / (4.0 * std::pow(std::cos(M_PI / (2.0 * n)), 2));
      CHECK(smallest_gram_eigenvalue(n) == doctest::Approx(cf).epsilon(1e-11));
    }
  }
  SUBCASE("monotone, bounded in (1/4, 1/2]") {
    double prev = 0.5 + 1e-12;
    for (int n = 2; n <= 200; ++n) {
      const double s = smallest_gram_eigenvalue(n);
      CHECK(s <= prev + 1e-10);
      CHECK(s > 0.25);
      CHECK(s <= 0.5);
      prev = s;
    }
  }
  CHECK_THROWS_AS(smallest_gram_eigenvalue(1), std::invalid_argument);
}

TEST_CASE("convexity certificate") {
  // sigma = 4 lambda n with lambda_sigma = lambda sigma reduces the condition
  // to sigma > lambda n / s_min, comfortably true at the default setting.
  const int n = 200;
  const double lambda = 4.0 * std::sqrt(1.0 / n);
  const double sigma = 4.0 * lambda * n;
  auto r = check_convexity(n, lambda * sigma, sigma, 1.0);
  CHECK(r.verdict == ConvexityVerdict::StrictlyConvex);
  CHECK(r.margin > 0.0);

  // boundary: sigma^2 exactly equal to the bound is not certified. n = 2,
  // mu = 1, sigma = 2 and lambda_sigma = 2 s_min make every step a power-of-
  // two scaling, so the margin is exactly 0.
  const double s2 = smallest_gram_eigenvalue(2);
  auto rb = check_convexity(2, 2.0 * s2, 2.0, 1.0);
  CHECK(rb.margin == 0.0);
  CHECK(rb.verdict == ConvexityVerdict::NotCertified);

  auto r0 = check_convexity(n, lambda * 1e-8, 1e-8, 1.0);
  CHECK(r0.verdict == ConvexityVerdict::NotCertified);

  CHECK_THROWS_AS(check_convexity(n, 0.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(check_convexity(n, 1.0, -1.0, 1.0), std::invalid_argument);
}
