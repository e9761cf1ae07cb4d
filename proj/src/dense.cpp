#include "pwcmm/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pwcmm::linalg {

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::invalid_argument("matmul: dimension mismatch");
  Matrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols, a.rows);
  for (int i = 0; i < a.rows; ++i)
    for (int j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols != static_cast<int>(x.size())) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

Matrix spd_inverse(const Matrix& a) {
  if (a.rows != a.cols) throw std::invalid_argument("spd_inverse: matrix not square");
  const int m = a.rows;
  Matrix l(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0)) throw std::runtime_error("spd_inverse: matrix not positive definite");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  // Solve L L^T X = I column by column.
  Matrix inv(m, m);
  std::vector<double> y(m);
  for (int c = 0; c < m; ++c) {
    for (int i = 0; i < m; ++i) {
      double s = (i == c) ? 1.0 : 0.0;
      for (int k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i);
    }
    for (int i = m - 1; i >= 0; --i) {
      double s = y[i];
      for (int k = i + 1; k < m; ++k) s -= l(k, i) * inv(k, c);
      inv(i, c) = s / l(i, i);
    }
  }
  return inv;
}

double inf_norm(const Matrix& a) {
  double best = 0.0;
  for (int i = 0; i < a.rows; ++i) {
    double row = 0.0;
    for (int j = 0; j < a.cols; ++j) row += std::abs(a(i, j));
    best = std::max(best, row);
  }
  return best;
}

std::vector<double> symmetric_eigenvalues(Matrix a) {
  if (a.rows != a.cols) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
  const int m = a.rows;
  const int max_sweeps = 64;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30 * (1.0 + inf_norm(a))) break;
    for (int p = 0; p < m - 1; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < m; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < m; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(m);
  for (int i = 0; i < m; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

namespace {

// Number of eigenvalues of tridiag(d, e) strictly below x (LDL^T sign count).
int sturm_count(std::span<const double> d, std::span<const double> e, double x) {
  const int m = static_cast<int>(d.size());
  int count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (int i = 1; i < m; ++i) {
    if (q == 0.0) q = 1e-300;
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

} // namespace

double tridiagonal_eigenvalue(std::span<const double> d, std::span<const double> e, int k) {
  const int m = static_cast<int>(d.size());
  if (m == 0) throw std::invalid_argument("tridiagonal_eigenvalue: empty matrix");
  if (e.size() + 1 != d.size()) throw std::invalid_argument("tridiagonal_eigenvalue: bad off-diagonal size");
  if (k < 1 || k > m) throw std::invalid_argument("tridiagonal_eigenvalue: k out of range");
  double lo = d[0], hi = d[0];
  for (int i = 0; i < m; ++i) {
    const double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < m ? std::abs(e[i]) : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }
  const double span0 = hi - lo;
  lo -= 1e-12 * (1.0 + span0);
  hi += 1e-12 * (1.0 + span0);
  while (hi - lo > 1e-14 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)))) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (sturm_count(d, e, mid) >= k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace pwcmm::linalg
