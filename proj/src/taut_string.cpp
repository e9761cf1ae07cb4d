#include "pwcmm/taut_string.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pwcmm {

namespace {

struct HullPoint {
  int i;
  double v;
};

void validate(const WeightedTvProblem& p) {
  const size_t n = p.y.size();
  if (n < 1) throw std::invalid_argument("weighted TV: signal must be nonempty");
  if (p.edge_weights.size() + 1 != n)
    throw std::invalid_argument("weighted TV: expected n-1 edge weights");
  for (double w : p.edge_weights)
    if (!(w > 0.0) || !std::isfinite(w))
      throw std::invalid_argument("weighted TV: edge weights must be positive and finite");
}

} // namespace

// The string runs from (0, 0) to (n, r_n) where r_k is the running sum of y,
// constrained to r_k - w_k <= S_k <= r_k + w_k at interior k. Its slopes are
// the minimizer: x_i = S_i - S_{i-1}. From the current fixed point we grow
// the greatest convex minorant of the upper wall and the least concave
// majorant of the lower wall; while their first-segment slopes leave a
// feasible straight exit the string is undecided, and when they cross it
// must bend at the nearer envelope breakpoint, which becomes the next fixed
// point. The segment walk restarts there, so the worst case is quadratic but
// the typical cost stays near linear (one pass per produced flat segment).
std::vector<double> solve_weighted_tv(const WeightedTvProblem& problem) {
  validate(problem);
  const int n = static_cast<int>(problem.y.size());
  if (n == 1) return problem.y;

  std::vector<double> upper(n + 1), lower(n + 1);
  long double acc = 0.0L;
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(problem.y[i]))
      throw std::invalid_argument("weighted TV: signal contains a non-finite value");
    acc += problem.y[i];
    const double r = static_cast<double>(acc);
    if (i + 1 < n) {
      upper[i + 1] = r + problem.edge_weights[i];
      lower[i + 1] = r - problem.edge_weights[i];
    } else {
      upper[n] = lower[n] = r;  // endpoint is pinned
    }
  }

  std::vector<double> x(n);
  std::vector<HullPoint> hull_u, hull_l;
  hull_u.reserve(n + 1);
  hull_l.reserve(n + 1);

  int origin = 0;
  double origin_v = 0.0;
  while (origin < n) {
    hull_u.assign(1, {origin, origin_v});
    hull_l.assign(1, {origin, origin_v});
    bool bent = false;
    for (int k = origin + 1; k <= n; ++k) {
      // Convex minorant of upper points: slopes along the hull increase.
      while (hull_u.size() >= 2) {
        const HullPoint& a = hull_u[hull_u.size() - 2];
        const HullPoint& b = hull_u.back();
        if ((upper[k] - a.v) * (b.i - a.i) <= (b.v - a.v) * (k - a.i))
          hull_u.pop_back();
        else
          break;
      }
      hull_u.push_back({k, upper[k]});
      // Concave majorant of lower points: slopes decrease.
      while (hull_l.size() >= 2) {
        const HullPoint& a = hull_l[hull_l.size() - 2];
        const HullPoint& b = hull_l.back();
        if ((lower[k] - a.v) * (b.i - a.i) >= (b.v - a.v) * (k - a.i))
          hull_l.pop_back();
        else
          break;
      }
      hull_l.push_back({k, lower[k]});

      const HullPoint& fu = hull_u[1];
      const HullPoint& fl = hull_l[1];
      if ((fl.v - origin_v) * (fu.i - origin) > (fu.v - origin_v) * (fl.i - origin)) {
        // No straight exit: bend at the nearer breakpoint (ties fall to the
        // lower wall).
        const HullPoint bend = fu.i < fl.i ? fu : fl;
        const double slope = (bend.v - origin_v) / (bend.i - origin);
        for (int i = origin; i < bend.i; ++i) x[i] = slope;
        origin = bend.i;
        origin_v = bend.v;
        bent = true;
        break;
      }
    }
    if (!bent) {
      const double slope = (upper[n] - origin_v) / (n - origin);
      for (int i = origin; i < n; ++i) x[i] = slope;
      origin = n;
    }
  }
  return x;
}

std::vector<double> solve_l1_filter(std::span<const double> y, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("l1 filter: lambda must be positive");
  const size_t n = y.size();
  WeightedTvProblem p;
  p.y.assign(y.begin(), y.end());
  p.edge_weights.assign(n > 0 ? n - 1 : 0, static_cast<double>(n) * lambda);
  return solve_weighted_tv(p);
}

double tv_optimality_residual(const WeightedTvProblem& problem, std::span<const double> x) {
  validate(problem);
  if (x.size() != problem.y.size())
    throw std::invalid_argument("optimality residual: dimension mismatch");
  const int n = static_cast<int>(x.size());
  double worst = 0.0;
  long double s = 0.0L;
  for (int k = 0; k < n; ++k) {
    s += x[k] - problem.y[k];
    const double sk = static_cast<double>(s);
    if (k == n - 1) {
      worst = std::max(worst, std::abs(sk));
      break;
    }
    const double w = problem.edge_weights[k];
    if (x[k + 1] > x[k])
      worst = std::max(worst, std::abs(sk - w));
    else if (x[k + 1] < x[k])
      worst = std::max(worst, std::abs(sk + w));
    else
      worst = std::max(worst, std::abs(sk) - w);
  }
  return std::max(worst, 0.0);
}

} // namespace pwcmm
