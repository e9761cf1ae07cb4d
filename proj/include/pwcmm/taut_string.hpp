#pragma once

#include <span>
#include <vector>

namespace pwcmm {

// Weighted 1-D total-variation proximal problem
//
//   min_x  (1/2) ||y - x||^2 + sum_i w_i |x_{i+1} - x_i|,
//
// the inner step of each reweighting iteration. Note the quadratic term is
// *unnormalized*: an objective written as (1/(2n))||y - x||^2 + sum c_i |dx_i|
// maps onto this form with edge_weights = n * c_i.
struct WeightedTvProblem {
  std::vector<double> y;
  std::vector<double> edge_weights;  // length n-1, strictly positive
};

// Exact minimizer via the weighted taut string: thread the tightest path
// through the tube of half-width w_k around the running-sum polyline of y,
// restarting at wall contacts; the path's slopes are the solution.
std::vector<double> solve_weighted_tv(const WeightedTvProblem& problem);

// Uniform-weight convenience form: edge_weights = n * lambda, i.e. the
// minimizer of (1/(2n))||y - x||^2 + lambda * sum |x_{i+1} - x_i|.
std::vector<double> solve_l1_filter(std::span<const double> y, double lambda);

// Independent optimality verifier (kept apart from the solver on purpose).
// With s_k = sum_{i<=k} (x_i - y_i), the exact minimizer satisfies
//   |s_k| <= w_k,  s_k = +w_k where x_{k+1} > x_k,  s_k = -w_k where
//   x_{k+1} < x_k,  and s_n = 0.
// Returns the largest violation of that system (0 for the exact minimizer).
double tv_optimality_residual(const WeightedTvProblem& problem, std::span<const double> x);

} // namespace pwcmm
