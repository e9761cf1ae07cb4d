#pragma once

#include <string>
#include <string_view>

namespace pwcmm {

// Concave sparsity penalties f used as f(|dx|/sigma) on the first differences.
// All families satisfy f(0) = 0, f'(0) = 1, f'' >= -mu on [0, inf), and f is
// nondecreasing and concave there. L1Limit is the degenerate sigma -> inf case
// where every reweighting weight equals 1 and the penalty reduces to |dx|.
enum class PenaltyKind {
  Exponential,  // f(x) = 1 - exp(-x),         mu = 1
  Logarithmic,  // f(x) = log(1 + x),          mu = 1
  Arctangent,   // f(x) = (2/pi) atan(pi x/2), mu = 3 sqrt(3) pi / 16
  L1Limit,      // weights identically 1,      mu = 0
};

struct PenaltySpec {
  PenaltyKind kind;
  double mu;  // curvature lower bound: f''(x) >= -mu for x >= 0

  static PenaltySpec make(PenaltyKind kind);

  // f(x) for x >= 0. Throws std::domain_error for x < 0 and
  // std::invalid_argument for L1Limit (no finite f exists there).
  double value(double x) const;

  // f'(x) for x >= 0; equals 1 at x = 0. L1Limit returns 1 for every x.
  double derivative(double x) const;

  // f(|x|/sigma); for L1Limit returns |x|/sigma so that
  // lambda_sigma * scaled_value == lambda * |x| holds uniformly.
  double scaled_value(double x, double sigma) const;
};

// Maps "exp" | "log" | "atan" | "l1" to a kind; throws on unknown names.
PenaltyKind penalty_kind_from_name(std::string_view name);
std::string penalty_name(PenaltyKind kind);

} // namespace pwcmm
