#include "pwcmm/penalties.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pwcmm {

namespace {

void require_nonnegative(double x) {
  if (!(x >= 0.0)) throw std::domain_error("penalty argument must be nonnegative");
}

} // namespace

PenaltySpec PenaltySpec::make(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::Exponential: return {kind, 1.0};
    case PenaltyKind::Logarithmic: return {kind, 1.0};
    case PenaltyKind::Arctangent:
      // |f''| of (2/pi) atan(pi x / 2) peaks at x = 2/(pi sqrt(3)).
      return {kind, 3.0 * std::sqrt(3.0) * std::numbers::pi / 16.0};
    case PenaltyKind::L1Limit: return {kind, 0.0};
  }
  throw std::invalid_argument("unknown penalty kind");
}

double PenaltySpec::value(double x) const {
  require_nonnegative(x);
  switch (kind) {
    case PenaltyKind::Exponential: return -std::expm1(-x);
    case PenaltyKind::Logarithmic: return std::log1p(x);
    case PenaltyKind::Arctangent:
      return (2.0 / std::numbers::pi) * std::atan(std::numbers::pi * x / 2.0);
    case PenaltyKind::L1Limit: break;
  }
  throw std::invalid_argument("value() is undefined for the l1 limit kind");
}

double PenaltySpec::derivative(double x) const {
  require_nonnegative(x);
  switch (kind) {
    case PenaltyKind::Exponential: return std::exp(-x);
    case PenaltyKind::Logarithmic: return 1.0 / (1.0 + x);
    case PenaltyKind::Arctangent: {
      const double t = std::numbers::pi * x / 2.0;
      return 1.0 / (1.0 + t * t);
    }
    case PenaltyKind::L1Limit: return 1.0;
  }
  throw std::invalid_argument("unknown penalty kind");
}

double PenaltySpec::scaled_value(double x, double sigma) const {
  if (!(sigma > 0.0)) throw std::domain_error("sigma must be positive");
  const double t = std::abs(x) / sigma;
  if (kind == PenaltyKind::L1Limit) return t;
  return value(t);
}

PenaltyKind penalty_kind_from_name(std::string_view name) {
  if (name == "exp") return PenaltyKind::Exponential;
  if (name == "log") return PenaltyKind::Logarithmic;
  if (name == "atan") return PenaltyKind::Arctangent;
  if (name == "l1") return PenaltyKind::L1Limit;
  throw std::invalid_argument("unknown penalty name: " + std::string(name) +
                              " (expected exp|log|atan|l1)");
}

std::string penalty_name(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::Exponential: return "exp";
    case PenaltyKind::Logarithmic: return "log";
    case PenaltyKind::Arctangent: return "atan";
    case PenaltyKind::L1Limit: return "l1";
  }
  return "?";
}

} // namespace pwcmm
