#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pwcmm/penalties.hpp"

namespace pwcmm {

// Three-level test signal: amplitude on 1..first_break, 2*amplitude up to
// second_break, 3*amplitude to n. Both jumps are upward, the configuration
// where plain l1 filtering stair-cases.
struct StairCaseSpec {
  double amplitude = 1.0;
  int n = 200;
  int first_break = 50;
  int second_break = 100;
};

std::vector<double> generate_staircase(const StairCaseSpec& spec);

// x_star + i.i.d. N(0, sigma_w^2) noise from a seeded generator. Identical
// (seed, length) give identical output within one build.
std::vector<double> add_noise(std::span<const double> x_star, double sigma_w, std::uint64_t seed);

// Counter-based seed splitter so sweeps stay reproducible regardless of
// execution order.
std::uint64_t trial_seed(std::uint64_t master_seed, int amplitude_index, int trial_index);

struct BenchConfig {
  int n = 200;
  double sigma_w = 1.0;
  double epsilon = 1e-4;
  int max_iter = 100;
  double lambda = 0.0;  // 0 = auto: 4 sqrt(sigma_w^2/n)
  double sigma = 0.0;   // 0 = auto: 4 lambda n
};

struct McResult {
  std::vector<double> amplitudes;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> success_rate;  // [method][amplitude]
  std::vector<double> mean_runtime_ms;            // [method]
  int trials = 0;
  std::uint64_t seed = 0;
};

// Monte-Carlo success-rate sweep over jump amplitudes. Success means the
// detected change-point set equals the true one exactly; any extra or missing
// index counts as failure. Methods are penalty names ("l1", "exp", "log",
// "atan"); every method sees the same noise realization per (amplitude,
// trial).
McResult run_sweep(std::span<const double> amplitudes, int trials,
                   const std::vector<std::string>& methods, const BenchConfig& config,
                   std::uint64_t seed);

// Logarithmic grid from a_min to a_max inclusive.
std::vector<double> log_spaced(double a_min, double a_max, int points);

struct AverageResult {
  std::vector<double> x_star;
  std::vector<std::string> methods;
  std::vector<std::vector<double>> mean_estimate;  // [method][index]
  int trials = 0;
  std::uint64_t seed = 0;
};

// Componentwise mean of the fitted signals across noise realizations.
AverageResult run_average(double amplitude, int trials, const std::vector<std::string>& methods,
                          const BenchConfig& config, std::uint64_t seed);

} // namespace pwcmm
