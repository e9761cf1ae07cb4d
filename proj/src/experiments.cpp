#include "pwcmm/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "pwcmm/mm_solver.hpp"
#include "pwcmm/taut_string.hpp"

namespace pwcmm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct ResolvedBench {
  double lambda;
  double sigma;       // 0 when derived per method
  StairCaseSpec stairs;  // amplitude filled per run
  std::vector<int> true_support;
};

ResolvedBench resolve(const BenchConfig& config) {
  if (config.n < 8) throw std::invalid_argument("bench: n must be at least 8");
  ResolvedBench r;
  if (config.lambda > 0.0) {
    r.lambda = config.lambda;
  } else {
    if (!(config.sigma_w > 0.0))
      throw std::invalid_argument("bench: either lambda or a positive sigma_w is required");
    r.lambda = 4.0 * std::sqrt(config.sigma_w * config.sigma_w / config.n);
  }
  r.sigma = config.sigma;
  r.stairs.n = config.n;
  r.stairs.first_break = config.n / 4;
  r.stairs.second_break = config.n / 2;
  r.true_support = {r.stairs.first_break, r.stairs.second_break};
  return r;
}

// One denoising run; the l1 method is a single exact solve, everything else
// goes through the reweighting loop. The automatic sigma is 4 lambda n mu,
// which is the reference setting for the mu = 1 families and the minimal
// curvature correction keeping the comparator penalties strictly convex
// (4 lambda n mu > lambda n mu / s_min holds since s_min > 1/4).
std::vector<double> run_method(std::span<const double> y, PenaltyKind kind,
                               const ResolvedBench& r, const BenchConfig& config) {
  if (kind == PenaltyKind::L1Limit) {
    return solve_l1_filter(y, r.lambda);
  }
  SolverConfig sc;
  sc.lambda = r.lambda;
  sc.penalty = PenaltySpec::make(kind);
  sc.sigma = r.sigma > 0.0 ? r.sigma : 4.0 * r.lambda * config.n * sc.penalty.mu;
  sc.epsilon = config.epsilon;
  sc.max_iter = config.max_iter;
  return solve_mm(y, sc).x_hat;
}

} // namespace

std::vector<double> generate_staircase(const StairCaseSpec& spec) {
  if (!(spec.amplitude > 0.0)) throw std::invalid_argument("staircase: amplitude must be positive");
  if (spec.first_break < 1 || spec.second_break <= spec.first_break || spec.n <= spec.second_break)
    throw std::invalid_argument("staircase: need 1 <= first_break < second_break < n");
  std::vector<double> x(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    const int level = i < spec.first_break ? 1 : i < spec.second_break ? 2 : 3;
    x[i] = level * spec.amplitude;
  }
  return x;
}

std::vector<double> add_noise(std::span<const double> x_star, double sigma_w,
                              std::uint64_t seed) {
  if (sigma_w < 0.0) throw std::invalid_argument("add_noise: sigma_w must be nonnegative");
  std::vector<double> y(x_star.begin(), x_star.end());
  if (sigma_w == 0.0) return y;
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, sigma_w);
  for (double& v : y) v += normal(engine);
  return y;
}

std::uint64_t trial_seed(std::uint64_t master_seed, int amplitude_index, int trial_index) {
  std::uint64_t s = splitmix64(master_seed ^ (0xA5A5A5A5A5A5A5A5ULL + amplitude_index));
  return splitmix64(s ^ (0xC3C3C3C3C3C3C3C3ULL + static_cast<std::uint64_t>(trial_index)));
}

std::vector<double> log_spaced(double a_min, double a_max, int points) {
  if (!(a_min > 0.0) || !(a_max >= a_min) || points < 1)
    throw std::invalid_argument("log_spaced: need 0 < a_min <= a_max and points >= 1");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = a_min;
    return out;
  }
  const double la = std::log(a_min), lb = std::log(a_max);
  for (int i = 0; i < points; ++i) out[i] = std::exp(la + (lb - la) * i / (points - 1));
  return out;
}

McResult run_sweep(std::span<const double> amplitudes, int trials,
                   const std::vector<std::string>& methods, const BenchConfig& config,
                   std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  if (amplitudes.empty()) throw std::invalid_argument("run_sweep: empty amplitude grid");
  for (size_t i = 0; i < amplitudes.size(); ++i)
    if (!(amplitudes[i] > 0.0) || (i > 0 && amplitudes[i] < amplitudes[i - 1]))
      throw std::invalid_argument("run_sweep: amplitudes must be positive and ascending");
  std::vector<PenaltyKind> kinds;
  for (const auto& m : methods) kinds.push_back(penalty_kind_from_name(m));

  ResolvedBench r = resolve(config);
  McResult res;
  res.amplitudes.assign(amplitudes.begin(), amplitudes.end());
  res.methods = methods;
  res.trials = trials;
  res.seed = seed;
  res.success_rate.assign(methods.size(), std::vector<double>(amplitudes.size(), 0.0));
  res.mean_runtime_ms.assign(methods.size(), 0.0);

  std::vector<long long> runtime_ns(methods.size(), 0);
  for (size_t ai = 0; ai < amplitudes.size(); ++ai) {
    r.stairs.amplitude = amplitudes[ai];
    const std::vector<double> x_star = generate_staircase(r.stairs);
    std::vector<int> successes(methods.size(), 0);
    for (int ti = 0; ti < trials; ++ti) {
      const std::vector<double> y =
          add_noise(x_star, config.sigma_w, trial_seed(seed, static_cast<int>(ai), ti));
      const double y_scale = inf_norm(y);
      for (size_t mi = 0; mi < methods.size(); ++mi) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::vector<double> x = run_method(y, kinds[mi], r, config);
        const auto t1 = std::chrono::steady_clock::now();
        runtime_ns[mi] += std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count();
        std::vector<double> z(x.size() - 1);
        for (size_t i = 0; i + 1 < x.size(); ++i) z[i] = x[i + 1] - x[i];
        const std::vector<int> cps = detect_change_points(z, y_scale);
        if (cps == r.true_support) ++successes[mi];
      }
    }
    for (size_t mi = 0; mi < methods.size(); ++mi)
      res.success_rate[mi][ai] = static_cast<double>(successes[mi]) / trials;
  }
  const double runs = static_cast<double>(trials) * amplitudes.size();
  for (size_t mi = 0; mi < methods.size(); ++mi)
    res.mean_runtime_ms[mi] = runtime_ns[mi] / runs / 1e6;
  return res;
}

AverageResult run_average(double amplitude, int trials, const std::vector<std::string>& methods,
                          const BenchConfig& config, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("run_average: trials must be >= 1");
  std::vector<PenaltyKind> kinds;
  for (const auto& m : methods) kinds.push_back(penalty_kind_from_name(m));

  ResolvedBench r = resolve(config);
  r.stairs.amplitude = amplitude;
  AverageResult res;
  res.x_star = generate_staircase(r.stairs);
  res.methods = methods;
  res.trials = trials;
  res.seed = seed;
  res.mean_estimate.assign(methods.size(), std::vector<double>(config.n, 0.0));

  for (int ti = 0; ti < trials; ++ti) {
    const std::vector<double> y = add_noise(res.x_star, config.sigma_w, trial_seed(seed, 0, ti));
    for (size_t mi = 0; mi < methods.size(); ++mi) {
      const std::vector<double> x = run_method(y, kinds[mi], r, config);
      for (int i = 0; i < config.n; ++i) res.mean_estimate[mi][i] += x[i];
    }
  }
  for (auto& est : res.mean_estimate)
    for (double& v : est) v /= trials;
  return res;
}

} // namespace pwcmm
