#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pwcmm/csv_io.hpp"
#include "pwcmm/difference_model.hpp"
#include "pwcmm/experiments.hpp"
#include "pwcmm/guarantees.hpp"
#include "pwcmm/mm_solver.hpp"
#include "pwcmm/penalties.hpp"
#include "pwcmm/version.hpp"

namespace {

using namespace pwcmm;

std::uint64_t env_seed() {
  if (const char* s = std::getenv("PWCMM_SEED")) {
    try {
      return std::stoull(s);
    } catch (...) {
      std::cerr << "warning: ignoring non-numeric PWCMM_SEED\n";
    }
  }
  return 42;
}

std::vector<int> parse_index_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  if (out.empty()) throw CLI::ValidationError("--tau", "expected a comma-separated index list");
  return out;
}

std::vector<int> parse_sign_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "+" || tok == "+1" || tok == "1")
      out.push_back(1);
    else if (tok == "-" || tok == "-1")
      out.push_back(-1);
    else
      throw CLI::ValidationError("--signs", "expected entries like +,- (got '" + tok + "')");
  }
  return out;
}

std::vector<std::string> parse_method_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

struct DenoiseArgs {
  std::string input;
  std::string output = "fit.csv";
  double lambda = 0.0;
  double sigma = 0.0;
  double sigma_w = 0.0;
  std::string penalty = "exp";
  double epsilon = 1e-4;
  int max_iter = 100;
  bool force = false;
};

void write_gnuplot_sweep(const std::string& csv_path, const std::vector<std::string>& methods) {
  std::filesystem::path gp(csv_path);
  gp.replace_extension(".gp");
  std::ofstream out(gp);
  out << "# gnuplot template emitted by pwcmm " << kVersion << "\n"
      << "set datafile separator ','\n"
      << "set logscale x\n"
      << "set xlabel 'jump amplitude a'\n"
      << "set ylabel 'exact recovery rate'\n"
      << "set yrange [-0.05:1.05]\n"
      << "set key bottom right\n"
      << "plot ";
  for (size_t i = 0; i < methods.size(); ++i) {
    out << "'" << csv_path << "' using 1:" << i + 2 << " with linespoints title '" << methods[i]
        << "'";
    if (i + 1 < methods.size()) out << ", \\\n     ";
  }
  out << "\n";
}

void write_gnuplot_average(const std::string& csv_path, const std::vector<std::string>& methods) {
  std::filesystem::path gp(csv_path);
  gp.replace_extension(".gp");
  std::ofstream out(gp);
  out << "# gnuplot template emitted by pwcmm " << kVersion << "\n"
      << "set datafile separator ','\n"
      << "set xlabel 'sample index'\n"
      << "set ylabel 'mean estimate'\n"
      << "set key top left\n"
      << "plot '" << csv_path << "' using 1:2 with lines lw 2 title 'truth'";
  for (size_t i = 0; i < methods.size(); ++i)
    out << ", \\\n     '" << csv_path << "' using 1:" << i + 3 << " with lines title '"
        << methods[i] << "'";
  out << "\n";
}

int run_denoise(const DenoiseArgs& args) {
  const std::vector<double> y = read_signal_csv(args.input);
  const int n = static_cast<int>(y.size());

  SolverConfig config;
  if (args.lambda > 0.0) {
    config.lambda = args.lambda;
  } else if (args.sigma_w > 0.0) {
    config.lambda = 4.0 * std::sqrt(args.sigma_w * args.sigma_w / n);
  } else {
    throw CLI::ValidationError("denoise", "one of --lambda or --sigma-w is required");
  }
  config.penalty = PenaltySpec::make(penalty_kind_from_name(args.penalty));
  config.sigma = args.sigma > 0.0
                     ? args.sigma
                     : 4.0 * config.lambda * n * (config.penalty.mu > 0.0 ? config.penalty.mu : 1.0);
  config.epsilon = args.epsilon;
  config.max_iter = args.max_iter;
  config.force = args.force;

  const PwcFit fit = solve_mm(y, config);

  std::ofstream out(args.output);
  if (!out) throw std::runtime_error("cannot write " + args.output);
  out << "# pwcmm denoise " << kVersion << "\n";
  out << "# n=" << n << " penalty=" << args.penalty << " lambda=" << format_full(config.lambda)
      << " sigma=" << format_full(config.sigma)
      << " lambda_sigma=" << format_full(config.lambda_sigma())
      << " epsilon=" << format_full(config.epsilon) << " max_iter=" << config.max_iter
      << " force=" << (config.force ? 1 : 0) << "\n";
  out << "# seed=none\n";
  out << "# iterations=" << fit.iterations << " converged=" << (fit.converged ? 1 : 0)
      << " forced=" << (fit.forced ? 1 : 0)
      << " convexity_margin=" << format_full(fit.convexity_margin) << "\n";
  out << "# kkt_residual=" << format_full(fit.trace.empty() ? 0.0 : fit.trace.back().kkt_residual)
      << "\n";
  out << "# objective_trace=";
  for (size_t k = 0; k < fit.trace.size(); ++k)
    out << (k ? "," : "") << format_full(fit.trace[k].objective);
  out << "\n# change_points=";
  for (size_t k = 0; k < fit.change_points.size(); ++k)
    out << (k ? "," : "") << fit.change_points[k];
  out << "\n";
  out << "index,y,x_hat,z_hat\n";
  for (int i = 0; i < n; ++i) {
    out << i + 1 << ',' << format_full(y[i]) << ',' << format_full(fit.x_hat[i]) << ',';
    if (i < n - 1) out << format_full(fit.z_hat[i]);
    out << "\n";
  }
  std::cerr << "wrote " << args.output << " (" << fit.iterations << " iterations, "
            << fit.change_points.size() << " change points)\n";
  return 0;
}

int run_check(int n, double lambda, double sigma, const std::string& penalty) {
  const PenaltySpec spec = PenaltySpec::make(penalty_kind_from_name(penalty));
  const ConvexityCheck r = check_convexity(n, lambda * sigma, sigma, spec.mu);
  std::cout << "# pwcmm check " << kVersion << " n=" << n << " lambda=" << format_full(lambda)
            << " sigma=" << format_full(sigma) << " penalty=" << penalty
            << " mu=" << format_full(spec.mu) << "\n";
  std::cout << "verdict,s_min,margin\n";
  std::cout << (r.verdict == ConvexityVerdict::StrictlyConvex ? "StrictlyConvex" : "NotCertified")
            << ',' << format_full(r.s_min) << ',' << format_full(r.margin) << "\n";
  return 0;
}

int run_certify(int n, const std::string& tau_text, const std::string& signs_text,
                const std::string& zhat_path, double lambda, double sigma, double sigma_w,
                const std::string& gamma_text, const std::string& penalty) {
  SupportSet support;
  support.tau = parse_index_list(tau_text);
  support.signs = parse_sign_list(signs_text);
  if (support.signs.empty()) support.signs.assign(support.tau.size(), 1);

  const std::vector<double> z_hat = read_signal_csv(zhat_path);
  if (static_cast<int>(z_hat.size()) != n - 1)
    throw std::runtime_error("--zhat must hold the full difference vector of length n-1 (got " +
                             std::to_string(z_hat.size()) + ")");
  std::vector<double> z_hat_tau;
  for (int t : support.tau) z_hat_tau.push_back(z_hat[t - 1]);

  if (sigma <= 0.0) sigma = 4.0 * lambda * n;
  double gamma = 0.0;  // auto
  if (gamma_text != "auto") gamma = std::stod(gamma_text);

  const PenaltySpec spec = PenaltySpec::make(penalty_kind_from_name(penalty));
  const GuaranteeReport rep =
      recovery_report(n, support, z_hat_tau, sigma_w, lambda, sigma, spec, gamma);

  std::cout << "# pwcmm certify " << kVersion << " n=" << n << " penalty=" << penalty
            << " lambda=" << format_full(lambda) << " sigma=" << format_full(sigma)
            << " sigma_w=" << format_full(sigma_w) << "\n";
  std::cout << "irrepresentable_lhs=" << format_full(rep.irrepresentable_lhs) << "\n";
  std::cout << "gamma=" << format_full(rep.gamma) << "\n";
  std::cout << "lambda0=" << format_full(rep.lambda0) << "\n";
  std::cout << "zmin_threshold=" << format_full(rep.zmin_threshold) << "\n";
  std::cout << "p1=" << format_full(rep.p1) << "\n";
  std::cout << "p1_clamped=" << format_full(std::max(0.0, rep.p1)) << "\n";
  std::cout << "p2=" << format_full(rep.p2) << "\n";
  std::cout << "p2_clamped=" << format_full(std::max(0.0, rep.p2)) << "\n";
  std::cout << "alpha=" << format_full(rep.alpha) << "\n";
  std::cout << "s_tilde_min=" << format_full(rep.s_tilde_min) << "\n";
  std::cout << "recovery_cond1=" << (rep.recovery_cond1 ? 1 : 0) << "\n";
  std::cout << "recovery_cond2=" << (rep.recovery_cond2 ? 1 : 0) << "\n";
  std::cout << "irrepresentable_lhs,gamma,lambda0,zmin_threshold,p1,p2,alpha,s_tilde_min,"
               "recovery_cond1,recovery_cond2\n";
  std::cout << format_full(rep.irrepresentable_lhs) << ',' << format_full(rep.gamma) << ','
            << format_full(rep.lambda0) << ',' << format_full(rep.zmin_threshold) << ','
            << format_full(rep.p1) << ',' << format_full(rep.p2) << ',' << format_full(rep.alpha)
            << ',' << format_full(rep.s_tilde_min) << ',' << (rep.recovery_cond1 ? 1 : 0) << ','
            << (rep.recovery_cond2 ? 1 : 0) << "\n";
  return 0;
}

int run_bench_stair(double amin, double amax, int points, int trials, const BenchConfig& config,
                    std::uint64_t seed, const std::vector<std::string>& methods,
                    const std::string& out_path) {
  const std::vector<double> amplitudes = log_spaced(amin, amax, points);
  const McResult res = run_sweep(amplitudes, trials, methods, config, seed);

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "# pwcmm bench stair " << kVersion << "\n";
  out << "# n=" << config.n << " sigma_w=" << format_full(config.sigma_w)
      << " epsilon=" << format_full(config.epsilon) << " max_iter=" << config.max_iter
      << " trials=" << trials << " seed=" << seed << "\n";
  out << "# success = detected change points exactly {n/4, n/2}; log/atan run "
         "the same loop with sigma scaled by their curvature constant\n";
  out << "# mean_runtime_ms:";
  for (size_t m = 0; m < methods.size(); ++m)
    out << ' ' << methods[m] << '=' << format_full(res.mean_runtime_ms[m]);
  out << "\n";
  out << "amplitude";
  for (const auto& m : methods) out << ',' << m;
  out << "\n";
  for (size_t a = 0; a < amplitudes.size(); ++a) {
    out << format_full(amplitudes[a]);
    for (size_t m = 0; m < methods.size(); ++m) out << ',' << format_full(res.success_rate[m][a]);
    out << "\n";
  }
  write_gnuplot_sweep(out_path, methods);
  std::cerr << "wrote " << out_path << " and its gnuplot template\n";
  return 0;
}

int run_bench_average(double a, int trials, const BenchConfig& config, std::uint64_t seed,
                      const std::vector<std::string>& methods, const std::string& out_path) {
  const AverageResult res = run_average(a, trials, methods, config, seed);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot write " + out_path);
  out << "# pwcmm bench average " << kVersion << "\n";
  out << "# n=" << config.n << " a=" << format_full(a) << " sigma_w=" << format_full(config.sigma_w)
      << " trials=" << trials << " seed=" << seed << "\n";
  out << "index,x_star";
  for (const auto& m : methods) out << ',' << m;
  out << "\n";
  for (int i = 0; i < config.n; ++i) {
    out << i + 1 << ',' << format_full(res.x_star[i]);
    for (size_t m = 0; m < methods.size(); ++m) out << ',' << format_full(res.mean_estimate[m][i]);
    out << "\n";
  }
  write_gnuplot_average(out_path, methods);
  std::cerr << "wrote " << out_path << " and its gnuplot template\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-constant mean filtering with convexity-preserving nonconvex penalties"};
  app.require_subcommand(1);

  DenoiseArgs dn;
  auto* denoise = app.add_subcommand("denoise", "estimate a piecewise-constant signal from CSV");
  denoise->add_option("--input", dn.input, "input signal CSV")->required();
  denoise->add_option("--output", dn.output, "output fit CSV (default fit.csv)");
  denoise->add_option("--lambda", dn.lambda, "regularization weight (default 4 sqrt(sigma_w^2/n))");
  denoise->add_option("--sigma", dn.sigma, "penalty scale (default 4 lambda n mu)");
  denoise->add_option("--sigma-w", dn.sigma_w, "noise standard deviation (sets the default lambda)");
  denoise->add_option("--penalty", dn.penalty, "exp|log|atan|l1");
  denoise->add_option("--epsilon", dn.epsilon, "relative-change stopping threshold");
  denoise->add_option("--max-iter", dn.max_iter, "iteration cap");
  denoise->add_flag("--force", dn.force, "run even if the convexity certificate fails");

  int ck_n = 0;
  double ck_lambda = 0.0, ck_sigma = 0.0;
  std::string ck_penalty = "exp";
  auto* check = app.add_subcommand("check", "print the strict-convexity certificate as a CSV row");
  check->add_option("--n", ck_n, "sample count")->required();
  check->add_option("--lambda", ck_lambda, "regularization weight")->required();
  check->add_option("--sigma", ck_sigma, "penalty scale")->required();
  check->add_option("--penalty", ck_penalty, "exp|log|atan|l1");

  int ct_n = 0;
  std::string ct_tau, ct_signs, ct_zhat, ct_gamma = "auto", ct_penalty = "exp";
  double ct_lambda = 0.0, ct_sigma = 0.0, ct_sigma_w = 1.0;
  auto* certify = app.add_subcommand("certify", "evaluate the recovery guarantees at a support");
  certify->add_option("--n", ct_n, "sample count")->required();
  certify->add_option("--tau", ct_tau, "support indices, e.g. 50,100")->required();
  certify->add_option("--signs", ct_signs, "jump signs aligned with tau, e.g. +,+");
  certify->add_option("--zhat", ct_zhat, "CSV with the fitted difference vector (length n-1)")
      ->required();
  certify->add_option("--lambda", ct_lambda, "regularization weight")->required();
  certify->add_option("--sigma", ct_sigma, "penalty scale (default 4 lambda n mu)");
  certify->add_option("--sigma-w", ct_sigma_w, "noise standard deviation");
  certify->add_option("--gamma", ct_gamma, "margin in (0,1), or 'auto' for 1 - lhs");
  certify->add_option("--penalty", ct_penalty, "exp|log|atan|l1");

  auto* bench = app.add_subcommand("bench", "Monte-Carlo experiments on the staircase signal");
  bench->require_subcommand(1);
  BenchConfig bc;
  double b_amin = 1.0, b_amax = 1e4, b_avg_a = 20.0;
  int b_points = 20, b_trials = 200, b_avg_trials = 500;
  std::uint64_t b_seed = env_seed();
  std::string b_methods = "l1,exp,log,atan";
  std::string b_out_st = "sweep.csv", b_out_avg = "avg.csv";

  auto* stair = bench->add_subcommand("stair", "success-rate sweep over jump amplitudes");
  stair->add_option("--amin", b_amin, "smallest amplitude");
  stair->add_option("--amax", b_amax, "largest amplitude");
  stair->add_option("--points", b_points, "grid points (log-spaced)");
  stair->add_option("--trials", b_trials, "Monte-Carlo trials per point");
  stair->add_option("--n", bc.n, "sample count");
  stair->add_option("--sigma-w", bc.sigma_w, "noise standard deviation");
  stair->add_option("--lambda", bc.lambda, "override the default lambda");
  stair->add_option("--sigma", bc.sigma, "override the default sigma");
  stair->add_option("--epsilon", bc.epsilon, "stopping threshold");
  stair->add_option("--max-iter", bc.max_iter, "iteration cap");
  stair->add_option("--seed", b_seed, "master seed (default: PWCMM_SEED or 42)");
  stair->add_option("--methods", b_methods, "comma list from l1,exp,log,atan");
  stair->add_option("--out", b_out_st, "output CSV");

  auto* average = bench->add_subcommand("average", "mean estimate across noise realizations");
  average->add_option("--a", b_avg_a, "jump amplitude");
  average->add_option("--trials", b_avg_trials, "Monte-Carlo trials");
  average->add_option("--n", bc.n, "sample count");
  average->add_option("--sigma-w", bc.sigma_w, "noise standard deviation");
  average->add_option("--lambda", bc.lambda, "override the default lambda");
  average->add_option("--sigma", bc.sigma, "override the default sigma");
  average->add_option("--epsilon", bc.epsilon, "stopping threshold");
  average->add_option("--max-iter", bc.max_iter, "iteration cap");
  average->add_option("--seed", b_seed, "master seed (default: PWCMM_SEED or 42)");
  average->add_option("--methods", b_methods, "comma list from l1,exp,log,atan");
  average->add_option("--out", b_out_avg, "output CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\nrun with --help for usage\n";
    return 2;
  }

  try {
    if (app.got_subcommand(denoise)) return run_denoise(dn);
    if (app.got_subcommand(check)) return run_check(ck_n, ck_lambda, ck_sigma, ck_penalty);
    if (app.got_subcommand(certify))
      return run_certify(ct_n, ct_tau, ct_signs, ct_zhat, ct_lambda, ct_sigma, ct_sigma_w,
                         ct_gamma, ct_penalty);
    if (bench->got_subcommand(stair))
      return run_bench_stair(b_amin, b_amax, b_points, b_trials, bc, b_seed,
                             parse_method_list(b_methods), b_out_st);
    if (bench->got_subcommand(average))
      return run_bench_average(b_avg_a, b_avg_trials, bc, b_seed, parse_method_list(b_methods),
                               b_out_avg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
