#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "pwcmm/csv_io.hpp"
#include "pwcmm/difference_model.hpp"
#include "pwcmm/experiments.hpp"
#include "pwcmm/guarantees.hpp"
#include "pwcmm/mm_solver.hpp"
#include "pwcmm/penalties.hpp"
#include "pwcmm/taut_string.hpp"
#include "pwcmm/version.hpp"

namespace py = pybind11;
using namespace pwcmm;

namespace {

PenaltySpec spec_of(const std::string& name) {
  return PenaltySpec::make(penalty_kind_from_name(name));
}

SolverConfig config_of(double lambda, double sigma, const std::string& penalty, double epsilon,
                       int max_iter, bool force) {
  SolverConfig c;
  c.lambda = lambda;
  c.sigma = sigma;
  c.penalty = spec_of(penalty);
  c.epsilon = epsilon;
  c.max_iter = max_iter;
  c.force = force;
  return c;
}

std::vector<std::vector<double>> matrix_rows(const linalg::Matrix& m) {
  std::vector<std::vector<double>> rows(m.rows, std::vector<double>(m.cols));
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) rows[i][j] = m(i, j);
  return rows;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "piecewise-constant mean filtering with convexity-preserving nonconvex penalties";
  m.attr("__version__") = kVersion;

  py::class_<PwcFit>(m, "PwcFit")
      .def_readonly("x_hat", &PwcFit::x_hat)
      .def_readonly("z_hat", &PwcFit::z_hat)
      .def_readonly("change_points", &PwcFit::change_points)
      .def_readonly("iterations", &PwcFit::iterations)
      .def_readonly("converged", &PwcFit::converged)
      .def_readonly("forced", &PwcFit::forced)
      .def_readonly("convexity_margin", &PwcFit::convexity_margin)
      .def("objective_trace", [](const PwcFit& f) {
        std::vector<double> out;
        for (const auto& r : f.trace) out.push_back(r.objective);
        return out;
      });

  py::class_<GuaranteeReport>(m, "GuaranteeReport")
      .def_readonly("irrepresentable_lhs", &GuaranteeReport::irrepresentable_lhs)
      .def_readonly("gamma", &GuaranteeReport::gamma)
      .def_readonly("lambda0", &GuaranteeReport::lambda0)
      .def_readonly("zmin_threshold", &GuaranteeReport::zmin_threshold)
      .def_readonly("p1", &GuaranteeReport::p1)
      .def_readonly("p2", &GuaranteeReport::p2)
      .def_readonly("alpha", &GuaranteeReport::alpha)
      .def_readonly("s_tilde_min", &GuaranteeReport::s_tilde_min)
      .def_readonly("recovery_cond1", &GuaranteeReport::recovery_cond1)
      .def_readonly("recovery_cond2", &GuaranteeReport::recovery_cond2);

  py::class_<McResult>(m, "McResult")
      .def_readonly("amplitudes", &McResult::amplitudes)
      .def_readonly("methods", &McResult::methods)
      .def_readonly("success_rate", &McResult::success_rate)
      .def_readonly("mean_runtime_ms", &McResult::mean_runtime_ms)
      .def_readonly("trials", &McResult::trials)
      .def_readonly("seed", &McResult::seed);

  // penalties
  m.def(
      "penalty_value", [](const std::string& p, double x) { return spec_of(p).value(x); },
      py::arg("penalty"), py::arg("x"));
  m.def(
      "penalty_derivative",
      [](const std::string& p, double x) { return spec_of(p).derivative(x); }, py::arg("penalty"),
      py::arg("x"));
  m.def(
      "penalty_scaled_value",
      [](const std::string& p, double x, double sigma) { return spec_of(p).scaled_value(x, sigma); },
      py::arg("penalty"), py::arg("x"), py::arg("sigma"));
  m.def(
      "penalty_mu", [](const std::string& p) { return spec_of(p).mu; }, py::arg("penalty"));

  // difference model
  m.def("center", [](const std::vector<double>& y) {
    const auto c = center(std::span<const double>(y));
    return py::make_tuple(c.y_tilde, c.y_mean);
  });
  m.def("design_entry", &design_entry, py::arg("n"), py::arg("i"), py::arg("j"));
  m.def("apply_design",
        [](int n, const std::vector<double>& z) { return apply_design(n, z); });
  m.def("apply_design_transpose",
        [](int n, const std::vector<double>& v) { return apply_design_transpose(n, v); });
  m.def("reconstruct_x", [](const std::vector<double>& z, const std::vector<double>& y) {
    return reconstruct_x(z, y);
  });
  m.def("column_norm_sq", &column_norm_sq, py::arg("n"), py::arg("j"));
  m.def("smallest_gram_eigenvalue", &smallest_gram_eigenvalue, py::arg("n"));
  m.def(
      "check_convexity",
      [](int n, double lambda_sigma, double sigma, double mu) {
        const auto r = check_convexity(n, lambda_sigma, sigma, mu);
        return py::make_tuple(r.verdict == ConvexityVerdict::StrictlyConvex, r.margin, r.s_min);
      },
      py::arg("n"), py::arg("lambda_sigma"), py::arg("sigma"), py::arg("mu"),
      "returns (strictly_convex, margin, s_min)");

  // taut string
  m.def(
      "solve_weighted_tv",
      [](const std::vector<double>& y, const std::vector<double>& w) {
        return solve_weighted_tv({y, w});
      },
      py::arg("y"), py::arg("edge_weights"));
  m.def(
      "solve_l1_filter",
      [](const std::vector<double>& y, double lam) { return solve_l1_filter(y, lam); },
      py::arg("y"), py::arg("lambda_"));
  m.def(
      "tv_optimality_residual",
      [](const std::vector<double>& y, const std::vector<double>& w,
         const std::vector<double>& x) { return tv_optimality_residual({y, w}, x); },
      py::arg("y"), py::arg("edge_weights"), py::arg("x"));

  // solver
  m.def(
      "solve_mm",
      [](const std::vector<double>& y, double lambda, double sigma, const std::string& penalty,
         double epsilon, int max_iter, bool force) {
        return solve_mm(y, config_of(lambda, sigma, penalty, epsilon, max_iter, force));
      },
      py::arg("y"), py::arg("lambda_"), py::arg("sigma"), py::arg("penalty") = "exp",
      py::arg("epsilon") = 1e-4, py::arg("max_iter") = 100, py::arg("force") = false);
  m.def(
      "objective",
      [](const std::vector<double>& y, const std::vector<double>& x, double lambda, double sigma,
         const std::string& penalty) {
        return objective(y, x, config_of(lambda, sigma, penalty, 1e-4, 100, false));
      },
      py::arg("y"), py::arg("x"), py::arg("lambda_"), py::arg("sigma"),
      py::arg("penalty") = "exp");
  m.def(
      "kkt_residual",
      [](const std::vector<double>& y, const std::vector<double>& z, double lambda, double sigma,
         const std::string& penalty) {
        return kkt_residual(y, z, config_of(lambda, sigma, penalty, 1e-4, 100, false));
      },
      py::arg("y"), py::arg("z_hat"), py::arg("lambda_"), py::arg("sigma"),
      py::arg("penalty") = "exp");
  m.def(
      "detect_change_points",
      [](const std::vector<double>& z, double y_scale, double tol) {
        return detect_change_points(z, y_scale, tol);
      },
      py::arg("z_hat"), py::arg("y_scale"), py::arg("tol_cp") = 1e-8);
  m.def(
      "default_lambda", [](int n, double sigma_w) { return 4.0 * std::sqrt(sigma_w * sigma_w / n); },
      py::arg("n"), py::arg("sigma_w"));

  // guarantees
  m.def(
      "build_irrepresentability_matrix",
      [](int n, const std::vector<int>& tau) {
        return matrix_rows(build_irrepresentability_matrix(n, tau));
      },
      py::arg("n"), py::arg("tau"));
  m.def(
      "irrepresentable_lhs",
      [](int n, const std::vector<int>& tau, const std::vector<int>& signs,
         const std::vector<double>& weights) {
        return irrepresentable_lhs(build_irrepresentability_matrix(n, tau), signs, weights);
      },
      py::arg("n"), py::arg("tau"), py::arg("signs"), py::arg("weights"));
  m.def("support_gram_smallest_eigenvalue",
        [](int n, const std::vector<int>& tau) { return support_gram_smallest_eigenvalue(n, tau); });
  m.def(
      "recovery_report",
      [](int n, const std::vector<int>& tau, const std::vector<int>& signs,
         const std::vector<double>& z_hat_tau, double sigma_w, double lambda, double sigma,
         const std::string& penalty, double gamma) {
        return recovery_report(n, {tau, signs}, z_hat_tau, sigma_w, lambda, sigma,
                               spec_of(penalty), gamma);
      },
      py::arg("n"), py::arg("tau"), py::arg("signs"), py::arg("z_hat_tau"), py::arg("sigma_w"),
      py::arg("lambda_"), py::arg("sigma"), py::arg("penalty") = "exp", py::arg("gamma") = 0.0);

  // experiments
  m.def(
      "generate_staircase",
      [](double a, int n, int first_break, int second_break) {
        StairCaseSpec s;
        s.amplitude = a;
        s.n = n;
        s.first_break = first_break;
        s.second_break = second_break;
        return generate_staircase(s);
      },
      py::arg("amplitude"), py::arg("n") = 200, py::arg("first_break") = 50,
      py::arg("second_break") = 100);
  m.def(
      "add_noise",
      [](const std::vector<double>& x, double sw, std::uint64_t seed) {
        return add_noise(x, sw, seed);
      },
      py::arg("x_star"), py::arg("sigma_w"), py::arg("seed"));
  m.def("trial_seed", &trial_seed, py::arg("master_seed"), py::arg("amplitude_index"),
        py::arg("trial_index"));
  m.def(
      "run_sweep",
      [](const std::vector<double>& amplitudes, int trials, const std::vector<std::string>& methods,
         int n, double sigma_w, double epsilon, int max_iter, std::uint64_t seed) {
        BenchConfig c;
        c.n = n;
        c.sigma_w = sigma_w;
        c.epsilon = epsilon;
        c.max_iter = max_iter;
        return run_sweep(amplitudes, trials, methods, c, seed);
      },
      py::arg("amplitudes"), py::arg("trials"), py::arg("methods"), py::arg("n") = 200,
      py::arg("sigma_w") = 1.0, py::arg("epsilon") = 1e-4, py::arg("max_iter") = 100,
      py::arg("seed") = 42);

  m.def("read_signal_csv", &read_signal_csv, py::arg("path"));
}
