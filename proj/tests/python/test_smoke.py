"""Smoke tests for the pwcmm python module (run against the CMake-built extension)."""

import math
import sys

import pwcmm


def approx(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def test_penalties():
    assert pwcmm.penalty_value("exp", 0.0) == 0.0
    assert approx(pwcmm.penalty_value("exp", 1.0), 1.0 - math.exp(-1.0))
    assert pwcmm.penalty_derivative("exp", 0.0) == 1.0
    assert pwcmm.penalty_derivative("l1", 7.3) == 1.0
    assert pwcmm.penalty_mu("exp") == 1.0
    try:
        pwcmm.penalty_value("exp", -1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative argument must raise")


def test_difference_model():
    y_tilde, mean = pwcmm.center([1.0, 2.0, 6.0])
    assert mean == 3.0 and y_tilde == [-2.0, -1.0, 3.0]
    az = pwcmm.apply_design(3, [1.0, 0.0])
    assert approx(az[0], -2.0 / 3) and approx(az[1], 1.0 / 3)
    assert approx(pwcmm.smallest_gram_eigenvalue(2), 0.5)
    assert approx(pwcmm.column_norm_sq(3, 1), 2.0 / 3)
    ok, margin, s_min = pwcmm.check_convexity(200, 64.0, 226.27, 1.0)
    assert ok and margin > 0 and 0.25 < s_min <= 0.5
    x = pwcmm.reconstruct_x([2.0], [0.0, 4.0])
    assert approx(x[0], 1.0) and approx(x[1], 3.0)


def test_taut_string():
    x = pwcmm.solve_weighted_tv([0.0, 4.0], [1.0])
    assert approx(x[0], 1.0) and approx(x[1], 3.0)
    assert pwcmm.tv_optimality_residual([0.0, 4.0], [1.0], x) <= 1e-12
    flat = pwcmm.solve_l1_filter([5.0, 1.0, 3.0], 1e6)
    assert all(approx(v, 3.0) for v in flat)


def test_solver_end_to_end():
    n = 200
    lam = pwcmm.default_lambda(n, 1.0)
    sigma = 4.0 * lam * n
    x_star = pwcmm.generate_staircase(20.0)
    y = pwcmm.add_noise(x_star, 1.0, 42)
    fit = pwcmm.solve_mm(y, lam, sigma, "exp")
    assert fit.converged
    assert fit.change_points == [50, 100]
    trace = fit.objective_trace()
    assert all(trace[k + 1] <= trace[k] + 1e-10 * (1 + abs(trace[k])) for k in range(len(trace) - 1))
    assert pwcmm.kkt_residual(y, fit.z_hat, lam, sigma, "exp") <= 1e-6 * (
        1 + math.sqrt(sum(v * v for v in y))
    )


def test_guarantees():
    lhs = pwcmm.irrepresentable_lhs(200, [50, 100], [1, 1], [1.0, 1.0])
    assert approx(lhs, 1.0, 1e-9)
    rep = pwcmm.recovery_report(200, [50, 100], [1, 1], [20.0, 20.0], 1.0, 0.2828, 226.27, "exp", 0.5)
    assert rep.alpha < 1.0 and rep.lambda0 > 0 and rep.recovery_cond1


def test_sweep():
    res = pwcmm.run_sweep([50.0], 5, ["exp", "l1"], seed=7)
    assert res.trials == 5
    assert res.success_rate[0][0] >= 0.8  # exp recovers at a=50
    assert res.success_rate[1][0] <= 0.2  # l1 stair-cases


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        t()
        print(f"ok {t.__name__}")
    print(f"{len(tests)} python smoke tests passed (pwcmm {pwcmm.__version__})")


if __name__ == "__main__":
    sys.exit(main())
