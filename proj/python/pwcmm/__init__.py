"""Piecewise-constant mean filtering with convexity-preserving nonconvex penalties."""

from pwcmm._core import (
    GuaranteeReport,
    McResult,
    PwcFit,
    add_noise,
    apply_design,
    apply_design_transpose,
    build_irrepresentability_matrix,
    center,
    check_convexity,
    column_norm_sq,
    default_lambda,
    design_entry,
    detect_change_points,
    generate_staircase,
    irrepresentable_lhs,
    kkt_residual,
    objective,
    penalty_derivative,
    penalty_mu,
    penalty_scaled_value,
    penalty_value,
    read_signal_csv,
    reconstruct_x,
    recovery_report,
    run_sweep,
    smallest_gram_eigenvalue,
    solve_l1_filter,
    solve_mm,
    solve_weighted_tv,
    support_gram_smallest_eigenvalue,
    trial_seed,
    tv_optimality_residual,
    __version__,
)

__all__ = [
    "GuaranteeReport",
    "McResult",
    "PwcFit",
    "add_noise",
    "apply_design",
    "apply_design_transpose",
    "build_irrepresentability_matrix",
    "center",
    "check_convexity",
    "column_norm_sq",
    "default_lambda",
    "design_entry",
    "detect_change_points",
    "generate_staircase",
    "irrepresentable_lhs",
    "kkt_residual",
    "objective",
    "penalty_derivative",
    "penalty_mu",
    "penalty_scaled_value",
    "penalty_value",
    "read_signal_csv",
    "reconstruct_x",
    "recovery_report",
    "run_sweep",
    "smallest_gram_eigenvalue",
    "solve_l1_filter",
    "solve_mm",
    "solve_weighted_tv",
    "support_gram_smallest_eigenvalue",
    "trial_seed",
    "tv_optimality_residual",
    "__version__",
]
