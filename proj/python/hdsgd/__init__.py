"""Constant-rate SGD / averaged-SGD rate calculator and chain drivers.

Everything here is re-exported from the compiled core. The closed-form layer
(`alpha_max`, `contraction_rate`, `complexity`, ...) evaluates the bound
formulas exactly; the chain drivers (`run_chain`, `run_coupled_pair`) expose
the counter-based simulator, so results are reproducible from (seed, step)
alone. The `sweep_*` functions run the randomized property checks and return
a `PropertyResult` with trial/violation counts.
"""

from ._core import (
    AsgdBoundTerms,
    ComplexityRecipe,
    ConstantEstimate,
    CoupledRun,
    CovariateLaw,
    LinearRegression,
    NoiseLaw,
    Problem,
    PropertyResult,
    Provenance,
    RunConstants,
    TanhProblem,
    Trajectory,
    alpha_max,
    alpha_root,
    asgd_bound_terms,
    burn_in_steps,
    check_taylor_remainder,
    choose_s_d,
    complexity,
    contraction_rate,
    default_init,
    estimate_constants,
    fuk_nagaev_bound,
    gershgorin_gap,
    high_prob_radius,
    lp_norm,
    ls_norm,
    max_norm,
    norm_contraction_rate,
    run_chain,
    run_coupled_pair,
    sweep_maximal,
    sweep_norm_equivalence,
    sweep_rio,
    sweep_taylor_remainder,
    tilde_contraction_rate,
)

__version__ = "0.1.0"

__all__ = [
    "AsgdBoundTerms",
    "ComplexityRecipe",
    "ConstantEstimate",
    "CoupledRun",
    "CovariateLaw",
    "LinearRegression",
    "NoiseLaw",
    "Problem",
    "PropertyResult",
    "Provenance",
    "RunConstants",
    "TanhProblem",
    "Trajectory",
    "alpha_max",
    "alpha_root",
    "asgd_bound_terms",
    "burn_in_steps",
    "check_taylor_remainder",
    "choose_s_d",
    "complexity",
    "contraction_rate",
    "default_init",
    "estimate_constants",
    "fuk_nagaev_bound",
    "gershgorin_gap",
    "high_prob_radius",
    "lp_norm",
    "ls_norm",
    "max_norm",
    "norm_contraction_rate",
    "run_chain",
    "run_coupled_pair",
    "sweep_maximal",
    "sweep_norm_equivalence",
    "sweep_rio",
    "sweep_taylor_remainder",
    "tilde_contraction_rate",
]
