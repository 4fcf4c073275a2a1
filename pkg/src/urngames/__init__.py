"""Exact distributions, oracles and simulators for two-color urn games."""

from .closed_form import (
    PmfOverK,
    Regime,
    Rule,
    UnsupportedRule,
    UrnSpec,
    argmax_rule3,
    argmax_rule4,
    asym_rule3,
    asym_rule4,
    gen_fn_p2,
    gen_fn_rule3,
    gen_fn_rule4,
    p2,
    p3_last_white,
    p_rule3,
    p_rule4,
    pmf,
)
from .combinatorics import (
    NonTerminatingSeries,
    ZeroLowerParameter,
    binomial,
    falling_ratio,
    hyp_terminating,
    pochhammer,
)
from .oracles import DpTable, dp_eval, g_recursion, p_rule3_via_g
from .series import (
    BivariateSeries,
    PdeResidualReport,
    WindowTooSmall,
    apply_D,
    f_series_from_pmf,
    series_from_pmf,
    verify_identity_3F2_unit,
    verify_identity_C1,
    verify_identity_bio2,
    verify_pde,
)
from .simulate import (
    EmptyUrn,
    LastBall,
    Removal,
    SimReport,
    run_game,
    run_last_white,
    run_problem4,
    simulate,
    step_removal,
    stream_rng,
)

__version__ = "0.1.0"

__all__ = [
    "BivariateSeries",
    "DpTable",
    "EmptyUrn",
    "LastBall",
    "NonTerminatingSeries",
    "PdeResidualReport",
    "PmfOverK",
    "Regime",
    "Removal",
    "Rule",
    "SimReport",
    "UnsupportedRule",
    "UrnSpec",
    "WindowTooSmall",
    "ZeroLowerParameter",
    "apply_D",
    "argmax_rule3",
    "argmax_rule4",
    "asym_rule3",
    "asym_rule4",
    "binomial",
    "dp_eval",
    "f_series_from_pmf",
    "falling_ratio",
    "g_recursion",
    "gen_fn_p2",
    "gen_fn_rule3",
    "gen_fn_rule4",
    "hyp_terminating",
    "p2",
    "p3_last_white",
    "p_rule3",
    "p_rule4",
    "p_rule3_via_g",
    "pmf",
    "pochhammer",
    "run_game",
    "run_last_white",
    "run_problem4",
    "series_from_pmf",
    "simulate",
    "step_removal",
    "stream_rng",
    "verify_identity_3F2_unit",
    "verify_identity_C1",
    "verify_identity_bio2",
    "verify_pde",
]
