"""Sub-generation network coding between IDNC and RLNC."""

from ._sgnc import (
    ConfigError,
    Error,
    InvalidG,
    NonReducedDiversity,
    StateFeedbackMatrix,
    analytic_metrics,
    demand_profile,
    encode,
    fixture,
    fixture_report,
    format_sfm,
    gf_mul,
    is_valid_solution,
    load_sfm,
    merge_subgenerations,
    parse_sfm,
    partition,
    reduce_diversity,
    run_experiment,
    run_systematic,
    simulate,
    solve,
    solve_system,
)

__all__ = [
    "ConfigError",
    "Error",
    "InvalidG",
    "NonReducedDiversity",
    "StateFeedbackMatrix",
    "analytic_metrics",
    "demand_profile",
    "encode",
    "fixture",
    "fixture_report",
    "format_sfm",
    "gf_mul",
    "is_valid_solution",
    "load_sfm",
    "merge_subgenerations",
    "parse_sfm",
    "partition",
    "reduce_diversity",
    "run_experiment",
    "run_systematic",
    "simulate",
    "solve",
    "solve_system",
]
