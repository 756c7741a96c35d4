"""Self-similar factor and root approximants for divergent asymptotic series.

The package builds approximants from truncated weak-coupling series,
interpolates towards known strong-coupling behaviour and extrapolates series
to infinite coupling.
"""

from __future__ import annotations

from .errors import (
    BetaDegenerate,
    BranchError,
    DegenerateNodes,
    DepthUnavailable,
    InsufficientOrders,
    NoSolution,
    OmegaUnavailable,
    OrderUnavailable,
    ScenarioSchemaError,
    SelfSimError,
)
from .factor import (
    FactorApproximant,
    WeightedApproximant,
    build_factor,
    build_factor_constrained,
    build_factor_interpolating,
    combine_weighted,
    evaluate_factor,
    factor_asymptote,
    solve_prony,
)
from .limits import (
    LimitEstimate,
    OmegaEstimate,
    aggregate_estimates,
    estimate_omega,
    limit_power_restriction,
    limit_via_transformation,
)
from .report import ScenarioReport, emit_report, load_report, run_scenario
from .root import (
    RootApproximant,
    StrongCouplingExpansion,
    bootstrap_sequence,
    build_root_interpolant,
    build_root_iterated,
    evaluate_root,
    predict_next_coefficient,
    root_asymptote,
)
from .scenarios import (
    Scenario,
    exact_string_energy,
    load_scenario,
    percentage_error,
)
from .series import (
    AsymptoticSeries,
    MomentVector,
    PowerPrefactor,
    TransformedSeries,
    beta_series,
    compute_moments,
    expand_approximant,
    transform_series,
)

__all__ = [
    "AsymptoticSeries",
    "BetaDegenerate",
    "BranchError",
    "DegenerateNodes",
    "DepthUnavailable",
    "FactorApproximant",
    "InsufficientOrders",
    "LimitEstimate",
    "MomentVector",
    "NoSolution",
    "OmegaEstimate",
    "OmegaUnavailable",
    "OrderUnavailable",
    "PowerPrefactor",
    "RootApproximant",
    "Scenario",
    "ScenarioReport",
    "ScenarioSchemaError",
    "SelfSimError",
    "StrongCouplingExpansion",
    "TransformedSeries",
    "WeightedApproximant",
    "aggregate_estimates",
    "beta_series",
    "bootstrap_sequence",
    "build_factor",
    "build_factor_constrained",
    "build_factor_interpolating",
    "build_root_interpolant",
    "build_root_iterated",
    "combine_weighted",
    "compute_moments",
    "emit_report",
    "estimate_omega",
    "evaluate_factor",
    "evaluate_root",
    "exact_string_energy",
    "expand_approximant",
    "factor_asymptote",
    "limit_power_restriction",
    "limit_via_transformation",
    "load_report",
    "load_scenario",
    "percentage_error",
    "predict_next_coefficient",
    "root_asymptote",
    "run_scenario",
    "solve_prony",
    "transform_series",
]

__version__ = "0.1.0"
