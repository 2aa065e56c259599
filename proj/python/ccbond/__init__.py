"""Pricing and verification engine for a perpetual callable convertible bond
whose holder and issuer may act only at the arrival times of a Poisson clock.

The heavy lifting lives in the compiled extension ``_ccbond``; this package
re-exports its public surface.
"""

from ._ccbond import (
    AsymptoticsReport,
    AsymptoticsRow,
    BatteryRow,
    DppReport,
    DppSide,
    EstimatorResult,
    GridCurve,
    ModelParams,
    PricingSolution,
    RootPair,
    SaddleReport,
    StoppingStrategy,
    SweepReport,
    SweepViolation,
    asymptotics_check,
    char_roots,
    dpp_check,
    estimate_J,
    forced_conversion_boundary,
    property_sweep,
    regime,
    saddle_battery,
    solve,
    solve_hjb_ca_low,
    solve_hjb_co,
    solve_hjb_f,
    threshold_co,
    threshold_co_unconstrained,
    value_ca,
    value_ca_unconstrained,
    value_co,
    value_f,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticsReport",
    "AsymptoticsRow",
    "BatteryRow",
    "DppReport",
    "DppSide",
    "EstimatorResult",
    "GridCurve",
    "ModelParams",
    "PricingSolution",
    "RootPair",
    "SaddleReport",
    "StoppingStrategy",
    "SweepReport",
    "SweepViolation",
    "asymptotics_check",
    "char_roots",
    "dpp_check",
    "estimate_J",
    "forced_conversion_boundary",
    "property_sweep",
    "regime",
    "saddle_battery",
    "solve",
    "solve_hjb_ca_low",
    "solve_hjb_co",
    "solve_hjb_f",
    "threshold_co",
    "threshold_co_unconstrained",
    "value_ca",
    "value_ca_unconstrained",
    "value_co",
    "value_f",
]
