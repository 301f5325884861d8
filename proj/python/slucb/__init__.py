"""Shuffle-private batched LinUCB: calibrations, privacy accounting and
regret simulation on synthetic linear bandit instances."""

from slucb._core import (  # noqa: F401
    AmplifiedBudget,
    AmpNoiseSpec,
    VecParams,
    advanced_composition,
    amplified_epsilon,
    budget_text,
    calibrate_amp,
    calibrate_amp_ldp,
    calibrate_amp_returning,
    calibrate_tree,
    calibrate_vec,
    calibrate_vec_returning,
    confidence_radius,
    select_lambda,
    simulate,
)

__all__ = [
    "AmplifiedBudget",
    "AmpNoiseSpec",
    "VecParams",
    "advanced_composition",
    "amplified_epsilon",
    "budget_text",
    "calibrate_amp",
    "calibrate_amp_ldp",
    "calibrate_amp_returning",
    "calibrate_tree",
    "calibrate_vec",
    "calibrate_vec_returning",
    "confidence_radius",
    "select_lambda",
    "simulate",
]
