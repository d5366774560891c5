"""Causal mediation effects when the mediator is left-censored by an assay limit."""

from ._core import (
    CensmedError,
    Dataset,
    Theta,
    __version__,
    bootstrap_shift_indirect,
    default_sim_params,
    estimate_shift_indirect,
    estimate_two_arm,
    expit,
    fit_censored_normal,
    generate_dataset,
    inverse_mills,
    norm_cdf,
    read_csv,
    run,
    true_indirect_oracle,
    truncated_normal_mean,
    write_csv,
)

METHODS = ("extrapolation", "observed_likelihood", "mcem", "half_assay_limit")

__all__ = [
    "CensmedError",
    "Dataset",
    "METHODS",
    "Theta",
    "__version__",
    "bootstrap_shift_indirect",
    "default_sim_params",
    "estimate_shift_indirect",
    "estimate_two_arm",
    "expit",
    "fit_censored_normal",
    "generate_dataset",
    "inverse_mills",
    "norm_cdf",
    "read_csv",
    "run",
    "true_indirect_oracle",
    "truncated_normal_mean",
    "write_csv",
]
