"""Interpretable quantum regression on a statevector simulator."""

from ._core import (
    DataTable,
    XqrError,
    analytic_cost,
    analytic_gradient,
    bootstrap_sample,
    circuit_phases,
    compare_cost_ratio,
    estimate,
    generate_linear_synthetic,
    generate_sine_synthetic,
    goodness,
    minimal_shots,
    pipeline_expectation,
    read_csv,
    readout_error_budget,
    success_probability_null,
    train,
    train_ensemble,
    write_csv,
)

__all__ = [
    "DataTable",
    "XqrError",
    "analytic_cost",
    "analytic_gradient",
    "bootstrap_sample",
    "circuit_phases",
    "compare_cost_ratio",
    "estimate",
    "generate_linear_synthetic",
    "generate_sine_synthetic",
    "goodness",
    "minimal_shots",
    "pipeline_expectation",
    "read_csv",
    "readout_error_budget",
    "success_probability_null",
    "train",
    "train_ensemble",
    "write_csv",
]
