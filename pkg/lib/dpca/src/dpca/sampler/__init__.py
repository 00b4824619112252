"""Gibbs sampling for flat, gamma-poisson and hierarchical component models."""

from .conditionals import (
    Assignments,
    pool_assignments,
    posterior_mean_omega,
    resample_omega,
    sample_assignments,
    sample_intensities_dica,
    sample_proportions_flat,
    sample_tree_params,
)
from .sweep import SampleState, SweepParams, initial_state, sweep_document
from .trainer import GibbsTrainer, TrainConfig, TrainResult, train

__all__ = [
    # Conditionals
    "Assignments",
    "sample_assignments",
    "sample_proportions_flat",
    "sample_intensities_dica",
    "sample_tree_params",
    "pool_assignments",
    "resample_omega",
    "posterior_mean_omega",
    # Sweeps
    "SampleState",
    "SweepParams",
    "initial_state",
    "sweep_document",
    # Training
    "TrainConfig",
    "TrainResult",
    "GibbsTrainer",
    "train",
]
