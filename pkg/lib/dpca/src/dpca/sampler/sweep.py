"""
Per-document Gibbs state and the document step of a sweep.

A document step reads omega and writes only its own state, so documents
can be stepped concurrently; omega is resampled once all steps finish.
"""

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from dpca.corpus import Document
from dpca.model import ComponentModel, TopicTree, Variant
from dpca.sampler.conditionals import (
    Assignments,
    sample_assignments,
    sample_intensities_dica,
    sample_proportions_flat,
    sample_tree_params,
)


@dataclass
class SampleState:
    """
    Hidden variables of one document.

    `weights` is m for the dirichlet and hierarchical variants and the Gamma
    intensities lambda for gamma-poisson. `stop` and `branch` hold q and n
    for hierarchical models.
    """

    weights: np.ndarray
    assignments: Assignments = field(default_factory=dict)
    counts: Optional[np.ndarray] = None
    stop: Optional[np.ndarray] = None
    branch: Optional[np.ndarray] = None

    @property
    def proportions(self) -> np.ndarray:
        """m on the simplex (normalised intensities for gamma-poisson)."""
        return self.weights / self.weights.sum()


@dataclass(frozen=True)
class SweepParams:
    """What a document step reads: priors, the variant and the current omega."""

    alpha: np.ndarray
    omega: Mapping[str, np.ndarray]
    variant: Variant = Variant.DIRICHLET
    tree: Optional[TopicTree] = None

    @classmethod
    def from_model(
        cls, model: ComponentModel, omega: Mapping[str, np.ndarray] | None = None
    ) -> "SweepParams":
        return cls(
            alpha=model.alpha,
            omega=model.omega if omega is None else omega,
            variant=model.variant,
            tree=model.tree,
        )


def _sample_weights(
    counts: np.ndarray, params: SweepParams, rng: np.random.Generator
) -> SampleState:
    if params.tree is not None:
        q, n, m = sample_tree_params(counts, params.tree, rng)
        return SampleState(weights=m, counts=counts, stop=q, branch=n)
    if params.variant == Variant.GAMMA_POISSON:
        return SampleState(weights=sample_intensities_dica(counts, params.alpha, rng), counts=counts)
    return SampleState(weights=sample_proportions_flat(counts, params.alpha, rng), counts=counts)


def initial_state(params: SweepParams, rng: np.random.Generator) -> SampleState:
    """Proportions drawn from their prior (no counts yet)."""
    return _sample_weights(np.zeros(params.alpha.size, dtype=np.int64), params, rng)


def sweep_document(
    doc: Document, state: SampleState, params: SweepParams, rng: np.random.Generator
) -> SampleState:
    """Assignments given the current weights, then weights given the new counts."""
    assignments, counts = sample_assignments(doc, state.weights, params.omega, rng)
    new_state = _sample_weights(counts, params, rng)
    new_state.assignments = assignments
    return new_state
