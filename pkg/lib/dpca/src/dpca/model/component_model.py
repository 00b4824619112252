"""
Component model parameters, initialisation and display averaging.
"""

from enum import Enum
from typing import Any, Optional
import warnings

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from dpca.corpus import Corpus
from dpca.errors import DpcaWarning, TreeSpecError
from dpca.model.tree import TopicTree, build_tree, tree_node_count
from dpca.utils.rng import MODEL_INIT_STREAM, substream

ROW_TOLERANCE = 1e-9


class Variant(str, Enum):
    """Proportions model: Dirichlet (discrete PCA) or Gamma-Poisson (discrete ICA)."""

    DIRICHLET = "dirichlet"
    GAMMA_POISSON = "gamma-poisson"


def _as_array(value: Any) -> np.ndarray:
    return np.asarray(value, dtype=np.float64)


class ComponentModel(BaseModel):
    """
    K components, each a multinomial per bag, with priors.

    omega[bag] is K x J_bag and row-stochastic; alpha is the Dirichlet (or
    Gamma shape) prior on proportions; omega_prior[bag] holds per-token
    pseudo-counts for the component rows.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    K: int = Field(ge=1)
    variant: Variant = Variant.DIRICHLET
    alpha: np.ndarray
    omega: dict[str, np.ndarray]
    omega_prior: dict[str, np.ndarray]
    vocabularies: dict[str, list[str]]
    tree: Optional[TopicTree] = None
    mean_proportions: Optional[np.ndarray] = None
    cycles_trained: int = Field(default=0, ge=0)

    @field_validator("alpha", "mean_proportions", mode="before")
    @classmethod
    def _coerce_vector(cls, value: Any) -> Any:
        return None if value is None else _as_array(value)

    @field_validator("omega", "omega_prior", mode="before")
    @classmethod
    def _coerce_matrices(cls, value: Any) -> Any:
        return {bag: _as_array(arr) for bag, arr in value.items()}

    @model_validator(mode="after")
    def _check_invariants(self) -> "ComponentModel":
        if self.alpha.shape != (self.K,) or np.any(self.alpha <= 0):
            raise ValueError(f"alpha must be {self.K} positive values")
        if set(self.omega) != set(self.omega_prior) or set(self.omega) != set(self.vocabularies):
            raise ValueError("omega, omega_prior and vocabularies must cover the same bags")

        for bag, rows in self.omega.items():
            J = len(self.vocabularies[bag])
            if rows.shape != (self.K, J):
                raise ValueError(f"omega['{bag}'] has shape {rows.shape}, expected ({self.K}, {J})")
            if np.any(rows < 0) or not np.all(np.isfinite(rows)):
                raise ValueError(f"omega['{bag}'] has negative or non-finite entries")
            sums = rows.sum(axis=1)
            bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_TOLERANCE)
            if bad.size:
                raise ValueError(
                    f"omega['{bag}'] row {int(bad[0])} sums to {sums[bad[0]]!r}, not 1"
                )
            prior = self.omega_prior[bag]
            if prior.shape != (J,) or np.any(prior <= 0):
                raise ValueError(f"omega_prior['{bag}'] must be {J} positive values")

        if self.tree is not None:
            if self.tree.K != self.K:
                raise ValueError(f"Tree has {self.tree.K} nodes, model has K={self.K}")
            if self.variant != Variant.DIRICHLET:
                raise ValueError("Hierarchical models use the dirichlet variant")
        if self.mean_proportions is not None and self.mean_proportions.shape != (self.K,):
            raise ValueError(f"mean_proportions must have {self.K} entries")
        return self

    @property
    def bag_specs(self) -> dict[str, int]:
        return {bag: len(tokens) for bag, tokens in self.vocabularies.items()}

    @property
    def is_hierarchical(self) -> bool:
        return self.tree is not None

    @property
    def is_trained(self) -> bool:
        return self.cycles_trained > 0

    def top_tokens(self, bag: str, row: np.ndarray, top: int) -> list[tuple[str, float]]:
        """Highest-probability tokens of a J-vector, ties broken by index."""
        order = np.lexsort((np.arange(row.size), -row))[:top]
        tokens = self.vocabularies[bag]
        return [(tokens[j], float(row[j])) for j in order]


# ============================================================
# Initialisation
# ============================================================


class InitConfig(BaseModel):
    """How init_model builds a fresh model."""

    K: int = Field(ge=1)
    variant: Variant = Variant.DIRICHLET
    tree_spec: Optional[tuple[int, int]] = Field(
        None, description="(branching factor, depth) of a complete component tree"
    )
    alpha_total: float = Field(1.0, gt=0, description="Total Dirichlet concentration; alpha_k = total/K")
    prior_strength: float = Field(1.0, gt=0, description="Pseudo-count total of each omega row prior")
    noise: float = Field(0.5, ge=0, lt=1, description="Multiplicative perturbation of initial rows")
    seed: int = 0


def smoothed_unigram(corpus: Corpus, bag: str) -> np.ndarray:
    """Laplace-smoothed corpus unigram (total_freq + 1) / (T + J)."""
    total = np.asarray(corpus.vocabularies[bag].total_freq, dtype=np.float64)
    return (total + 1.0) / (total.sum() + total.size)


def init_model(
    corpus: Corpus,
    K: int,
    variant: Variant | str = Variant.DIRICHLET,
    tree_spec: Optional[tuple[int, int]] = None,
    seed: int = 0,
    alpha_total: float = 1.0,
    prior_strength: float = 1.0,
    noise: float = 0.5,
) -> ComponentModel:
    """
    Fresh model for a corpus.

    omega_prior per bag is prior_strength times the smoothed unigram; alpha is
    uniform with total alpha_total; omega rows start at the smoothed unigram
    times seeded multiplicative noise in [1 - noise, 1 + noise], renormalised.

    Raises:
        ValueError: K < 1
        TreeSpecError: tree_spec does not yield exactly K nodes
    """
    config = InitConfig(
        K=K,
        variant=Variant(variant),
        tree_spec=tree_spec,
        seed=seed,
        alpha_total=alpha_total,
        prior_strength=prior_strength,
        noise=noise,
    )

    tree = None
    if config.tree_spec is not None:
        branching, depth = config.tree_spec
        count = tree_node_count(branching, depth)
        if count != config.K:
            raise TreeSpecError(
                f"Tree {branching},{depth} has {count} nodes but K={config.K}"
            )
        tree = build_tree(branching, depth)

    rng = substream(config.seed, MODEL_INIT_STREAM)
    omega, omega_prior = {}, {}
    for bag in corpus.bag_names:
        p_hat = smoothed_unigram(corpus, bag)
        omega_prior[bag] = config.prior_strength * p_hat
        rows = p_hat * rng.uniform(1.0 - config.noise, 1.0 + config.noise, size=(config.K, p_hat.size))
        omega[bag] = rows / rows.sum(axis=1, keepdims=True)

    return ComponentModel(
        K=config.K,
        variant=config.variant,
        alpha=np.full(config.K, config.alpha_total / config.K),
        omega=omega,
        omega_prior=omega_prior,
        vocabularies={bag: list(vocab.tokens) for bag, vocab in corpus.vocabularies.items()},
        tree=tree,
    )


# ============================================================
# Display
# ============================================================


def node_word_average(
    tree: TopicTree, m_bar: np.ndarray, omega: np.ndarray, node: int
) -> np.ndarray:
    """
    Word distribution representing a node: omega rows of the node and its
    direct children, weighted by m_k / (m_k + sum of children's m).

    Falls back to uniform weights (with a DpcaWarning) when every relevant
    m entry is zero.
    """
    members = [node, *tree.nodes[node].children]
    weights = np.asarray(m_bar, dtype=np.float64)[members]
    total = weights.sum()
    if total <= 0:
        warnings.warn(
            f"Node {node}: zero proportions for node and children; averaging uniformly",
            DpcaWarning,
            stacklevel=2,
        )
        weights = np.ones(len(members))
        total = float(len(members))
    return (weights / total) @ omega[members]
