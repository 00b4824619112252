"""
Pairwise correlation of component scores.

Scores are per-document component strengths, either mean(m) * L or the
mean Gamma intensities of a gamma-poisson model. For hierarchical models the
pairs are bucketed by node type (T internal, B leaf) and each bucket is
summarised by its five numbers.
"""

from collections.abc import Sequence
from enum import Enum
from pathlib import Path
from typing import Optional
import warnings

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from dpca.errors import DpcaWarning
from dpca.infer import PosteriorSummary

ALL_PAIRS = "all"
SUMMARY_COLUMNS = ["group", "min", "q1", "median", "q3", "max", "n_pairs"]


class ScoreKind(str, Enum):
    PROPORTIONS = "proportions"
    INTENSITIES = "intensities"


def component_scores(
    summaries: Sequence[PosteriorSummary],
    lengths: Sequence[int],
    kind: ScoreKind | str = ScoreKind.PROPORTIONS,
) -> np.ndarray:
    """I x K scores: m_mean * L, or intensity means when kind is 'intensities'."""
    kind = ScoreKind(kind)
    if kind == ScoreKind.INTENSITIES:
        if any(s.intensity_mean is None for s in summaries):
            raise ValueError("Intensity scores need summaries from a gamma-poisson model")
        return np.array([s.intensity_mean for s in summaries])
    return np.array([s.m_mean * L for s, L in zip(summaries, lengths)])


class CorrelationResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pairs: pd.DataFrame
    summary: pd.DataFrame
    excluded: list[int]


def correlation_matrix(scores: np.ndarray) -> np.ndarray:
    """Pearson correlations between columns, clipped to [-1, 1] with a unit diagonal."""
    corr = np.clip(np.corrcoef(np.asarray(scores, dtype=np.float64), rowvar=False), -1.0, 1.0)
    corr = np.atleast_2d(corr)
    np.fill_diagonal(corr, 1.0)
    return corr


def _bucket(a: str, b: str) -> str:
    return "-".join(sorted((a, b), reverse=True))


def component_correlations(
    scores: np.ndarray, groups: Optional[Sequence[str]] = None
) -> CorrelationResult:
    """
    Correlation of every unordered pair of components.

    Components with zero score variance are excluded (with a DpcaWarning)
    along with every pair they belong to.

    Raises:
        ValueError: Fewer than three documents, or groups of the wrong length
    """
    scores = np.asarray(scores, dtype=np.float64)
    I, K = scores.shape
    if I < 3:
        raise ValueError(f"Correlations need at least 3 documents, got {I}")
    if groups is not None and len(groups) != K:
        raise ValueError(f"{len(groups)} group tags for {K} components")

    variable = np.flatnonzero(scores.std(axis=0) > 0)
    excluded = sorted(set(range(K)) - set(variable.tolist()))
    if excluded:
        warnings.warn(
            f"Components {excluded} have zero score variance; their pairs are excluded",
            DpcaWarning,
            stacklevel=2,
        )

    corr = correlation_matrix(scores[:, variable]) if variable.size else np.zeros((0, 0))
    a, b = np.triu_indices(variable.size, k=1)
    first, second = variable[a], variable[b]
    pairs = pd.DataFrame(
        {
            "component_a": first,
            "component_b": second,
            "r": corr[a, b],
            "group": (
                [_bucket(groups[i], groups[j]) for i, j in zip(first, second)]
                if groups is not None
                else ALL_PAIRS
            ),
        }
    )

    rows = []
    for group in sorted(pairs["group"].unique(), reverse=True):
        r = pairs.loc[pairs["group"] == group, "r"]
        q = r.quantile([0.0, 0.25, 0.5, 0.75, 1.0]).to_numpy()
        rows.append([group, *q.tolist(), int(r.size)])
    summary = pd.DataFrame(rows, columns=SUMMARY_COLUMNS)

    return CorrelationResult(pairs=pairs, summary=summary, excluded=excluded)


def plot_correlation_buckets(result: CorrelationResult, filepath: str | Path) -> Path:
    """Box plot of the pair correlations per group, saved as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    groups = result.summary["group"].tolist()
    data = [result.pairs.loc[result.pairs["group"] == g, "r"].to_numpy() for g in groups]

    fig, ax = plt.subplots(figsize=(1.6 * max(len(groups), 2) + 1, 4))
    ax.boxplot(data, tick_labels=groups)
    ax.axhline(0.0, color="grey", linewidth=0.5)
    ax.set_ylabel("correlation")
    ax.set_ylim(-1.0, 1.0)
    fig.tight_layout()

    filepath = Path(filepath)
    fig.savefig(filepath, format="svg")
    plt.close(fig)
    return filepath
