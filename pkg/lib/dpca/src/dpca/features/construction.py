"""
Feature construction from words and component-generated word counts.

A document's component-generated count for k is m_mean_k * L; counts below
0.01 are treated as absent. Component features are TF-IDF weighted with a
component's document frequency being the number of documents where its
count survives the threshold.
"""

from collections.abc import Sequence
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from dpca.corpus import Corpus, tfidf_weights
from dpca.infer import PosteriorSummary
from dpca.model import ComponentModel

SPARSITY_THRESHOLD = 0.01


class FeatureMode(str, Enum):
    WORDS = "words"
    COMPONENTS = "components"
    WORDS_COMPONENTS = "words+components"


class ComponentWeighting(str, Enum):
    TFIDF = "tfidf"
    RAW = "raw"


class FeatureMatrix(BaseModel):
    """Sparse rows over named features; labels are per row when present."""

    model_config = ConfigDict(frozen=True)

    rows: list[dict[int, float]]
    feature_names: list[str]
    labels: Optional[list[Optional[str]]] = None

    @model_validator(mode="after")
    def _check(self) -> "FeatureMatrix":
        width = len(self.feature_names)
        for i, row in enumerate(self.rows):
            for j, value in row.items():
                if not 0 <= j < width:
                    raise ValueError(f"Row {i}: feature index {j} outside 0..{width - 1}")
                if not np.isfinite(value):
                    raise ValueError(f"Row {i}: feature {j} is not finite ({value})")
        if self.labels is not None and len(self.labels) != len(self.rows):
            raise ValueError(f"{len(self.labels)} labels for {len(self.rows)} rows")
        return self

    @property
    def width(self) -> int:
        return len(self.feature_names)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((len(self.rows), self.width))
        for i, row in enumerate(self.rows):
            for j, value in row.items():
                dense[i, j] = value
        return dense


def component_word_counts(
    model: ComponentModel,
    summary: PosteriorSummary,
    L: int,
    threshold: float = SPARSITY_THRESHOLD,
) -> np.ndarray:
    """
    summary.m_mean * L with entries below `threshold` set to zero.

    Raises:
        ValueError: The summary is not over the model's K components
    """
    if summary.m_mean.shape != (model.K,):
        raise ValueError(
            f"Summary of '{summary.doc_id}' has {summary.m_mean.size} proportions, model K={model.K}"
        )
    counts = summary.m_mean * L
    counts[counts < threshold] = 0.0
    return counts


def build_feature_matrix(
    corpus: Corpus,
    model: Optional[ComponentModel],
    summaries: Sequence[PosteriorSummary],
    mode: FeatureMode | str = FeatureMode.WORDS_COMPONENTS,
    bags: Optional[Sequence[str]] = None,
    component_weighting: ComponentWeighting | str = ComponentWeighting.TFIDF,
) -> FeatureMatrix:
    """
    Feature rows for every document of a corpus.

    Word features are the TF-IDF weights of the chosen bags (all bags by
    default) laid out bag after bag; component features follow every word
    feature.

    Raises:
        ValueError: Component features requested from an untrained model, or
            summaries missing for some documents
    """
    mode = FeatureMode(mode)
    component_weighting = ComponentWeighting(component_weighting)
    bags = list(corpus.bag_names if bags is None else bags)

    rows: list[dict[int, float]] = [{} for _ in corpus.documents]
    names: list[str] = []

    if mode != FeatureMode.COMPONENTS:
        for bag in bags:
            offset = len(names)
            for row, weights in zip(rows, tfidf_weights(corpus, bag)):
                row.update({offset + j: w for j, w in weights.items()})
            names.extend(f"{bag}:{token}" for token in corpus.vocabularies[bag].tokens)

    if mode != FeatureMode.WORDS:
        if model is None or not model.is_trained:
            raise ValueError("Component features need a trained model")
        by_id = {summary.doc_id: summary for summary in summaries}
        missing = [doc.id for doc in corpus.documents if doc.id not in by_id]
        if missing:
            raise ValueError(f"No posterior summary for documents {missing[:5]}")

        counts = np.array(
            [component_word_counts(model, by_id[doc.id], doc.length) for doc in corpus.documents]
        ).reshape(corpus.I, model.K)
        if component_weighting == ComponentWeighting.TFIDF:
            df = (counts > 0).sum(axis=0)
            idf = np.zeros(model.K)
            idf[df > 0] = np.log(corpus.I / df[df > 0])
            weights = counts * idf
        else:
            weights = counts

        offset = len(names)
        for row, doc_counts, doc_weights in zip(rows, counts, weights):
            present = np.flatnonzero(doc_counts)
            row.update({offset + int(k): float(doc_weights[k]) for k in present})
        names.extend(f"component:{k}" for k in range(model.K))

    return FeatureMatrix(
        rows=[dict(sorted(row.items())) for row in rows],
        feature_names=names,
        labels=corpus.labels,
    )
