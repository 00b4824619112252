"""
Fixed-omega posterior inference for single documents.
"""

from collections.abc import Mapping, Sequence
from typing import Any, Optional
import warnings

from joblib import Parallel, delayed
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from dpca.corpus import Corpus, Document, RawDocument, read_raw_documents
from dpca.errors import DpcaWarning, IncompatibleCorpusError
from dpca.model import ComponentModel, Variant
from dpca.sampler import SweepParams, initial_state, sweep_document
from dpca.utils.rng import QUERY_STREAM, substream

DEFAULT_MAX_PRECISION = 1e6
TINY = np.finfo(np.float64).tiny


class InferConfig(BaseModel):
    """Per-document Gibbs schedule."""

    burn_in: int = Field(10, ge=0)
    cycles: int = Field(50, ge=2, description="Recorded m samples per document")
    max_precision: float = Field(DEFAULT_MAX_PRECISION, gt=0)


class PosteriorSummary(BaseModel):
    """Moments of the sampled proportions of one document."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    doc_id: str
    m_mean: np.ndarray
    m_std: np.ndarray
    dirichlet_fit: np.ndarray
    n_samples: int = Field(ge=1)
    intensity_mean: Optional[np.ndarray] = None

    @field_validator("m_mean", "m_std", "dirichlet_fit", "intensity_mean", mode="before")
    @classmethod
    def _coerce(cls, value: Any) -> Any:
        return None if value is None else np.asarray(value, dtype=np.float64)

    def to_record(self) -> dict[str, Any]:
        record = {
            "id": self.doc_id,
            "m_mean": self.m_mean.tolist(),
            "m_std": self.m_std.tolist(),
            "dirichlet_fit": self.dirichlet_fit.tolist(),
        }
        if self.intensity_mean is not None:
            record["intensity_mean"] = self.intensity_mean.tolist()
        return record


# ============================================================
# Queries
# ============================================================


class Query(Document):
    """Query counts in the same multi-bag shape as a document."""

    id: str = "query"

    @classmethod
    def from_raw(cls, raw: RawDocument, vocabularies: Mapping[str, Sequence[str]]) -> "Query":
        """Index token strings; out-of-vocabulary tokens and unknown bags are dropped with a warning."""
        bags: dict[str, dict[int, int]] = {}
        dropped: list[str] = []
        for bag, counts in raw.bags.items():
            if bag not in vocabularies:
                dropped.extend(f"{bag}:{token}" for token in counts)
                continue
            index = {token: j for j, token in enumerate(vocabularies[bag])}
            kept = {}
            for token, count in counts.items():
                if token in index:
                    kept[index[token]] = kept.get(index[token], 0) + count
                else:
                    dropped.append(f"{bag}:{token}")
            if kept:
                bags[bag] = kept
        if dropped:
            warnings.warn(
                f"Query '{raw.id}': dropped out-of-vocabulary tokens {sorted(dropped)}",
                DpcaWarning,
                stacklevel=2,
            )
        return cls(id=raw.id, bags=bags)

    @classmethod
    def from_tokens(
        cls,
        bags: Mapping[str, Mapping[str, int]],
        vocabularies: Mapping[str, Sequence[str]],
        query_id: str = "query",
    ) -> "Query":
        raw = RawDocument(id=query_id, bags={b: dict(c) for b, c in bags.items()})
        return cls.from_raw(raw, vocabularies)


def load_queries(filepath, vocabularies: Mapping[str, Sequence[str]]) -> list[Query]:
    """Read queries from a file in the corpus line format."""
    raw_queries = read_raw_documents(filepath, vocabularies)
    return [Query.from_raw(raw, vocabularies) for raw in raw_queries]


# ============================================================
# Per-document Gibbs
# ============================================================


def check_document(model: ComponentModel, doc: Document):
    """Raise IncompatibleCorpusError if doc uses bags or indices the model lacks."""
    for bag, counts in doc.bags.items():
        J = model.bag_specs.get(bag)
        if J is None:
            raise IncompatibleCorpusError(f"Document '{doc.id}' uses bag '{bag}' unknown to the model")
        if counts and max(counts) >= J:
            raise IncompatibleCorpusError(
                f"Document '{doc.id}' has token index >= J={J} in bag '{bag}'"
            )


def sample_document(
    model: ComponentModel,
    doc: Document,
    rng: np.random.Generator,
    cycles: int = 50,
    burn_in: int = 10,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Gibbs chain for one document with omega frozen.

    Returns:
        (m samples, raw weight samples), each cycles x K; the weights are the
        Gamma intensities for gamma-poisson and equal m otherwise
    """
    check_document(model, doc)
    params = SweepParams.from_model(model)
    state = initial_state(params, rng)
    m_samples = np.empty((cycles, model.K))
    weight_samples = np.empty((cycles, model.K))
    for cycle in range(burn_in + cycles):
        state = sweep_document(doc, state, params, rng)
        if cycle >= burn_in:
            m_samples[cycle - burn_in] = state.proportions
            weight_samples[cycle - burn_in] = state.weights
    return m_samples, weight_samples


def dirichlet_moment_match(
    m_samples: np.ndarray, max_precision: float = DEFAULT_MAX_PRECISION
) -> np.ndarray:
    """
    Dirichlet parameters s * mu agreeing with the samples in mean and in
    average standard deviation:

        mean_k sqrt(mu_k (1 - mu_k) / (s + 1)) = mean_k sd_k

    Zero sample variance (or a precision above max_precision) caps s at
    max_precision with a DpcaWarning. Parameters are floored above zero.

    Raises:
        ValueError: Fewer than two samples
    """
    samples = np.asarray(m_samples, dtype=np.float64)
    if samples.ndim != 2 or samples.shape[0] < 2:
        raise ValueError("Moment matching needs at least two samples")

    mu = samples.mean(axis=0)
    mean_sd = samples.std(axis=0, ddof=1).mean()
    spread = np.sqrt(np.clip(mu * (1.0 - mu), 0.0, None)).mean()

    if mean_sd <= 0 or spread <= 0:
        precision = max_precision
        warnings.warn(
            f"Zero sample variance; Dirichlet precision capped at {max_precision:g}",
            DpcaWarning,
            stacklevel=2,
        )
    else:
        precision = (spread / mean_sd) ** 2 - 1.0
        if precision > max_precision:
            warnings.warn(
                f"Dirichlet precision {precision:.4g} capped at {max_precision:g}",
                DpcaWarning,
                stacklevel=2,
            )
            precision = max_precision
        precision = max(precision, TINY)

    return np.maximum(precision * mu, TINY)


def fit_document(
    model: ComponentModel,
    doc: Document,
    rng: np.random.Generator,
    cycles: int = 50,
    burn_in: int = 10,
    max_precision: float = DEFAULT_MAX_PRECISION,
) -> tuple[np.ndarray, PosteriorSummary]:
    """
    Sample m for one document under a trained model and summarise it.

    Returns:
        (cycles x K m samples, PosteriorSummary)
    """
    m_samples, weight_samples = sample_document(model, doc, rng, cycles=cycles, burn_in=burn_in)
    summary = PosteriorSummary(
        doc_id=doc.id,
        m_mean=m_samples.mean(axis=0),
        m_std=m_samples.std(axis=0, ddof=1),
        dirichlet_fit=dirichlet_moment_match(m_samples, max_precision),
        n_samples=cycles,
        intensity_mean=(
            weight_samples.mean(axis=0) if model.variant == Variant.GAMMA_POISSON else None
        ),
    )
    return m_samples, summary


def fit_corpus(
    model: ComponentModel,
    corpus: Corpus,
    config: InferConfig | None = None,
    seed: int = 0,
    workers: int = 1,
) -> list[PosteriorSummary]:
    """fit_document over every document, each on its own seeded substream."""
    config = config or InferConfig()

    def fit(i: int, doc: Document) -> PosteriorSummary:
        rng = substream(seed, QUERY_STREAM, i)
        return fit_document(
            model, doc, rng,
            cycles=config.cycles, burn_in=config.burn_in, max_precision=config.max_precision,
        )[1]

    return Parallel(n_jobs=workers, prefer="threads")(
        delayed(fit)(i, doc) for i, doc in enumerate(corpus.documents)
    )
