"""
Re-ranking TF-IDF candidates by query score under a trained model.
"""

from collections.abc import Sequence
from typing import Optional
import warnings

from joblib import Parallel, delayed
from pydantic import BaseModel, ConfigDict, Field

from dpca.corpus import Corpus
from dpca.errors import DpcaError, DpcaWarning, EmptyQueryError
from dpca.infer import Query, query_match
from dpca.model import ComponentModel
from dpca.utils.rng import QUERY_STREAM, substream


class RetrievalConfig(BaseModel):
    candidates: int = Field(1000, ge=1, description="TF-IDF candidates passed to the re-ranker")
    samples: int = Field(50, ge=1, description="Gibbs samples per candidate score")
    burn_in: int = Field(10, ge=0)
    seed: int = 0
    workers: int = Field(1, ge=1)


class RerankedDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    doc_id: str
    log_score: float
    tfidf_rank: int = Field(ge=1)


def rerank(
    model: ComponentModel,
    corpus: Corpus,
    candidates: Sequence[str],
    query: Query,
    config: Optional[RetrievalConfig] = None,
) -> list[RerankedDocument]:
    """
    Score each candidate with query_match and sort by log score, ties by
    TF-IDF order. Each candidate draws from a substream keyed by its corpus
    position. A candidate whose scoring fails is dropped with a DpcaWarning.

    Raises:
        ValueError: No candidates, or a candidate id not in the corpus
        EmptyQueryError: Query has no in-vocabulary tokens
    """
    config = config or RetrievalConfig()
    if not candidates:
        raise ValueError("rerank needs at least one candidate")
    if query.length == 0:
        raise EmptyQueryError(f"Query '{query.id}' is empty after vocabulary filtering")
    unknown = [doc_id for doc_id in candidates if doc_id not in corpus.doc_index]
    if unknown:
        raise ValueError(f"Candidates not in the corpus: {unknown[:5]}")

    def score(rank: int, doc_id: str) -> tuple[int, str, float | None, str | None]:
        i = corpus.doc_index[doc_id]
        try:
            value = query_match(
                model,
                corpus.documents[i],
                query,
                substream(config.seed, QUERY_STREAM, i),
                n_samples=config.samples,
                burn_in=config.burn_in,
            )
        except DpcaError as err:
            return rank, doc_id, None, str(err)
        return rank, doc_id, value, None

    scored = Parallel(n_jobs=config.workers, prefer="threads")(
        delayed(score)(rank, doc_id) for rank, doc_id in enumerate(candidates, 1)
    )

    results = []
    for rank, doc_id, value, problem in scored:
        if value is None:
            warnings.warn(f"Candidate '{doc_id}' dropped: {problem}", DpcaWarning, stacklevel=2)
            continue
        results.append(RerankedDocument(doc_id=doc_id, log_score=value, tfidf_rank=rank))

    results.sort(key=lambda r: (-r.log_score, r.tfidf_rank))
    return results
