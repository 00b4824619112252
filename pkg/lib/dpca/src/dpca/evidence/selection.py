"""
Choosing K by evidence: one independently seeded model per candidate.
"""

from collections.abc import Iterable
from enum import Enum
import time
from typing import Optional

from joblib import Parallel, delayed
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field
from tqdm import tqdm

from dpca.corpus import Corpus
from dpca.evidence.estimator import (
    EvidenceEstimate,
    estimate_log_evidence,
    estimate_log_evidence_by_document,
)
from dpca.model import Variant, init_model
from dpca.sampler import TrainConfig, train
from dpca.utils.rng import SELECTION_STREAM, derive_seed


class EvidenceMethod(str, Enum):
    """Harmonic mean per document (default) or over whole-corpus likelihoods."""

    DOCUMENT = "document"
    CORPUS = "corpus"


class SelectionConfig(BaseModel):
    """Model settings shared by every candidate K."""

    train: TrainConfig = Field(default_factory=TrainConfig)
    variant: Variant = Variant.DIRICHLET
    alpha_total: float = Field(1.0, gt=0)
    prior_strength: float = Field(1.0, gt=0)
    method: EvidenceMethod = EvidenceMethod.DOCUMENT
    jobs: int = Field(1, ge=1, description="Candidates trained concurrently")


class SelectionRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    estimate: EvidenceEstimate
    seed: int
    seconds: float


class SelectionResult(BaseModel):
    """Evidence per candidate K, sorted by K."""

    model_config = ConfigDict(frozen=True)

    rows: list[SelectionRow]

    @property
    def best_K(self) -> int:
        # ties go to the smaller K
        best = max(self.rows, key=lambda row: (row.estimate.log_evidence, -row.estimate.K))
        return best.estimate.K

    def to_dataframe(self) -> pd.DataFrame:
        best = self.best_K
        return pd.DataFrame(
            [
                {
                    "K": row.estimate.K,
                    "log_evidence": row.estimate.log_evidence,
                    "n_samples": row.estimate.n_samples,
                    "variance_diag": row.estimate.variance_diag,
                    "seconds": round(row.seconds, 3),
                    "best": row.estimate.K == best,
                }
                for row in self.rows
            ]
        )


def _evaluate_candidate(corpus: Corpus, K: int, config: SelectionConfig) -> SelectionRow:
    started = time.perf_counter()
    seed = derive_seed(config.train.seed, SELECTION_STREAM, K)
    model = init_model(
        corpus,
        K,
        variant=config.variant,
        seed=seed,
        alpha_total=config.alpha_total,
        prior_strength=config.prior_strength,
    )
    train_config = config.train.model_copy(
        update={"seed": seed, "progress_log": None, "show_progress": False}
    )
    result = train(corpus, model, train_config)
    return SelectionRow(
        estimate=(
            estimate_log_evidence_by_document(result.document_log_likelihoods, K)
            if config.method == EvidenceMethod.DOCUMENT
            else estimate_log_evidence(result.log_likelihoods, K)
        ),
        seed=seed,
        seconds=time.perf_counter() - started,
    )


def select_K(
    corpus: Corpus,
    K_candidates: Iterable[int],
    config: Optional[SelectionConfig] = None,
) -> SelectionResult:
    """
    Train one model per candidate and estimate its evidence.

    Each candidate's seed derives from the master seed and K alone, so the
    table does not depend on the order or concurrency of the jobs.

    Raises:
        ValueError: No candidates, or a candidate below 1
    """
    config = config or SelectionConfig()
    candidates = sorted(set(K_candidates))
    if not candidates:
        raise ValueError("select_K needs at least one candidate K")
    if candidates[0] < 1:
        raise ValueError(f"Candidate K must be >= 1, got {candidates[0]}")

    jobs = (delayed(_evaluate_candidate)(corpus, K, config) for K in candidates)
    rows = Parallel(n_jobs=config.jobs, prefer="threads")(
        tqdm(jobs, total=len(candidates), desc="candidates", disable=not config.train.show_progress)
    )
    return SelectionResult(rows=list(rows))
