"""
Harmonic-mean evidence estimation.

Given N posterior draws theta_n = (m for every document, Omega), the
minimum-variance importance estimate of the evidence is

    p(r | K) ~= N / (K! sum_n 1 / p(r | theta_n))

The K! accounts for the K! equivalent relabelings of the components; the
sampler explores only one of them. Everything is computed in log space.
"""

from collections.abc import Mapping, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import gammaln, logsumexp

from dpca.corpus import Corpus
from dpca.errors import EmptySampleError, NonFiniteLikelihoodError
from dpca.sampler.conditionals import pool_assignments


class EvidenceEstimate(BaseModel):
    """Log evidence for one K with its sample bookkeeping."""

    model_config = ConfigDict(frozen=True)

    K: int = Field(ge=1)
    log_evidence: float
    n_samples: int = Field(ge=1)
    log_lik_samples: list[float]
    variance_diag: float = Field(description="Sample variance of the log likelihoods")

    @model_validator(mode="after")
    def _check(self) -> "EvidenceEstimate":
        if not np.isfinite(self.log_evidence):
            raise ValueError(f"log_evidence must be finite, got {self.log_evidence}")
        if self.n_samples != len(self.log_lik_samples):
            raise ValueError(
                f"n_samples={self.n_samples} but {len(self.log_lik_samples)} samples given"
            )
        return self


def estimate_log_evidence(log_lik_samples: Sequence[float], K: int) -> EvidenceEstimate:
    """
    ln N - logsumexp(-log_lik_samples) - ln K!

    Raises:
        EmptySampleError: No samples
        NonFiniteLikelihoodError: A sample or the result is not finite
    """
    samples = np.asarray(log_lik_samples, dtype=np.float64)
    if samples.size == 0:
        raise EmptySampleError("Evidence estimation needs at least one log likelihood sample")
    if not np.all(np.isfinite(samples)):
        raise NonFiniteLikelihoodError("Log likelihood samples must be finite")

    N = samples.size
    log_evidence = float(np.log(N) - logsumexp(-samples) - gammaln(K + 1))
    if not np.isfinite(log_evidence):
        raise NonFiniteLikelihoodError(f"Log evidence is {log_evidence}")

    return EvidenceEstimate(
        K=K,
        log_evidence=log_evidence,
        n_samples=N,
        log_lik_samples=samples.tolist(),
        variance_diag=float(samples.var(ddof=1)) if N > 1 else 0.0,
    )


def estimate_log_evidence_by_document(
    document_log_likelihoods: np.ndarray, K: int
) -> EvidenceEstimate:
    """
    sum_i [ln N - logsumexp_n(-ll_ni)] - ln K! over an N x I sample matrix.

    Documents are independent given Omega, so each column gets its own
    harmonic mean over a (K - 1)-dimensional posterior. Estimates ln p(r | K)
    with every m integrated out and Omega near its posterior.

    Raises:
        EmptySampleError: No samples
        NonFiniteLikelihoodError: A sample or the result is not finite
        ValueError: The samples are not an N x I matrix
    """
    samples = np.asarray(document_log_likelihoods, dtype=np.float64)
    if samples.ndim != 2:
        raise ValueError(f"Expected an N x I matrix of log likelihoods, got shape {samples.shape}")
    if samples.size == 0:
        raise EmptySampleError("Evidence estimation needs at least one log likelihood sample")
    if not np.all(np.isfinite(samples)):
        raise NonFiniteLikelihoodError("Log likelihood samples must be finite")

    N = samples.shape[0]
    per_document = np.log(N) - logsumexp(-samples, axis=0)
    log_evidence = float(per_document.sum() - gammaln(K + 1))
    if not np.isfinite(log_evidence):
        raise NonFiniteLikelihoodError(f"Log evidence is {log_evidence}")

    totals = samples.sum(axis=1)
    return EvidenceEstimate(
        K=K,
        log_evidence=log_evidence,
        n_samples=N,
        log_lik_samples=totals.tolist(),
        variance_diag=float(totals.var(ddof=1)) if N > 1 else 0.0,
    )


def dirichlet_multinomial_log_marginal(counts: np.ndarray, prior: np.ndarray) -> float:
    """
    ln of the integral of prod_j Omega_j^{n_j} against Dirichlet(prior), i.e.
    the Dirichlet-multinomial marginal without the multinomial coefficient.
    """
    counts = np.asarray(counts, dtype=np.float64)
    prior = np.asarray(prior, dtype=np.float64)
    return float(
        gammaln(prior.sum())
        - gammaln(prior.sum() + counts.sum())
        + np.sum(gammaln(prior + counts) - gammaln(prior))
    )


def single_component_log_evidence(
    corpus: Corpus, omega_prior: Mapping[str, np.ndarray]
) -> float:
    """
    Exact log evidence of a K=1 model: the pooled corpus counts of each bag
    under that bag's Dirichlet prior on the single omega row.
    """
    pooled = pool_assignments(
        corpus.documents,
        [{bag: counts[:, None] for bag, (_, counts) in doc.arrays.items()} for doc in corpus.documents],
        1,
        corpus.bag_specs,
    )
    return sum(
        dirichlet_multinomial_log_marginal(pooled[bag][0], omega_prior[bag]) for bag in sorted(pooled)
    )
