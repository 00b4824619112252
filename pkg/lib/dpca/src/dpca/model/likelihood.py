"""
Log likelihood of counts given proportions and component rows, with the
assignments summed out:

    ln p(r | m, Omega) = sum_{b,j} r_bj ln(sum_k m_k Omega^b_kj)

The multinomial coefficient is omitted throughout (bags are unordered and
the term cancels in every comparison the library makes).
"""

from collections.abc import Mapping, Sequence

import numpy as np

from dpca.corpus import Corpus, Document
from dpca.errors import NonFiniteLikelihoodError


def document_log_likelihood(
    doc: Document, m: np.ndarray, omega: Mapping[str, np.ndarray]
) -> float:
    """ln p(doc | m, Omega); -inf when an observed token has zero mixture probability."""
    total = 0.0
    m = np.asarray(m, dtype=np.float64)
    for bag, (idx, counts) in doc.arrays.items():
        mix = m @ omega[bag][:, idx]
        with np.errstate(divide="ignore"):
            total += float(counts @ np.log(mix))
    return total


def document_log_likelihoods(
    corpus: Corpus,
    m_all: Sequence[np.ndarray] | np.ndarray,
    omega: Mapping[str, np.ndarray],
    cycle: int | None = None,
) -> np.ndarray:
    """
    document_log_likelihood for every document, in corpus order.

    Raises:
        NonFiniteLikelihoodError: Some observed token has zero mixture
            probability (tagged with `cycle` when given)
    """
    values = np.array(
        [document_log_likelihood(doc, m, omega) for doc, m in zip(corpus.documents, m_all)],
        dtype=np.float64,
    )
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise NonFiniteLikelihoodError(
            f"Log likelihood of document '{corpus.documents[bad].id}' is {values[bad]}", cycle
        )
    return values


def complete_data_log_likelihood(
    corpus: Corpus,
    m_all: Sequence[np.ndarray] | np.ndarray,
    omega: Mapping[str, np.ndarray],
    cycle: int | None = None,
) -> float:
    """
    Sum of document_log_likelihood over the corpus; 0 for an empty corpus.

    Raises:
        NonFiniteLikelihoodError: Some observed token has zero mixture
            probability (tagged with `cycle` when given)
    """
    return float(document_log_likelihoods(corpus, m_all, omega, cycle).sum())
