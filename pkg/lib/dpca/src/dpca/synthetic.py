"""
Synthetic corpora drawn from the flat generative process:

    m ~ Dirichlet(alpha)
    c ~ Multinomial(m, L_b)          per bag b
    w_k ~ Multinomial(Omega_k, c_k)  the words of bag b

Token j of every bag is named "w<j>" and vocabularies keep every token, so
document indices line up with the rows of the generating omega.
"""

from collections.abc import Mapping
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from dpca.corpus import Corpus, RawDocument, corpus_from_raw
from dpca.utils.rng import substream

DEFAULT_BAG = "body"


class SyntheticCorpus(BaseModel):
    """A sampled corpus with the parameters that generated it."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    corpus: Corpus
    omega: dict[str, np.ndarray]
    proportions: np.ndarray
    labels: list[str]


def token_names(J: int) -> list[str]:
    return [f"w{j}" for j in range(J)]


def disjoint_components(K: int, J: int) -> np.ndarray:
    """K rows, each uniform over its own contiguous block of the J tokens."""
    if J < K:
        raise ValueError(f"Need J >= K for disjoint supports, got J={J}, K={K}")
    omega = np.zeros((K, J))
    for k, block in enumerate(np.array_split(np.arange(J), K)):
        omega[k, block] = 1.0 / block.size
    return omega


def generate_corpus(
    omega: np.ndarray | Mapping[str, np.ndarray],
    n_docs: int,
    doc_length: int | Mapping[str, int],
    alpha: float | np.ndarray = 1.0,
    seed: int = 0,
    class_bag: Optional[str] = None,
    id_prefix: str = "d",
) -> SyntheticCorpus:
    """
    Sample a corpus.

    Args:
        omega: K x J rows, or per-bag rows sharing K
        n_docs: Number of documents
        doc_length: Words per document, or per bag
        alpha: Dirichlet prior on proportions (scalar means symmetric)
        seed: Master seed
        class_bag: When set, each document gets one count of its label
            (the dominant component "c<k>") in this bag
        id_prefix: Document ids are "<prefix><i>"
    """
    omegas = {DEFAULT_BAG: omega} if isinstance(omega, np.ndarray) else dict(omega)
    omegas = {bag: np.asarray(rows, dtype=np.float64) for bag, rows in sorted(omegas.items())}
    K = next(iter(omegas.values())).shape[0]
    lengths = (
        {bag: int(doc_length) for bag in omegas}
        if isinstance(doc_length, int)
        else dict(doc_length)
    )
    alpha = np.broadcast_to(np.asarray(alpha, dtype=np.float64), (K,))

    rng = substream(seed, 0)
    proportions = rng.dirichlet(alpha, size=n_docs)
    raw_docs, labels = [], []
    for i in range(n_docs):
        bags: dict[str, dict[str, int]] = {}
        for bag, rows in omegas.items():
            c = rng.multinomial(lengths[bag], proportions[i])
            counts = sum(rng.multinomial(c[k], rows[k]) for k in range(K))
            names = token_names(rows.shape[1])
            bags[bag] = {names[j]: int(counts[j]) for j in np.flatnonzero(counts)}
        label = f"c{int(np.argmax(proportions[i]))}"
        if class_bag is not None:
            bags[class_bag] = {label: 1}
        labels.append(label)
        raw_docs.append(RawDocument(id=f"{id_prefix}{i}", bags=bags, label=label))

    vocabularies = {bag: token_names(rows.shape[1]) for bag, rows in omegas.items()}
    if class_bag is not None:
        vocabularies[class_bag] = [f"c{k}" for k in range(K)]

    return SyntheticCorpus(
        corpus=corpus_from_raw(raw_docs, vocabularies=vocabularies),
        omega=omegas,
        proportions=proportions,
        labels=labels,
    )
