"""
Query scoring and classification.

A query x is scored against a document r by the harmonic-mean estimate of
E_{m ~ p(m | r, Omega)} p(x | m, Omega), using m drawn by Gibbs on r and x
together:

    ln N - logsumexp_n(-ln p(x | m_n, Omega))
"""

from collections.abc import Sequence
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy.special import logsumexp

from dpca.corpus import Document
from dpca.errors import EmptyQueryError, MissingClassBagError, NonFiniteLikelihoodError
from dpca.infer.posterior import Query, check_document, sample_document
from dpca.model import ComponentModel, document_log_likelihood
from dpca.utils.rng import QUERY_STREAM, generator_seed, substream

DEFAULT_CLASS_BAG = "class"


def query_log_likelihood(query: Query, m: np.ndarray, model: ComponentModel) -> float:
    """ln p(x | m, Omega), multinomial coefficient omitted."""
    return document_log_likelihood(query, m, model.omega)


def query_match(
    model: ComponentModel,
    doc: Document,
    query: Query,
    rng: np.random.Generator,
    n_samples: int = 50,
    burn_in: int = 10,
) -> float:
    """
    Log score of query against doc.

    Raises:
        EmptyQueryError: Query has no in-vocabulary tokens
        NonFiniteLikelihoodError: Some query token has zero probability
    """
    if query.length == 0:
        raise EmptyQueryError(f"Query '{query.id}' is empty after vocabulary filtering")
    check_document(model, query)

    combined = doc.merged_with(query.bags)
    m_samples, _ = sample_document(model, combined, rng, cycles=n_samples, burn_in=burn_in)
    sample_ll = np.array([query_log_likelihood(query, m, model) for m in m_samples])
    if not np.all(np.isfinite(sample_ll)):
        raise NonFiniteLikelihoodError(
            f"Query '{query.id}' has zero probability under document '{doc.id}'"
        )
    return float(np.log(n_samples) - logsumexp(-sample_ll))


class ClassPrediction(BaseModel):
    """Predicted class with every class's log score."""

    model_config = ConfigDict(frozen=True)

    doc_id: str
    predicted: str
    scores: dict[str, float]
    tie: bool = False


def classify(
    model: ComponentModel,
    doc: Document,
    rng: np.random.Generator,
    class_values: Optional[Sequence[str]] = None,
    class_bag: str = DEFAULT_CLASS_BAG,
    n_samples: int = 50,
    burn_in: int = 10,
) -> ClassPrediction:
    """
    Score each class value as a one-word query in the class bag and pick the
    best. Ties go to the earlier class value and set `tie`.

    Any class-bag counts already in the document are ignored.

    Raises:
        MissingClassBagError: Model has no class bag, or a class value is not
            in its vocabulary
    """
    if class_bag not in model.vocabularies:
        raise MissingClassBagError(f"Model has no class bag '{class_bag}'")
    vocabulary = model.vocabularies[class_bag]
    values = list(vocabulary) if class_values is None else list(class_values)
    unknown = [v for v in values if v not in vocabulary]
    if unknown:
        raise MissingClassBagError(f"Class values {unknown} not in the '{class_bag}' vocabulary")

    target = doc.without_bag(class_bag)
    base_seed = generator_seed(rng)
    scores: dict[str, float] = {}
    for c, value in enumerate(values):
        query = Query(id=value, bags={class_bag: {vocabulary.index(value): 1}})
        scores[value] = query_match(
            model, target, query, substream(base_seed, QUERY_STREAM, c),
            n_samples=n_samples, burn_in=burn_in,
        )

    best = max(scores.values())
    winners = [v for v in values if scores[v] == best]
    return ClassPrediction(doc_id=doc.id, predicted=winners[0], scores=scores, tie=len(winners) > 1)
