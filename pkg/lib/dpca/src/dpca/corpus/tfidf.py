"""
TF-IDF weights: raw term frequency times natural-log inverse document frequency.

No smoothing and no normalisation; cosine normalisation happens at scoring
time in retrieval.
"""

import numpy as np

from dpca.corpus.loader import Corpus
from dpca.corpus.vocabulary import Vocabulary


def inverse_document_frequency(vocabulary: Vocabulary, n_documents: int) -> np.ndarray:
    """ln(I / doc_freq) per token; tokens no document contains get 0."""
    df = np.asarray(vocabulary.doc_freq, dtype=np.float64)
    idf = np.zeros_like(df)
    present = df > 0
    idf[present] = np.log(n_documents / df[present])
    return idf


def tfidf_weights(corpus: Corpus, bag: str) -> list[dict[int, float]]:
    """
    Per-document sparse TF-IDF vectors for one bag.

    weight(i, j) = count(i, j) * ln(I / doc_freq[j]). Documents with no words
    in the bag get an empty vector.
    """
    idf = inverse_document_frequency(corpus.vocabularies[bag], corpus.I)
    return [
        {j: count * float(idf[j]) for j, count in sorted(doc.bags.get(bag, {}).items())}
        for doc in corpus.documents
    ]
