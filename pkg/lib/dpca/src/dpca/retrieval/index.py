"""
Inverted TF-IDF index and cosine ranking.
"""

from collections import defaultdict
import math

import numpy as np
from pydantic import BaseModel, ConfigDict

from dpca.corpus import Corpus, inverse_document_frequency, tfidf_weights
from dpca.errors import EmptyCorpusError, EmptyQueryError
from dpca.infer import Query

Posting = tuple[int, float]


class Index(BaseModel):
    """
    Postings per (bag, token) over document positions, with per-document
    vector norms. Documents whose vector is all zero have norm 0 and never
    match.
    """

    model_config = ConfigDict(frozen=True)

    doc_ids: list[str]
    postings: dict[str, dict[int, list[Posting]]]
    idf: dict[str, list[float]]
    doc_norms: list[float]

    @property
    def I(self) -> int:
        return len(self.doc_ids)


class RankedDocument(BaseModel):
    model_config = ConfigDict(frozen=True)

    doc_id: str
    score: float


def build_index(corpus: Corpus) -> Index:
    """
    Raises:
        EmptyCorpusError: Corpus has no documents
    """
    if corpus.I == 0:
        raise EmptyCorpusError("Cannot index an empty corpus")

    postings: dict[str, dict[int, list[Posting]]] = {}
    squares = np.zeros(corpus.I)
    for bag in corpus.bag_names:
        bag_postings: dict[int, list[Posting]] = defaultdict(list)
        for i, weights in enumerate(tfidf_weights(corpus, bag)):
            for j, w in weights.items():
                bag_postings[j].append((i, w))
                squares[i] += w * w
        postings[bag] = dict(sorted(bag_postings.items()))

    return Index(
        doc_ids=[doc.id for doc in corpus.documents],
        postings=postings,
        idf={
            bag: inverse_document_frequency(vocab, corpus.I).tolist()
            for bag, vocab in corpus.vocabularies.items()
        },
        doc_norms=np.sqrt(squares).tolist(),
    )


def tfidf_rank(index: Index, query: Query, top_n: int = 1000) -> list[RankedDocument]:
    """
    Cosine similarity of the query's TF-IDF vector against every document;
    the top_n nonzero scores, descending, ties by document id.

    Raises:
        EmptyQueryError: Query has no in-vocabulary tokens
    """
    if query.length == 0:
        raise EmptyQueryError(f"Query '{query.id}' is empty after vocabulary filtering")

    dots: dict[int, float] = defaultdict(float)
    q_sq = 0.0
    for bag, counts in query.bags.items():
        idf = index.idf.get(bag)
        if idf is None:
            continue
        for j, count in counts.items():
            wq = count * idf[j]
            q_sq += wq * wq
            for i, wd in index.postings[bag].get(j, []):
                dots[i] += wq * wd

    if q_sq == 0.0:
        return []
    q_norm = math.sqrt(q_sq)

    ranked = []
    for i, dot in dots.items():
        norm = index.doc_norms[i]
        if norm == 0.0 or dot <= 0.0:
            continue
        ranked.append(RankedDocument(doc_id=index.doc_ids[i], score=min(dot / (norm * q_norm), 1.0)))

    ranked.sort(key=lambda r: (-r.score, r.doc_id))
    return ranked[:top_n]
