"""TF-IDF candidate retrieval and model-based re-ranking."""

from .index import Index, RankedDocument, build_index, tfidf_rank
from .rerank import RerankedDocument, RetrievalConfig, rerank

__all__ = [
    "Index",
    "RankedDocument",
    "build_index",
    "tfidf_rank",
    "RetrievalConfig",
    "RerankedDocument",
    "rerank",
]
