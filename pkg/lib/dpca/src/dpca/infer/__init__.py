"""Inference on new documents: posterior proportions, query scores and classes."""

from .posterior import (
    InferConfig,
    PosteriorSummary,
    Query,
    dirichlet_moment_match,
    fit_corpus,
    fit_document,
    load_queries,
    sample_document,
)
from .scoring import ClassPrediction, classify, query_log_likelihood, query_match

__all__ = [
    "InferConfig",
    "PosteriorSummary",
    "Query",
    "load_queries",
    "sample_document",
    "fit_document",
    "fit_corpus",
    "dirichlet_moment_match",
    "query_log_likelihood",
    "query_match",
    "ClassPrediction",
    "classify",
]
