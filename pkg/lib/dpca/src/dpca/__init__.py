"""Discrete PCA: flat, gamma-poisson and hierarchical component models of count data."""

from .corpus import (
    Corpus,
    Document,
    Vocabulary,
    VocabularyConfig,
    build_vocabulary,
    load_corpus,
    tfidf_weights,
)
from .errors import DpcaError, DpcaWarning
from .evidence import (
    EvidenceEstimate,
    EvidenceMethod,
    SelectionConfig,
    complete_data_log_likelihood,
    estimate_log_evidence,
    select_K,
)
from .features import (
    FeatureMatrix,
    FeatureMode,
    build_feature_matrix,
    component_correlations,
    component_word_counts,
    export_svmlight,
)
from .infer import (
    InferConfig,
    PosteriorSummary,
    Query,
    classify,
    dirichlet_moment_match,
    fit_document,
    query_match,
)
from .model import (
    ComponentModel,
    TopicTree,
    TreeNavigator,
    Variant,
    init_model,
    invert_proportions_to_tree,
    load_model,
    map_tree_to_proportions,
    node_word_average,
    save_model,
)
from .retrieval import Index, RetrievalConfig, build_index, rerank, tfidf_rank
from .sampler import TrainConfig, TrainResult, train
from .utils import RunLog

__all__ = [
    # Corpus
    "Corpus",
    "Document",
    "Vocabulary",
    "VocabularyConfig",
    "load_corpus",
    "build_vocabulary",
    "tfidf_weights",
    # Model
    "ComponentModel",
    "Variant",
    "TopicTree",
    "TreeNavigator",
    "init_model",
    "map_tree_to_proportions",
    "invert_proportions_to_tree",
    "node_word_average",
    "save_model",
    "load_model",
    # Sampler
    "TrainConfig",
    "TrainResult",
    "train",
    # Evidence
    "EvidenceEstimate",
    "EvidenceMethod",
    "SelectionConfig",
    "complete_data_log_likelihood",
    "estimate_log_evidence",
    "select_K",
    # Inference
    "InferConfig",
    "PosteriorSummary",
    "Query",
    "fit_document",
    "dirichlet_moment_match",
    "query_match",
    "classify",
    # Features
    "FeatureMatrix",
    "FeatureMode",
    "component_word_counts",
    "build_feature_matrix",
    "export_svmlight",
    "component_correlations",
    # Retrieval
    "Index",
    "RetrievalConfig",
    "build_index",
    "tfidf_rank",
    "rerank",
    # Errors and logging
    "DpcaError",
    "DpcaWarning",
    "RunLog",
]
