"""Component features, SVMlight export and component correlations."""

from .construction import (
    SPARSITY_THRESHOLD,
    ComponentWeighting,
    FeatureMatrix,
    FeatureMode,
    build_feature_matrix,
    component_word_counts,
)
from .correlations import (
    CorrelationResult,
    ScoreKind,
    component_correlations,
    component_scores,
    correlation_matrix,
    plot_correlation_buckets,
)
from .svmlight import export_svmlight, label_mapping, labels_path, read_svmlight

__all__ = [
    # Construction
    "SPARSITY_THRESHOLD",
    "FeatureMode",
    "ComponentWeighting",
    "FeatureMatrix",
    "component_word_counts",
    "build_feature_matrix",
    # SVMlight
    "export_svmlight",
    "read_svmlight",
    "label_mapping",
    "labels_path",
    # Correlations
    "ScoreKind",
    "CorrelationResult",
    "component_scores",
    "correlation_matrix",
    "component_correlations",
    "plot_correlation_buckets",
]
