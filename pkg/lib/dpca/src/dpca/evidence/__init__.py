"""Model evidence: harmonic-mean estimation and choosing K."""

from dpca.model.likelihood import complete_data_log_likelihood

from .estimator import (
    EvidenceEstimate,
    dirichlet_multinomial_log_marginal,
    estimate_log_evidence,
    estimate_log_evidence_by_document,
    single_component_log_evidence,
)
from .selection import EvidenceMethod, SelectionConfig, SelectionResult, SelectionRow, select_K

__all__ = [
    "complete_data_log_likelihood",
    "EvidenceEstimate",
    "estimate_log_evidence",
    "estimate_log_evidence_by_document",
    "dirichlet_multinomial_log_marginal",
    "single_component_log_evidence",
    "EvidenceMethod",
    "SelectionConfig",
    "SelectionRow",
    "SelectionResult",
    "select_K",
]
