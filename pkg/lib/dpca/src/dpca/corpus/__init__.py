"""Corpus ingestion, vocabularies and TF-IDF weighting."""

from .documents import Document, RawDocument
from .loader import (
    Corpus,
    corpus_from_raw,
    discover_bag_names,
    dump_corpus,
    index_documents,
    load_corpus,
    read_raw_documents,
)
from .tfidf import inverse_document_frequency, tfidf_weights
from .vocabulary import (
    Vocabulary,
    VocabularyConfig,
    build_vocabulary,
    fixed_vocabularies,
    load_stopwords,
    load_vocabulary,
    save_vocabulary,
)

__all__ = [
    # Records
    "RawDocument",
    "Document",
    "Corpus",
    # Loading
    "load_corpus",
    "corpus_from_raw",
    "read_raw_documents",
    "discover_bag_names",
    "index_documents",
    "dump_corpus",
    # Vocabularies
    "Vocabulary",
    "VocabularyConfig",
    "build_vocabulary",
    "fixed_vocabularies",
    "save_vocabulary",
    "load_vocabulary",
    "load_stopwords",
    # TF-IDF
    "tfidf_weights",
    "inverse_document_frequency",
]
