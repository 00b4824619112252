"""
Corpus container and JSON Lines loading.

Corpus line format:
    {"id": "d1", "bags": {"body": {"cat": 2, "dog": 1}}, "label": "pets"}
"""

from collections.abc import Iterable, Mapping, Sequence
from functools import cached_property
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, model_validator

from dpca.corpus.documents import Document, RawDocument
from dpca.corpus.vocabulary import Vocabulary, VocabularyConfig, fixed_vocabularies
from dpca.errors import CorpusFormatError, CorpusSchemaError, CountValidationError
from dpca.utils.data_io import read_jsonl, write_jsonl


class Corpus(BaseModel):
    """Documents plus one vocabulary per bag."""

    model_config = ConfigDict(frozen=True)

    documents: list[Document]
    vocabularies: dict[str, Vocabulary]

    @model_validator(mode="after")
    def _check_documents(self) -> "Corpus":
        seen = set()
        for doc in self.documents:
            if doc.id in seen:
                raise ValueError(f"Duplicate document id '{doc.id}'")
            seen.add(doc.id)
            for bag_name, counts in doc.bags.items():
                vocabulary = self.vocabularies.get(bag_name)
                if vocabulary is None:
                    raise ValueError(f"Document '{doc.id}' uses unknown bag '{bag_name}'")
                if counts and max(counts) >= vocabulary.J:
                    raise ValueError(
                        f"Document '{doc.id}' has token index >= J={vocabulary.J} in '{bag_name}'"
                    )
        return self

    @property
    def I(self) -> int:
        return len(self.documents)

    @property
    def bag_names(self) -> list[str]:
        return list(self.vocabularies)

    @property
    def bag_specs(self) -> dict[str, int]:
        return {bag_name: vocab.J for bag_name, vocab in self.vocabularies.items()}

    @cached_property
    def doc_index(self) -> dict[str, int]:
        return {doc.id: i for i, doc in enumerate(self.documents)}

    @property
    def labels(self) -> list[str | None]:
        return [doc.label for doc in self.documents]


# ============================================================
# Parsing
# ============================================================


def _parse_record(
    record: dict[str, Any], line_number: int, bag_names: frozenset[str]
) -> RawDocument:
    doc_id = record.get("id")
    if not isinstance(doc_id, str) or not doc_id:
        raise CorpusFormatError("Field 'id' must be a non-empty string", line_number)

    bags = record.get("bags", {})
    if not isinstance(bags, dict):
        raise CorpusFormatError("Field 'bags' must be an object", line_number)

    label = record.get("label")
    if label is not None and not isinstance(label, str):
        raise CorpusFormatError("Field 'label' must be a string", line_number)

    parsed: dict[str, dict[str, int]] = {}
    for bag_name, counts in bags.items():
        if bag_name not in bag_names:
            raise CorpusSchemaError(
                f"[Line {line_number}] Bag '{bag_name}' not in declared bags {sorted(bag_names)}"
            )
        if not isinstance(counts, dict):
            raise CorpusFormatError(f"Bag '{bag_name}' must be an object", line_number)
        for token, count in counts.items():
            # bool is an int subclass; reject it explicitly
            if isinstance(count, bool) or not isinstance(count, int) or count <= 0:
                raise CountValidationError(
                    f"[Line {line_number}] Count for '{token}' in bag '{bag_name}' "
                    f"must be a positive integer, got {count!r}"
                )
        parsed[bag_name] = dict(counts)

    return RawDocument(id=doc_id, bags=parsed, label=label)


def read_raw_documents(filepath: str | Path, bag_names: Iterable[str]) -> list[RawDocument]:
    """Parse every line of a corpus file without building vocabularies."""
    declared = frozenset(bag_names)
    raw_docs = []
    seen: set[str] = set()
    for line_number, record in read_jsonl(filepath):
        raw = _parse_record(record, line_number, declared)
        if raw.id in seen:
            raise CorpusFormatError(f"Duplicate document id '{raw.id}'", line_number)
        seen.add(raw.id)
        raw_docs.append(raw)
    return raw_docs


def discover_bag_names(filepath: str | Path) -> list[str]:
    """All bag names used anywhere in a corpus file, sorted."""
    names: set[str] = set()
    for line_number, record in read_jsonl(filepath):
        bags = record.get("bags", {})
        if not isinstance(bags, dict):
            raise CorpusFormatError("Field 'bags' must be an object", line_number)
        names.update(bags)
    return sorted(names)


def index_documents(
    raw_docs: Sequence[RawDocument], vocabularies: Mapping[str, Vocabulary]
) -> list[Document]:
    """Map token strings to indices; tokens outside a vocabulary are dropped."""
    documents = []
    for raw in raw_docs:
        bags = {}
        for bag_name, counts in raw.bags.items():
            token_index = vocabularies[bag_name].token_index
            kept = {token_index[t]: c for t, c in counts.items() if t in token_index}
            if kept:
                bags[bag_name] = kept
        documents.append(Document(id=raw.id, bags=bags, label=raw.label))
    return documents


def load_corpus(
    filepath: str | Path,
    bag_names: Iterable[str],
    min_total: int = 1,
    min_docs: int = 1,
    stopwords: frozenset[str] = frozenset(),
    vocabularies: Mapping[str, Sequence[str]] | None = None,
) -> Corpus:
    """
    Load a JSON Lines corpus.

    Args:
        filepath: Corpus file, one document object per line
        bag_names: Declared bag names; any other bag is a schema error
        min_total: Minimum corpus occurrences for a token to be kept
        min_docs: Minimum number of documents containing a kept token
        stopwords: Tokens excluded from every bag
        vocabularies: Fixed token lists per bag (e.g. a trained model's). When
            given, no pruning happens and tokens outside the lists are dropped.

    Returns:
        Corpus whose documents hold only retained tokens

    Raises:
        CorpusFormatError: Malformed line (with line number) or duplicate id
        CorpusSchemaError: Undeclared bag name
        CountValidationError: Zero, negative or non-integer count
        EmptyVocabularyError: Every token of a bag pruned
    """
    bag_names = sorted(set(bag_names))
    raw_docs = read_raw_documents(filepath, bag_names)

    if vocabularies is None:
        pruning = VocabularyConfig(min_total=min_total, min_docs=min_docs, stopwords=stopwords)
        vocabs = pruning.build(raw_docs, bag_names)
    else:
        missing = set(vocabularies) - set(bag_names)
        if missing:
            raise CorpusSchemaError(f"Vocabularies given for undeclared bags {sorted(missing)}")
        vocabs = fixed_vocabularies(raw_docs, vocabularies)

    return Corpus(documents=index_documents(raw_docs, vocabs), vocabularies=vocabs)


def corpus_from_raw(
    raw_docs: Sequence[RawDocument],
    vocabularies: Mapping[str, Sequence[str]] | None = None,
    min_total: int = 1,
    min_docs: int = 1,
) -> Corpus:
    """In-memory counterpart of load_corpus."""
    bag_names = sorted({b for raw in raw_docs for b in raw.bags} | set(vocabularies or {}))
    if vocabularies is None:
        vocabs = VocabularyConfig(min_total=min_total, min_docs=min_docs).build(raw_docs, bag_names)
    else:
        vocabs = fixed_vocabularies(raw_docs, vocabularies)
    return Corpus(documents=index_documents(raw_docs, vocabs), vocabularies=vocabs)


def document_to_record(doc: Document, vocabularies: Mapping[str, Vocabulary]) -> dict[str, Any]:
    bags = {
        bag_name: {vocabularies[bag_name].tokens[j]: count for j, count in sorted(counts.items())}
        for bag_name, counts in doc.bags.items()
    }
    record: dict[str, Any] = {"id": doc.id, "bags": bags}
    if doc.label is not None:
        record["label"] = doc.label
    return record


def dump_corpus(corpus: Corpus, filepath: str | Path) -> Path:
    """Write the retained counts back out in the corpus line format."""
    return write_jsonl(
        (document_to_record(doc, corpus.vocabularies) for doc in corpus.documents), filepath
    )
