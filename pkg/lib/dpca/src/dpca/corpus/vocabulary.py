"""
Per-bag vocabularies: pruning, index assignment and vocabulary files.
"""

from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from functools import cached_property
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, model_validator

from dpca.corpus.documents import RawDocument
from dpca.errors import CorpusFormatError, EmptyVocabularyError


class Vocabulary(BaseModel):
    """Token strings of one bag, in index order, with corpus frequencies."""

    model_config = ConfigDict(frozen=True)

    bag_name: str
    tokens: list[str]
    doc_freq: list[int] = Field(description="Documents containing each token")
    total_freq: list[int] = Field(description="Corpus occurrences of each token")

    @model_validator(mode="after")
    def _check_consistency(self) -> "Vocabulary":
        J = len(self.tokens)
        if len(self.doc_freq) != J or len(self.total_freq) != J:
            raise ValueError(
                f"Vocabulary '{self.bag_name}': frequency vectors must have {J} entries"
            )
        if len(set(self.tokens)) != J:
            raise ValueError(f"Vocabulary '{self.bag_name}': duplicate tokens")
        for token, df, tf in zip(self.tokens, self.doc_freq, self.total_freq):
            if df < 0 or tf < df:
                raise ValueError(
                    f"Vocabulary '{self.bag_name}': inconsistent frequencies for '{token}'"
                )
        return self

    @property
    def J(self) -> int:
        return len(self.tokens)

    @cached_property
    def token_index(self) -> dict[str, int]:
        return {token: j for j, token in enumerate(self.tokens)}


class VocabularyConfig(BaseModel):
    """Pruning thresholds for build_vocabulary."""

    min_total: int = Field(4, ge=1, description="Minimum corpus occurrences")
    min_docs: int = Field(3, ge=1, description="Minimum documents containing the token")
    stopwords: frozenset[str] = frozenset()

    def build(
        self, raw_docs: Sequence[RawDocument], bag_names: Iterable[str]
    ) -> dict[str, Vocabulary]:
        return build_vocabulary(
            raw_docs,
            bag_names,
            min_total=self.min_total,
            min_docs=self.min_docs,
            stopwords=self.stopwords,
        )


# ============================================================
# Building
# ============================================================


def count_frequencies(
    raw_docs: Sequence[RawDocument], bag_name: str
) -> tuple[Counter, Counter]:
    """Return (total occurrences, document frequency) per token of one bag."""
    total: Counter = Counter()
    docs: Counter = Counter()
    for doc in raw_docs:
        counts = doc.bags.get(bag_name, {})
        total.update(counts)
        docs.update(counts.keys())
    return total, docs


def build_vocabulary(
    raw_docs: Sequence[RawDocument],
    bag_names: Iterable[str],
    min_total: int = 4,
    min_docs: int = 3,
    stopwords: frozenset[str] = frozenset(),
) -> dict[str, Vocabulary]:
    """
    Build one pruned vocabulary per bag.

    A token survives iff it occurs at least min_total times, in at least
    min_docs documents, and is not a stopword. Indices follow descending
    total frequency, ties broken lexicographically.

    Raises:
        ValueError: If min_total or min_docs is below 1
        EmptyVocabularyError: If every token of a bag is pruned
    """
    if min_total < 1 or min_docs < 1:
        raise ValueError(f"min_total and min_docs must be >= 1, got {min_total}, {min_docs}")

    vocabularies = {}
    for bag_name in sorted(bag_names):
        total, docs = count_frequencies(raw_docs, bag_name)
        kept = [
            token
            for token in total
            if total[token] >= min_total and docs[token] >= min_docs and token not in stopwords
        ]
        if not kept:
            raise EmptyVocabularyError(bag_name)

        kept.sort(key=lambda token: (-total[token], token))
        vocabularies[bag_name] = Vocabulary(
            bag_name=bag_name,
            tokens=kept,
            doc_freq=[docs[t] for t in kept],
            total_freq=[total[t] for t in kept],
        )
    return vocabularies


def fixed_vocabulary(
    raw_docs: Sequence[RawDocument], bag_name: str, tokens: Sequence[str]
) -> Vocabulary:
    """
    Vocabulary with a given token order (e.g. a trained model's), with
    frequencies counted on raw_docs. Tokens absent from raw_docs get zero
    frequencies.
    """
    total, docs = count_frequencies(raw_docs, bag_name)
    return Vocabulary(
        bag_name=bag_name,
        tokens=list(tokens),
        doc_freq=[docs[t] for t in tokens],
        total_freq=[total[t] for t in tokens],
    )


def fixed_vocabularies(
    raw_docs: Sequence[RawDocument], token_lists: Mapping[str, Sequence[str]]
) -> dict[str, Vocabulary]:
    return {
        bag_name: fixed_vocabulary(raw_docs, bag_name, tokens)
        for bag_name, tokens in token_lists.items()
    }


# ============================================================
# Files
# ============================================================


def save_vocabulary(vocabulary: Vocabulary, filepath: str | Path) -> Path:
    """Write one token per line in index order after a `#J=<count>` header."""
    filepath = Path(filepath)
    with open(filepath, "w", encoding="utf-8") as f:
        f.write(f"#J={vocabulary.J}\n")
        for token in vocabulary.tokens:
            f.write(f"{token}\n")
    return filepath


def load_vocabulary(filepath: str | Path) -> list[str]:
    """Read a vocabulary file written by save_vocabulary; returns the token list."""
    filepath = Path(filepath)
    if not filepath.exists():
        raise FileNotFoundError(f"File not found: {filepath}")

    with open(filepath, "r", encoding="utf-8") as f:
        lines = f.read().splitlines()

    if not lines or not lines[0].startswith("#J="):
        raise CorpusFormatError("Vocabulary file must start with '#J=<count>'", 1)
    try:
        J = int(lines[0][3:])
    except ValueError as err:
        raise CorpusFormatError(f"Bad vocabulary header '{lines[0]}'", 1) from err

    tokens = lines[1:]
    if len(tokens) != J:
        raise CorpusFormatError(f"Header declares {J} tokens, file has {len(tokens)}")
    return tokens


def load_stopwords(filepath: str | Path) -> frozenset[str]:
    """One stopword per line; blank lines and '#' comments ignored."""
    filepath = Path(filepath)
    if not filepath.exists():
        raise FileNotFoundError(f"File not found: {filepath}")

    with open(filepath, "r", encoding="utf-8") as f:
        words = (line.strip() for line in f)
        return frozenset(w for w in words if w and not w.startswith("#"))
