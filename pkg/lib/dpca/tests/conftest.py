"""Shared fixtures: tiny hand-built corpora and small synthetic ones."""

import json

import numpy as np
import pytest

from dpca.corpus import RawDocument, corpus_from_raw
from dpca.model import ComponentModel, Variant
from dpca.synthetic import disjoint_components, generate_corpus


@pytest.fixture
def write_corpus(tmp_path):
    """Write records (dicts or raw strings) as a JSON Lines file."""

    def _write(records, name="corpus.jsonl"):
        path = tmp_path / name
        lines = [r if isinstance(r, str) else json.dumps(r) for r in records]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write


@pytest.fixture
def pets_corpus():
    raw = [
        RawDocument(id="d1", bags={"body": {"cat": 2, "dog": 1}}, label="pets"),
        RawDocument(id="d2", bags={"body": {"cat": 1, "fish": 3}}, label="pets"),
        RawDocument(id="d3", bags={"body": {"car": 4}}, label="cars"),
    ]
    return corpus_from_raw(raw)


@pytest.fixture(scope="session")
def two_topic():
    """200 documents from two disjoint components with a class bag."""
    return generate_corpus(
        disjoint_components(2, 10), n_docs=200, doc_length=40, alpha=0.5, seed=3, class_bag="class"
    )


def fixed_model(omega, alpha=None, variant=Variant.DIRICHLET, bag="body", cycles_trained=1):
    """A model with given rows over tokens w0..w{J-1}."""
    omega = np.asarray(omega, dtype=np.float64)
    K, J = omega.shape
    return ComponentModel(
        K=K,
        variant=variant,
        alpha=np.full(K, 1.0 / K) if alpha is None else alpha,
        omega={bag: omega},
        omega_prior={bag: np.full(J, 1.0 / J)},
        vocabularies={bag: [f"w{j}" for j in range(J)]},
        cycles_trained=cycles_trained,
    )
