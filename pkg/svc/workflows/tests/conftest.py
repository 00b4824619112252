import json

import pytest

from dpca.corpus import dump_corpus
from dpca.synthetic import disjoint_components, generate_corpus

from workflows import cli_dispatch


@pytest.fixture
def corpus_file(tmp_path):
    """30 two-topic documents with a class bag."""
    sample = generate_corpus(
        disjoint_components(2, 10), n_docs=30, doc_length=20, alpha=0.5, seed=0, class_bag="class"
    )
    return dump_corpus(sample.corpus, tmp_path / "corpus.jsonl")


@pytest.fixture
def queries_file(tmp_path):
    path = tmp_path / "queries.jsonl"
    records = [
        {"id": "q1", "bags": {"body": {"w0": 1, "w1": 1}}},
        {"id": "q2", "bags": {"body": {"w7": 2}}},
    ]
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


@pytest.fixture
def model_file(tmp_path, corpus_file):
    path = tmp_path / "model.json"
    argv = ["train", "--corpus", str(corpus_file), "--k", "2", "--seed", "1", "--out", str(path)]
    code = cli_dispatch([*argv, "--burn-in", "3", "--recording", "3"])
    assert code == 0
    return path
