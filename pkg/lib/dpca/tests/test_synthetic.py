import numpy as np
import pytest

from dpca.synthetic import disjoint_components, generate_corpus, token_names


class TestDisjointComponents:
    def test_blocks(self):
        omega = disjoint_components(2, 5)
        np.testing.assert_allclose(omega, [[1 / 3, 1 / 3, 1 / 3, 0, 0], [0, 0, 0, 0.5, 0.5]])

    def test_needs_enough_tokens(self):
        with pytest.raises(ValueError):
            disjoint_components(4, 3)


class TestGenerateCorpus:
    def test_shapes_and_lengths(self):
        sample = generate_corpus(disjoint_components(2, 6), n_docs=10, doc_length=12, seed=1)
        assert sample.corpus.I == 10
        assert sample.proportions.shape == (10, 2)
        assert all(doc.length == 12 for doc in sample.corpus.documents)
        assert sample.corpus.vocabularies["body"].tokens == token_names(6)

    def test_class_bag_holds_label(self, two_topic):
        class_vocab = two_topic.corpus.vocabularies["class"].tokens
        assert class_vocab == ["c0", "c1"]
        for doc, label in zip(two_topic.corpus.documents, two_topic.labels):
            assert doc.bags["class"] == {class_vocab.index(label): 1}
            assert doc.label == label

    def test_label_is_dominant_component(self, two_topic):
        dominant = two_topic.proportions.argmax(axis=1)
        assert two_topic.labels == [f"c{k}" for k in dominant]

    def test_seeded(self):
        omega = disjoint_components(2, 4)
        a = generate_corpus(omega, n_docs=5, doc_length=8, seed=3)
        b = generate_corpus(omega, n_docs=5, doc_length=8, seed=3)
        assert [d.bags for d in a.corpus.documents] == [d.bags for d in b.corpus.documents]
        np.testing.assert_array_equal(a.proportions, b.proportions)

    def test_multiple_bags(self):
        omega = {"body": disjoint_components(2, 4), "title": disjoint_components(2, 2)}
        sample = generate_corpus(omega, n_docs=4, doc_length={"body": 10, "title": 2}, seed=0)
        assert sample.corpus.bag_names == ["body", "title"]
        assert all(doc.bag_length("title") == 2 for doc in sample.corpus.documents)
