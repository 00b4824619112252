from itertools import permutations

import numpy as np
import pytest

from dpca.corpus import RawDocument, corpus_from_raw
from dpca.errors import EmptyCorpusError, IncompatibleCorpusError
from dpca.evidence import SelectionConfig, select_K
from dpca.model import ComponentModel, Variant, document_log_likelihood, init_model
from dpca.sampler import TrainConfig, train
from dpca.synthetic import disjoint_components, generate_corpus

SHORT = dict(burn_in=5, recording=5)


def relabeled(model, order):
    """The same model with old component order[k] as component k."""
    return ComponentModel(
        **{
            **dict(model),
            "alpha": model.alpha[order],
            "omega": {bag: rows[order] for bag, rows in model.omega.items()},
        }
    )


def best_permutation_error(estimated, truth):
    """Largest per-row L1 error under the best matching of rows."""
    K = truth.shape[0]
    return min(
        max(np.abs(estimated[list(p)] - truth).sum(axis=1)) for p in permutations(range(K))
    )


class TestTrain:
    def test_single_component_is_exact_posterior_mean(self, pets_corpus):
        model = init_model(pets_corpus, K=1, seed=2)
        result = train(pets_corpus, model, TrainConfig(**SHORT, seed=4))
        vocab = pets_corpus.vocabularies["body"]
        post = model.omega_prior["body"] + np.asarray(vocab.total_freq)
        np.testing.assert_allclose(result.model.omega["body"][0], post / post.sum(), rtol=1e-12)
        np.testing.assert_allclose(result.m_mean, 1.0)
        np.testing.assert_allclose(result.m_std, 0.0, atol=1e-12)

    def test_result_shapes(self, pets_corpus):
        result = train(pets_corpus, init_model(pets_corpus, K=3), TrainConfig(burn_in=4, recording=6))
        assert len(result.burn_in_log_likelihoods) == 4
        assert len(result.log_likelihoods) == 6
        assert result.m_mean.shape == (3, 3)
        assert result.intensity_mean is None
        assert result.model.cycles_trained == 10
        assert result.model.mean_proportions.sum() == pytest.approx(1.0)
        assert result.document_log_likelihoods.shape == (6, 3)
        totals = result.document_log_likelihoods.sum(axis=1)
        np.testing.assert_allclose(totals, result.log_likelihoods)
        np.testing.assert_allclose(result.model.omega["body"].sum(axis=1), 1.0)

    def test_deterministic_for_seed(self, two_topic):
        corpus = two_topic.corpus
        model = init_model(corpus, K=2, seed=1)
        a = train(corpus, model, TrainConfig(**SHORT, seed=9))
        b = train(corpus, model, TrainConfig(**SHORT, seed=9))
        c = train(corpus, model, TrainConfig(**SHORT, seed=10))
        np.testing.assert_array_equal(a.model.omega["body"], b.model.omega["body"])
        assert a.log_likelihoods == b.log_likelihoods
        assert not np.array_equal(a.model.omega["body"], c.model.omega["body"])

    def test_worker_count_does_not_change_result(self, two_topic):
        corpus = two_topic.corpus
        model = init_model(corpus, K=2, seed=1)
        one = train(corpus, model, TrainConfig(**SHORT, seed=9, workers=1))
        four = train(corpus, model, TrainConfig(**SHORT, seed=9, workers=4))
        for bag in model.omega:
            np.testing.assert_array_equal(one.model.omega[bag], four.model.omega[bag])
        np.testing.assert_array_equal(one.m_mean, four.m_mean)

    def test_gamma_poisson_intensities(self, pets_corpus):
        model = init_model(pets_corpus, K=2, variant=Variant.GAMMA_POISSON)
        result = train(pets_corpus, model, TrainConfig(**SHORT))
        assert result.intensity_mean.shape == (3, 2)
        assert np.all(result.intensity_mean > 0)
        np.testing.assert_allclose(result.m_mean.sum(axis=1), 1.0)

    def test_hierarchical(self, two_topic):
        corpus = two_topic.corpus
        model = init_model(corpus, K=3, tree_spec=(2, 2))
        result = train(corpus, model, TrainConfig(**SHORT))
        assert result.model.tree.model_dump() == model.tree.model_dump()
        np.testing.assert_allclose(result.m_mean.sum(axis=1), 1.0)

    def test_progress_log(self, pets_corpus, tmp_path):
        path = tmp_path / "progress.tsv"
        train(pets_corpus, init_model(pets_corpus, K=2), TrainConfig(**SHORT, progress_log=path))
        lines = path.read_text().splitlines()
        assert lines[0] == "cycle\tphase\tlog_likelihood\tseconds"
        assert len(lines) == 11
        assert [line.split("\t")[1] for line in lines[1:]] == ["burn-in"] * 5 + ["recording"] * 5
        assert all(float(line.split("\t")[2]) < 0 for line in lines[1:])


class TestExchangeability:
    def test_likelihood_ignores_component_labels(self, two_topic):
        model = init_model(two_topic.corpus, K=3, seed=4)
        order = [2, 0, 1]
        swapped = relabeled(model, order)
        m = np.random.default_rng(0).dirichlet(np.ones(3), size=two_topic.corpus.I)
        for doc, m_i in zip(two_topic.corpus.documents, m):
            assert document_log_likelihood(doc, m_i[order], swapped.omega) == pytest.approx(
                document_log_likelihood(doc, m_i, model.omega), rel=1e-12
            )


class TestTrainErrors:
    def test_incompatible_vocabulary(self, pets_corpus):
        other = corpus_from_raw([RawDocument(id="x", bags={"body": {"cat": 1, "emu": 1}})])
        with pytest.raises(IncompatibleCorpusError):
            train(other, init_model(pets_corpus, K=2), TrainConfig(**SHORT))

    def test_empty_corpus(self, pets_corpus):
        empty = corpus_from_raw([], vocabularies={"body": pets_corpus.vocabularies["body"].tokens})
        with pytest.raises(EmptyCorpusError):
            train(empty, init_model(pets_corpus, K=2), TrainConfig(**SHORT))

    def test_variant_mismatch(self, pets_corpus):
        with pytest.raises(ValueError):
            train(
                pets_corpus,
                init_model(pets_corpus, K=2),
                TrainConfig(**SHORT, variant=Variant.GAMMA_POISSON),
            )

    def test_schedule_must_be_positive(self):
        with pytest.raises(ValueError):
            TrainConfig(burn_in=0)


@pytest.mark.slow
class TestRecovery:
    def test_recovers_disjoint_components(self, two_topic):
        corpus = two_topic.corpus
        model = init_model(corpus, K=2, seed=5)
        result = train(corpus, model, TrainConfig(burn_in=200, recording=100, seed=5))
        assert best_permutation_error(result.model.omega["body"], two_topic.omega["body"]) < 0.1

    def test_relabeled_start_reaches_same_components(self, two_topic):
        corpus = two_topic.corpus
        model = init_model(corpus, K=2, seed=5)
        config = TrainConfig(burn_in=200, recording=100, seed=5)
        plain = train(corpus, model, config)
        swapped = train(corpus, relabeled(model, [1, 0]), config)
        for bag in model.omega:
            assert best_permutation_error(swapped.model.omega[bag], plain.model.omega[bag]) < 0.1
        mean_ll = np.mean(plain.log_likelihoods)
        assert np.mean(swapped.log_likelihoods) == pytest.approx(mean_ll, rel=0.01)

    def test_gamma_poisson_recovers_disjoint_components(self, two_topic):
        corpus = two_topic.corpus
        model = init_model(corpus, K=2, variant=Variant.GAMMA_POISSON, seed=5)
        result = train(corpus, model, TrainConfig(burn_in=200, recording=100, seed=5))
        assert best_permutation_error(result.model.omega["body"], two_topic.omega["body"]) < 0.1

    def test_three_components_recovered_and_selected(self):
        omega = disjoint_components(3, 20)
        picked = 0
        for seed in range(5):
            sample = generate_corpus(omega, n_docs=200, doc_length=100, seed=seed)
            corpus = sample.corpus
            if seed == 0:
                model = init_model(corpus, K=3, seed=seed)
                result = train(corpus, model, TrainConfig(burn_in=200, recording=100, seed=seed))
                assert best_permutation_error(result.model.omega["body"], omega) < 0.1

            config = SelectionConfig(train=TrainConfig(burn_in=100, recording=50, seed=seed))
            picked += select_K(corpus, [1, 2, 3, 5], config).best_K == 3
        assert picked >= 4
