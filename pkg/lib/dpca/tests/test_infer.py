from itertools import product
import math

import numpy as np
import pytest
from scipy.special import gammaln

from conftest import fixed_model
from dpca.corpus import Document
from dpca.errors import (
    DpcaWarning,
    EmptyQueryError,
    ImpossibleTokenError,
    IncompatibleCorpusError,
    MissingClassBagError,
)
from dpca.infer import (
    InferConfig,
    Query,
    classify,
    dirichlet_moment_match,
    fit_corpus,
    fit_document,
    load_queries,
    query_log_likelihood,
    query_match,
    sample_document,
)
from dpca.model import ComponentModel, Variant, init_model
from dpca.sampler import TrainConfig, train
from dpca.synthetic import disjoint_components, generate_corpus

DISJOINT = [[0.5, 0.5, 0.0, 0.0], [0.0, 0.0, 0.5, 0.5]]


def log_marginal(tokens, omega, alpha):
    """ln p(tokens | Omega) with m integrated out, by enumerating assignments."""
    K = len(alpha)
    terms = []
    for z in product(range(K), repeat=len(tokens)):
        c = np.bincount(z, minlength=K)
        emission = sum(math.log(omega[k][j]) for k, j in zip(z, tokens))
        dirichlet = (
            gammaln(alpha.sum()) - gammaln(alpha.sum() + len(tokens))
            + np.sum(gammaln(alpha + c) - gammaln(alpha))
        )
        terms.append(emission + dirichlet)
    return float(np.logaddexp.reduce(terms))


class TestFitDocument:
    def test_disjoint_support_exact_posterior(self):
        model = fixed_model(DISJOINT)
        doc = Document(id="d", bags={"body": {0: 30, 1: 20}})
        m, summary = fit_document(model, doc, np.random.default_rng(0), cycles=2000)
        # Dirichlet(0.5 + 50, 0.5)
        se = m[:, 0].std(ddof=1) / math.sqrt(len(m))
        assert abs(summary.m_mean[0] - 50.5 / 51) < 4 * se
        assert summary.m_mean[0] == pytest.approx(0.990, abs=1e-3)

    def test_empty_document_samples_prior(self):
        model = fixed_model(DISJOINT, alpha=np.array([0.2, 0.8]))
        _, summary = fit_document(model, Document(id="e"), np.random.default_rng(1), cycles=4000)
        np.testing.assert_allclose(summary.m_mean, [0.2, 0.8], atol=0.03)

    def test_single_component(self):
        model = fixed_model([[0.25, 0.25, 0.25, 0.25]])
        doc = Document(id="d", bags={"body": {0: 1, 3: 2}})
        with pytest.warns(DpcaWarning):
            m, summary = fit_document(model, doc, np.random.default_rng(0), cycles=10)
        np.testing.assert_array_equal(m, 1.0)
        np.testing.assert_array_equal(summary.m_std, [0.0])

    def test_record_fields(self):
        model = fixed_model(DISJOINT)
        _, summary = fit_document(model, Document(id="d", bags={"body": {0: 3, 2: 1}}), np.random.default_rng(0))
        assert set(summary.to_record()) == {"id", "m_mean", "m_std", "dirichlet_fit"}
        assert summary.n_samples == 50

    def test_gamma_poisson_keeps_intensities(self):
        model = fixed_model(DISJOINT, variant=Variant.GAMMA_POISSON)
        _, summary = fit_document(model, Document(id="d", bags={"body": {0: 3, 2: 1}}), np.random.default_rng(0))
        assert "intensity_mean" in summary.to_record()
        assert summary.m_mean.sum() == pytest.approx(1.0)

    def test_unknown_bag(self):
        with pytest.raises(IncompatibleCorpusError):
            sample_document(fixed_model(DISJOINT), Document(id="d", bags={"title": {0: 1}}), np.random.default_rng(0))

    def test_fit_corpus_independent_of_workers(self, two_topic):
        model = fixed_model(two_topic.omega["body"] * 0.98 + 0.002)
        corpus = generate_corpus(model.omega["body"], n_docs=12, doc_length=10, seed=1).corpus
        config = InferConfig(burn_in=2, cycles=5)
        one = fit_corpus(model, corpus, config, seed=3, workers=1)
        three = fit_corpus(model, corpus, config, seed=3, workers=3)
        assert [s.to_record() for s in one] == [s.to_record() for s in three]


class TestDirichletMomentMatch:
    def test_recovers_known_dirichlet(self):
        samples = np.random.default_rng(7).dirichlet([2.0, 3.0, 5.0], size=100_000)
        np.testing.assert_allclose(dirichlet_moment_match(samples), [2.0, 3.0, 5.0], rtol=0.05)

    def test_mean_is_sample_mean(self):
        samples = np.random.default_rng(2).dirichlet([1.0, 4.0], size=50)
        fit = dirichlet_moment_match(samples)
        np.testing.assert_allclose(fit / fit.sum(), samples.mean(axis=0), rtol=1e-12)

    def test_identical_samples_cap_precision(self):
        samples = np.tile([0.3, 0.7], (5, 1))
        with pytest.warns(DpcaWarning):
            fit = dirichlet_moment_match(samples, max_precision=1e6)
        np.testing.assert_allclose(fit, [3e5, 7e5])

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            dirichlet_moment_match(np.array([[0.5, 0.5]]))


class TestQuery:
    def test_out_of_vocabulary_dropped(self):
        with pytest.warns(DpcaWarning, match="zebra"):
            query = Query.from_tokens({"body": {"w1": 2, "zebra": 1}}, {"body": ["w0", "w1"]})
        assert query.bags == {"body": {1: 2}}

    def test_load(self, write_corpus):
        path = write_corpus([{"id": "q1", "bags": {"body": {"w0": 1}}}], name="q.jsonl")
        assert load_queries(path, {"body": ["w0", "w1"]})[0].bags == {"body": {0: 1}}

    def test_empty_query(self):
        model = fixed_model(DISJOINT)
        with pytest.raises(EmptyQueryError):
            query_match(model, Document(id="d"), Query(bags={}), np.random.default_rng(0))

    def test_single_component_closed_form(self):
        model = fixed_model([[0.5, 0.25, 0.25]])
        query = Query(bags={"body": {0: 2, 1: 1}})
        expected = 2 * math.log(0.5) + math.log(0.25)
        for seed, n in [(0, 5), (1, 50)]:
            doc = Document(id=f"d{seed}", bags={"body": {2: seed + 1}})
            score = query_match(model, doc, query, np.random.default_rng(seed), n_samples=n)
            assert score == pytest.approx(expected, abs=1e-12)

    def test_query_token_no_component_emits(self):
        model = fixed_model([[0.5, 0.5, 0.0, 0.0], [0.0, 0.5, 0.5, 0.0]])
        doc = Document(id="d", bags={"body": {0: 2}})
        with pytest.raises(ImpossibleTokenError):
            query_match(model, doc, Query(bags={"body": {3: 1}}), np.random.default_rng(0))

    def test_duplicated_query_doubles_sample_log_likelihood(self):
        model = fixed_model([[0.6, 0.3, 0.1], [0.1, 0.2, 0.7]])
        query = Query(bags={"body": {0: 1, 2: 3}})
        doubled = Query(bags={"body": {0: 2, 2: 6}})
        for m in np.random.default_rng(0).dirichlet([1.0, 1.0], size=20):
            assert query_log_likelihood(doubled, m, model) == pytest.approx(
                2 * query_log_likelihood(query, m, model), rel=1e-12
            )

    def test_matches_exact_enumeration(self):
        omega = np.array([[0.7, 0.2, 0.1], [0.1, 0.3, 0.6]])
        model = fixed_model(omega)
        doc_tokens, query_tokens = [0, 0, 2], [1]
        doc = Document(id="d", bags={"body": {0: 2, 2: 1}})
        query = Query(bags={"body": {1: 1}})

        exact = math.exp(
            log_marginal(doc_tokens + query_tokens, omega, model.alpha)
            - log_marginal(doc_tokens, omega, model.alpha)
        )
        estimates = [
            math.exp(query_match(model, doc, query, np.random.default_rng(seed), n_samples=500))
            for seed in range(20)
        ]
        assert np.mean(estimates) == pytest.approx(exact, rel=0.02)


class TestClassify:
    @pytest.fixture
    def class_model(self):
        return ComponentModel(
            K=2,
            alpha=np.full(2, 0.5),
            omega={"body": np.array(DISJOINT), "class": np.array([[0.9, 0.1], [0.1, 0.9]])},
            omega_prior={"body": np.full(4, 0.25), "class": np.full(2, 0.5)},
            vocabularies={"body": ["w0", "w1", "w2", "w3"], "class": ["c0", "c1"]},
            cycles_trained=1,
        )

    def test_single_class_value(self, class_model):
        doc = Document(id="d", bags={"body": {0: 5}})
        prediction = classify(class_model, doc, np.random.default_rng(0), class_values=["c1"])
        assert prediction.predicted == "c1"
        assert not prediction.tie

    def test_scores_are_log_probabilities(self, class_model):
        doc = Document(id="d", bags={"body": {2: 8}})
        prediction = classify(class_model, doc, np.random.default_rng(0))
        assert prediction.predicted == "c1"
        assert set(prediction.scores) == {"c0", "c1"}
        assert all(np.isfinite(s) and s <= 0 for s in prediction.scores.values())

    def test_existing_class_counts_ignored(self, class_model):
        plain = Document(id="d", bags={"body": {0: 4}})
        labelled = plain.merged_with({"class": {1: 1}})
        a = classify(class_model, plain, np.random.default_rng(3))
        b = classify(class_model, labelled, np.random.default_rng(3))
        assert a.scores == b.scores

    def test_missing_class_bag(self):
        with pytest.raises(MissingClassBagError):
            classify(fixed_model(DISJOINT), Document(id="d"), np.random.default_rng(0))

    def test_unknown_class_value(self, class_model):
        with pytest.raises(MissingClassBagError):
            classify(class_model, Document(id="d"), np.random.default_rng(0), class_values=["c9"])


@pytest.mark.slow
class TestClassificationAccuracy:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_held_out_accuracy(self, seed):
        omega = disjoint_components(2, 10)
        train_set = generate_corpus(omega, 200, 40, alpha=0.1, seed=seed, class_bag="class")
        test_set = generate_corpus(
            omega, 100, 40, alpha=0.1, seed=seed + 100, class_bag="class", id_prefix="t"
        )
        model = init_model(train_set.corpus, K=2, seed=seed)
        model = train(train_set.corpus, model, TrainConfig(burn_in=50, recording=30, seed=seed)).model

        rng = np.random.default_rng(seed)
        predicted = [classify(model, doc, rng).predicted for doc in test_set.corpus.documents]
        accuracy = np.mean([p == label for p, label in zip(predicted, test_set.labels)])
        assert accuracy > 0.9
