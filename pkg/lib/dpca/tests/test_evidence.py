import math

import numpy as np
import pytest
from scipy.special import logsumexp

from dpca.errors import EmptySampleError, NonFiniteLikelihoodError
from dpca.evidence import (
    EvidenceMethod,
    SelectionConfig,
    dirichlet_multinomial_log_marginal,
    estimate_log_evidence,
    estimate_log_evidence_by_document,
    select_K,
    single_component_log_evidence,
)
from dpca.model import init_model
from dpca.sampler import TrainConfig, train

QUICK = SelectionConfig(train=TrainConfig(burn_in=3, recording=4, seed=1))


class TestEstimateLogEvidence:
    def test_harmonic_mean(self):
        # N / (1/0.5 + 1/0.25) = 2 / 6
        estimate = estimate_log_evidence([math.log(0.5), math.log(0.25)], K=1)
        assert estimate.log_evidence == pytest.approx(math.log(1 / 3), abs=1e-12)
        assert estimate.n_samples == 2

    def test_single_sample(self):
        estimate = estimate_log_evidence([-12.5], K=1)
        assert estimate.log_evidence == pytest.approx(-12.5)
        assert estimate.variance_diag == 0.0

    def test_label_switching_factor(self):
        samples = [-10.0, -11.0, -9.5]
        one = estimate_log_evidence(samples, K=1).log_evidence
        three = estimate_log_evidence(samples, K=3).log_evidence
        assert one - three == pytest.approx(math.log(6))

    def test_extreme_values_stay_finite(self):
        estimate = estimate_log_evidence([-1e6, -1e6 + 1], K=1)
        expected = math.log(2) - (1e6 + math.log1p(math.exp(-1)))
        assert estimate.log_evidence == pytest.approx(expected, rel=1e-12)

    def test_below_arithmetic_mean(self):
        samples = np.random.default_rng(0).normal(-50, 3, size=200)
        estimate = estimate_log_evidence(samples, K=1)
        assert estimate.log_evidence <= logsumexp(samples) - math.log(samples.size)
        assert estimate.log_evidence >= samples.min()

    def test_empty(self):
        with pytest.raises(EmptySampleError):
            estimate_log_evidence([], K=2)

    def test_non_finite_sample(self):
        with pytest.raises(NonFiniteLikelihoodError):
            estimate_log_evidence([-3.0, -np.inf], K=2)


class TestEstimateByDocument:
    def test_harmonic_mean_per_column(self):
        samples = np.log([[0.5, 0.5], [0.25, 0.25]])
        estimate = estimate_log_evidence_by_document(samples, K=1)
        assert estimate.log_evidence == pytest.approx(2 * math.log(1 / 3), abs=1e-12)
        assert estimate.log_lik_samples == pytest.approx([2 * math.log(0.5), 2 * math.log(0.25)])
        assert estimate.n_samples == 2

    def test_single_document_matches_corpus_estimate(self):
        column = np.random.default_rng(1).normal(-40, 2, size=30)
        by_document = estimate_log_evidence_by_document(column[:, None], K=4)
        corpus_wide = estimate_log_evidence(column, K=4)
        assert by_document.log_evidence == pytest.approx(corpus_wide.log_evidence, rel=1e-12)
        assert by_document.variance_diag == pytest.approx(corpus_wide.variance_diag)

    def test_label_switching_factor(self):
        samples = np.random.default_rng(2).normal(-20, 1, size=(10, 5))
        one = estimate_log_evidence_by_document(samples, K=1).log_evidence
        three = estimate_log_evidence_by_document(samples, K=3).log_evidence
        assert one - three == pytest.approx(math.log(6))

    def test_not_a_matrix(self):
        with pytest.raises(ValueError):
            estimate_log_evidence_by_document(np.array([-1.0, -2.0]), K=1)

    def test_empty(self):
        with pytest.raises(EmptySampleError):
            estimate_log_evidence_by_document(np.zeros((0, 3)), K=1)

    def test_non_finite_sample(self):
        with pytest.raises(NonFiniteLikelihoodError):
            estimate_log_evidence_by_document(np.array([[-1.0, np.nan]]), K=1)


class TestExactEvidence:
    def test_dirichlet_multinomial(self):
        assert dirichlet_multinomial_log_marginal(np.array([1, 0]), np.array([1.0, 1.0])) == (
            pytest.approx(math.log(0.5))
        )

    def test_pooled_counts(self, pets_corpus):
        prior = {"body": np.ones(4)}
        counts = np.asarray(pets_corpus.vocabularies["body"].total_freq)
        expected = dirichlet_multinomial_log_marginal(counts, prior["body"])
        assert single_component_log_evidence(pets_corpus, prior) == pytest.approx(expected)


class TestSelectK:
    def test_table(self, pets_corpus):
        table = select_K(pets_corpus, [3, 1, 2], QUICK).to_dataframe()
        assert table["K"].tolist() == [1, 2, 3]
        assert list(table.columns) == [
            "K",
            "log_evidence",
            "n_samples",
            "variance_diag",
            "seconds",
            "best",
        ]
        assert table["best"].sum() == 1
        assert (table["n_samples"] == 4).all()

    def test_independent_of_concurrency(self, pets_corpus):
        serial = select_K(pets_corpus, [1, 2], QUICK)
        parallel = select_K(pets_corpus, [2, 1], QUICK.model_copy(update={"jobs": 2}))
        assert [r.estimate.log_evidence for r in serial.rows] == [
            r.estimate.log_evidence for r in parallel.rows
        ]
        assert [r.seed for r in serial.rows] == [r.seed for r in parallel.rows]

    def test_methods_share_samples(self, pets_corpus):
        by_document = select_K(pets_corpus, [2], QUICK)
        corpus_config = QUICK.model_copy(update={"method": EvidenceMethod.CORPUS})
        corpus_wide = select_K(pets_corpus, [2], corpus_config)
        samples = by_document.rows[0].estimate.log_lik_samples
        assert samples == pytest.approx(corpus_wide.rows[0].estimate.log_lik_samples)
        expected = estimate_log_evidence(samples, K=2).log_evidence
        assert corpus_wide.rows[0].estimate.log_evidence == pytest.approx(expected)

    @pytest.mark.parametrize("candidates", [[], [0, 2]])
    def test_bad_candidates(self, pets_corpus, candidates):
        with pytest.raises(ValueError):
            select_K(pets_corpus, candidates, QUICK)


@pytest.mark.slow
class TestEvidenceAccuracy:
    def test_single_component_matches_exact(self, pets_corpus):
        for seed in range(5):
            model = init_model(pets_corpus, K=1, prior_strength=100.0, seed=seed)
            exact = single_component_log_evidence(pets_corpus, model.omega_prior)
            result = train(pets_corpus, model, TrainConfig(burn_in=10, recording=2000, seed=seed))
            estimate = estimate_log_evidence(result.log_likelihoods, K=1)
            assert abs(estimate.log_evidence - exact) < 0.3

    def test_two_topics_prefer_two_components(self, two_topic):
        config = SelectionConfig(train=TrainConfig(burn_in=100, recording=50, seed=2))
        result = select_K(two_topic.corpus, [1, 2], config)
        evidence = {row.estimate.K: row.estimate.log_evidence for row in result.rows}
        assert evidence[2] > evidence[1]
        assert result.best_K == 2
