import numpy as np
import pytest

from dpca.corpus import Document
from dpca.errors import ImpossibleTokenError
from dpca.model import Variant, build_tree
from dpca.sampler import (
    SampleState,
    SweepParams,
    initial_state,
    pool_assignments,
    posterior_mean_omega,
    resample_omega,
    sample_assignments,
    sample_intensities_dica,
    sample_proportions_flat,
    sample_tree_params,
    sweep_document,
)

DRAWS = 20_000


def within(samples, expected, n_se=4):
    samples = np.asarray(samples)
    se = samples.std(axis=0, ddof=1) / np.sqrt(len(samples))
    return np.all(np.abs(samples.mean(axis=0) - expected) <= n_se * se + 1e-12)


@pytest.fixture
def doc():
    return Document(id="d", bags={"body": {0: 3, 2: 1, 4: 6}})


@pytest.fixture
def omega():
    rng = np.random.default_rng(1)
    return {"body": rng.dirichlet(np.ones(5), size=3)}


class TestSampleAssignments:
    def test_partition_of_counts(self, doc, omega):
        rng = np.random.default_rng(0)
        for _ in range(50):
            weights = rng.dirichlet(np.ones(3))
            assignments, totals = sample_assignments(doc, weights, omega, rng)
            np.testing.assert_array_equal(assignments["body"].sum(axis=1), [3, 1, 6])
            assert totals.sum() == doc.length
            np.testing.assert_array_equal(totals, assignments["body"].sum(axis=0))

    def test_single_supporting_component(self):
        # only component 1 can emit token 0
        doc = Document(id="d", bags={"body": {0: 3}})
        omega = {"body": np.array([[0.0, 1.0], [0.5, 0.5]])}
        assignments, totals = sample_assignments(
            doc, np.array([0.5, 0.5]), omega, np.random.default_rng(0)
        )
        np.testing.assert_array_equal(assignments["body"], [[0, 3]])
        np.testing.assert_array_equal(totals, [0, 3])

    def test_single_component(self, doc):
        omega = {"body": np.full((1, 5), 0.2)}
        _, totals = sample_assignments(doc, np.array([1.0]), omega, np.random.default_rng(0))
        np.testing.assert_array_equal(totals, [10])

    def test_zero_weight_component_gets_nothing(self, doc, omega):
        rng = np.random.default_rng(0)
        for _ in range(20):
            _, totals = sample_assignments(doc, np.array([0.6, 0.0, 0.4]), omega, rng)
            assert totals[1] == 0

    def test_impossible_token(self):
        doc = Document(id="d7", bags={"body": {1: 2}})
        omega = {"body": np.array([[1.0, 0.0], [1.0, 0.0]])}
        with pytest.raises(ImpossibleTokenError, match="d7"):
            sample_assignments(doc, np.array([0.5, 0.5]), omega, np.random.default_rng(0))

    def test_probabilities(self):
        # p = (0.2 * 0.5, 0.8 * 0.25) normalised = (1/3, 2/3)
        doc = Document(id="d", bags={"body": {0: 30}})
        omega = {"body": np.array([[0.5, 0.5], [0.25, 0.75]])}
        rng = np.random.default_rng(4)
        draws = [
            sample_assignments(doc, np.array([0.2, 0.8]), omega, rng)[1][0] for _ in range(DRAWS)
        ]
        assert within(draws, 10.0)

    def test_weights_are_scale_invariant(self, doc, omega):
        m = np.array([0.25, 0.5, 0.25])
        a, _ = sample_assignments(doc, m, omega, np.random.default_rng(9))
        b, _ = sample_assignments(doc, 2.0 * m, omega, np.random.default_rng(9))
        np.testing.assert_array_equal(a["body"], b["body"])


class TestProportions:
    def test_dirichlet_moments(self):
        rng = np.random.default_rng(2)
        alpha, counts = np.array([1.0, 1.0, 1.0]), np.array([2, 0, 5])
        draws = np.array([sample_proportions_flat(counts, alpha, rng) for _ in range(DRAWS)])
        assert within(draws, [0.3, 0.1, 0.6])
        np.testing.assert_allclose(draws.sum(axis=1), 1.0)

    def test_gamma_moments(self):
        rng = np.random.default_rng(3)
        alpha, counts = np.array([0.5, 2.0]), np.array([3, 0])
        draws = np.array([sample_intensities_dica(counts, alpha, rng) for _ in range(DRAWS)])
        # shape alpha + c, rate 2
        assert within(draws, [1.75, 1.0])
        assert np.all(draws > 0)

    def test_normalised_intensities_match_dirichlet(self):
        rng = np.random.default_rng(6)
        alpha, counts = np.array([0.5, 1.5, 1.0]), np.array([4, 1, 0])
        draws = np.array([sample_intensities_dica(counts, alpha, rng) for _ in range(100_000)])
        normalised = draws / draws.sum(axis=1, keepdims=True)

        a = alpha + counts
        a0 = a.sum()
        assert within(normalised, a / a0)
        assert within(normalised**2, a * (a + 1) / (a0 * (a0 + 1)))


class TestTreeParams:
    def test_leaves_and_root_fixed(self):
        tree = build_tree(2, 3)
        q, n, m = sample_tree_params(np.zeros(7), tree, np.random.default_rng(0))
        np.testing.assert_array_equal(q[[3, 4, 5, 6]], 1.0)
        assert n[0] == 1.0
        assert m.sum() == pytest.approx(1.0)
        assert np.all(m >= 0)

    def test_posterior_means(self):
        tree = build_tree(2, 2)
        counts = np.array([3, 5, 2])
        rng = np.random.default_rng(8)
        draws = [sample_tree_params(counts, tree, rng) for _ in range(DRAWS)]
        q0 = np.array([q[0] for q, _, _ in draws])
        branch = np.array([n[1:] for _, n, _ in draws])
        # Beta(1 + 3, 10 + 7) and Dirichlet(0.5 + 5, 0.5 + 2)
        assert within(q0, 4 / 21)
        assert within(branch, [5.5 / 8, 2.5 / 8])


class TestOmega:
    def test_pool(self, doc):
        other = Document(id="e", bags={"body": {0: 1}})
        w_doc = {"body": np.array([[1, 2], [0, 1], [6, 0]])}
        w_other = {"body": np.array([[0, 1]])}
        pooled = pool_assignments([doc, other], [w_doc, w_other], 2, {"body": 5})
        np.testing.assert_array_equal(pooled["body"], [[1, 0, 0, 0, 6], [3, 0, 1, 0, 0]])

    def test_posterior_mean(self):
        pooled = {"body": np.array([[20, 0]])}
        mean = posterior_mean_omega(pooled, {"body": np.array([1.0, 1.0])})
        np.testing.assert_allclose(mean["body"], [[21 / 22, 1 / 22]])
        np.testing.assert_allclose(mean["body"], [[0.9545, 0.0455]], atol=1e-4)

    def test_resample_mean(self):
        pooled = {"body": np.array([[20, 0]])}
        prior = {"body": np.array([1.0, 1.0])}
        rng = np.random.default_rng(10)
        draws = np.array([resample_omega(pooled, prior, rng)["body"][0] for _ in range(DRAWS)])
        assert within(draws, [21 / 22, 1 / 22])

    def test_rows_strictly_positive(self):
        pooled = {"body": np.array([[500, 0, 0]])}
        prior = {"body": np.array([1e-3, 1e-3, 1e-3])}
        omega = resample_omega(pooled, prior, np.random.default_rng(0))
        assert np.all(omega["body"] > 0)
        assert omega["body"].sum() == pytest.approx(1.0)


class TestSweep:
    def test_variants_share_assignment_step(self, doc, omega):
        """Equal proportions give identical assignments whatever the variant."""
        m = np.array([0.25, 0.5, 0.25])
        alpha = np.ones(3)
        flat = SweepParams(alpha=alpha, omega=omega)
        dica = SweepParams(alpha=alpha, omega=omega, variant=Variant.GAMMA_POISSON)

        a = sweep_document(doc, SampleState(weights=m), flat, np.random.default_rng(5))
        b = sweep_document(doc, SampleState(weights=4.0 * m), dica, np.random.default_rng(5))
        np.testing.assert_array_equal(a.assignments["body"], b.assignments["body"])
        np.testing.assert_array_equal(a.counts, b.counts)

    def test_hierarchical_state(self, doc):
        tree = build_tree(2, 2)
        omega = {"body": np.random.default_rng(0).dirichlet(np.ones(5), size=3)}
        params = SweepParams(alpha=np.ones(3), omega=omega, tree=tree)
        state = initial_state(params, np.random.default_rng(1))
        state = sweep_document(doc, state, params, np.random.default_rng(2))
        assert state.stop is not None and state.branch is not None
        assert state.proportions.sum() == pytest.approx(1.0)
        assert state.counts.sum() == doc.length
