"""
Conditional samplers for the Gibbs sweeps.

Each function draws one block of hidden variables from its full conditional
given the others. Assignments are drawn per token type with a single
multinomial of size r, which is distributionally the same as drawing each
occurrence separately.
"""

from collections.abc import Mapping

import numpy as np

from dpca.corpus import Document
from dpca.errors import ImpossibleTokenError
from dpca.model.tree import TopicTree, map_tree_to_proportions

# per bag: (n_tokens, K) counts aligned with Document.arrays[bag][0]
Assignments = dict[str, np.ndarray]

TINY = np.finfo(np.float64).tiny


def sample_assignments(
    doc: Document,
    weights: np.ndarray,
    omega: Mapping[str, np.ndarray],
    rng: np.random.Generator,
) -> tuple[Assignments, np.ndarray]:
    """
    Partition each observed token count among the K components.

    For token j with count r, (w_kj)_k ~ Multinomial(r, p) with
    p_k proportional to weights_k * omega_kj. Weights are m (dirichlet and
    hierarchical) or lambda (gamma-poisson); p is scale invariant in them.

    Returns:
        (assignments per bag, component totals c)

    Raises:
        ImpossibleTokenError: An observed token has p = 0 in every component
    """
    weights = np.asarray(weights, dtype=np.float64)
    K = weights.size
    totals = np.zeros(K, dtype=np.int64)
    assignments: Assignments = {}

    for bag, (idx, counts) in doc.arrays.items():
        p = weights[:, None] * omega[bag][:, idx]
        norm = p.sum(axis=0)
        if np.any(norm <= 0):
            j = int(idx[np.flatnonzero(norm <= 0)[0]])
            raise ImpossibleTokenError(
                f"Document '{doc.id}': token {j} in bag '{bag}' has zero probability "
                f"under every component"
            )
        w = rng.multinomial(counts, (p / norm).T)
        assignments[bag] = w
        totals += w.sum(axis=0)

    return assignments, totals


def sample_proportions_flat(
    counts: np.ndarray, alpha: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """m ~ Dirichlet(alpha + c)."""
    return rng.dirichlet(np.asarray(alpha, dtype=np.float64) + counts)


def sample_intensities_dica(
    counts: np.ndarray, alpha: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """lambda_k ~ Gamma(shape alpha_k + c_k, rate 2), floored above zero."""
    shape = np.asarray(alpha, dtype=np.float64) + counts
    return np.maximum(rng.gamma(shape, scale=0.5), TINY)


def sample_tree_params(
    counts: np.ndarray, tree: TopicTree, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Stop and branch probabilities for one document, and the implied m.

    With S_k the subtree count at k:
        q_k ~ Beta(alpha1_k + c_k, alpha2_k + S_k - c_k)   (internal k)
        n_children(k) ~ Dirichlet(beta_k + S_children)
    Leaves keep q = 1 and the root keeps n = 1.

    Returns:
        (q, n, m)
    """
    counts = np.asarray(counts, dtype=np.float64)
    subtree = tree.subtree_totals(counts)
    q = np.ones(tree.K)
    n = np.ones(tree.K)

    for k in tree.internal_nodes:
        node = tree.nodes[k]
        q[k] = rng.beta(node.alpha1 + counts[k], node.alpha2 + subtree[k] - counts[k])
        n[node.children] = rng.dirichlet(np.asarray(node.beta) + subtree[node.children])

    return q, n, map_tree_to_proportions(q, n, tree)


# ============================================================
# Component rows
# ============================================================


def pool_assignments(
    docs: list[Document],
    assignments: list[Assignments],
    K: int,
    bag_specs: Mapping[str, int],
) -> dict[str, np.ndarray]:
    """Sum assignments over documents into K x J count matrices per bag."""
    pooled = {bag: np.zeros((K, J), dtype=np.int64) for bag, J in bag_specs.items()}
    for doc, doc_assignments in zip(docs, assignments):
        for bag, w in doc_assignments.items():
            idx = doc.arrays[bag][0]
            # token indices are unique within a document
            pooled[bag][:, idx] += w.T
    return pooled


def resample_omega(
    pooled: Mapping[str, np.ndarray],
    omega_prior: Mapping[str, np.ndarray],
    rng: np.random.Generator,
) -> dict[str, np.ndarray]:
    """
    Omega rows ~ Dirichlet(omega_prior + pooled counts), one bag at a time.

    Drawn as normalised Gammas; entries are floored above zero before
    normalising so every row stays strictly positive.
    """
    omega = {}
    for bag in sorted(pooled):
        draws = np.maximum(rng.gamma(omega_prior[bag] + pooled[bag]), TINY)
        omega[bag] = draws / draws.sum(axis=1, keepdims=True)
    return omega


def posterior_mean_omega(
    pooled: Mapping[str, np.ndarray], omega_prior: Mapping[str, np.ndarray]
) -> dict[str, np.ndarray]:
    """E[Omega | w] = (prior + counts) / row total, per bag."""
    out = {}
    for bag, counts in pooled.items():
        post = omega_prior[bag] + counts
        out[bag] = post / post.sum(axis=1, keepdims=True)
    return out
