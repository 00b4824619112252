"""
Component trees for hierarchical discrete PCA.

Each node k carries a stop probability q_k (Beta(alpha1_k, alpha2_k) prior)
and each parent a branch distribution n over its children (Dirichlet(beta_k)).
Proportions follow

    m_k = q_k n_k prod_{l in ancestors(k)} n_l (1 - q_l)

with q = 1 at leaves and n_root = 1.
"""

from functools import cached_property
from typing import Optional
import warnings

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from dpca.errors import DpcaWarning, TreeParameterError, TreeSpecError

ROOT_PRIOR = (1.0, 10.0)
LOWER_PRIOR = (10.0, 60.0)
LEAF_PRIOR = (1.0, 1.0)
SUM_TOLERANCE = 1e-9


class TreeNode(BaseModel):
    """One component in the tree."""

    model_config = ConfigDict(frozen=True)

    parent: Optional[int] = None
    children: list[int] = Field(default_factory=list)
    alpha1: float = Field(gt=0, description="Beta prior on staying at this node")
    alpha2: float = Field(gt=0, description="Beta prior on descending")
    beta: list[float] = Field(default_factory=list, description="Dirichlet prior over children")

    @property
    def is_leaf(self) -> bool:
        return not self.children


class TopicTree(BaseModel):
    """Rooted component tree; node 0 is the root."""

    model_config = ConfigDict(frozen=True)

    nodes: list[TreeNode]

    @model_validator(mode="after")
    def _check_structure(self) -> "TopicTree":
        K = len(self.nodes)
        if K == 0:
            raise ValueError("Tree must have at least one node")
        roots = [k for k, node in enumerate(self.nodes) if node.parent is None]
        if roots != [0]:
            raise ValueError(f"Tree must have exactly one root at index 0, found {roots}")

        for k, node in enumerate(self.nodes):
            if len(node.beta) != len(node.children):
                raise ValueError(
                    f"Node {k}: {len(node.children)} children but {len(node.beta)} beta entries"
                )
            if any(b <= 0 for b in node.beta):
                raise ValueError(f"Node {k}: beta entries must be positive")
            for child in node.children:
                if not 0 <= child < K or self.nodes[child].parent != k:
                    raise ValueError(f"Node {k}: child {child} does not point back to it")
            if node.parent is not None:
                if not 0 <= node.parent < K or k not in self.nodes[node.parent].children:
                    raise ValueError(f"Node {k}: parent {node.parent} does not list it")

        if len(self.breadth_first_order) != K:
            raise ValueError("Tree is not connected or contains a cycle")
        return self

    @property
    def K(self) -> int:
        return len(self.nodes)

    @cached_property
    def breadth_first_order(self) -> list[int]:
        """Root first; every parent precedes its children."""
        order, frontier, seen = [], [0], {0}
        while frontier:
            order.extend(frontier)
            nxt = []
            for k in frontier:
                for child in self.nodes[k].children:
                    if child in seen:
                        return order
                    seen.add(child)
                    nxt.append(child)
            frontier = nxt
        return order

    @cached_property
    def post_order(self) -> list[int]:
        """Every child precedes its parent."""
        return list(reversed(self.breadth_first_order))

    @cached_property
    def internal_nodes(self) -> list[int]:
        return [k for k in self.breadth_first_order if self.nodes[k].children]

    @cached_property
    def is_leaf(self) -> np.ndarray:
        return np.array([node.is_leaf for node in self.nodes])

    def subtree_totals(self, values: np.ndarray) -> np.ndarray:
        """S_k = values_k + sum over descendants of values."""
        totals = np.array(values, dtype=np.float64)
        for k in self.post_order:
            parent = self.nodes[k].parent
            if parent is not None:
                totals[parent] += totals[k]
        return totals

    def violates_flattening(self) -> bool:
        """True when no internal node has sum(beta_k) == alpha2_k."""
        return all(
            not np.isclose(sum(self.nodes[k].beta), self.nodes[k].alpha2)
            for k in self.internal_nodes
        )

    def flattened_equivalent(self, alpha: np.ndarray) -> "TopicTree":
        """
        Same shape with hyperparameters under which the induced proportions
        are exactly Dirichlet(alpha): alpha1_k = alpha_k, alpha2_k = sum of
        alpha over strict descendants, beta_k = subtree sums of the children.
        """
        alpha = np.asarray(alpha, dtype=np.float64)
        totals = self.subtree_totals(alpha)
        nodes = []
        for k, node in enumerate(self.nodes):
            if node.is_leaf:
                nodes.append(node.model_copy(update={"alpha1": float(alpha[k])}))
                continue
            nodes.append(
                TreeNode(
                    parent=node.parent,
                    children=list(node.children),
                    alpha1=float(alpha[k]),
                    alpha2=float(totals[k] - alpha[k]),
                    beta=[float(totals[child]) for child in node.children],
                )
            )
        return TopicTree(nodes=nodes)


# ============================================================
# Construction
# ============================================================


def tree_node_count(branching: int, depth: int) -> int:
    """Nodes in a complete tree with `depth` levels (root is level 1)."""
    return sum(branching**level for level in range(depth))


def build_tree(
    branching: int,
    depth: int,
    root_prior: tuple[float, float] = ROOT_PRIOR,
    lower_prior: tuple[float, float] = LOWER_PRIOR,
) -> TopicTree:
    """
    Complete tree numbered breadth-first, with Beta(1, 10) at the root,
    Beta(10, 60) at lower parents and beta_k = (1/B_k, ..., 1/B_k).
    """
    if branching < 1 or depth < 1:
        raise TreeSpecError(f"Branching and depth must be >= 1, got {branching},{depth}")

    parents: list[Optional[int]] = [None]
    levels = [[0]]
    for _ in range(depth - 1):
        level = []
        for parent in levels[-1]:
            for _ in range(branching):
                parents.append(parent)
                level.append(len(parents) - 1)
        levels.append(level)

    children: list[list[int]] = [[] for _ in parents]
    for k, parent in enumerate(parents):
        if parent is not None:
            children[parent].append(k)

    nodes = []
    for k, parent in enumerate(parents):
        kids = children[k]
        if not kids:
            a1, a2 = LEAF_PRIOR
        elif parent is None:
            a1, a2 = root_prior
        else:
            a1, a2 = lower_prior
        nodes.append(
            TreeNode(
                parent=parent,
                children=kids,
                alpha1=a1,
                alpha2=a2,
                beta=[1.0 / len(kids)] * len(kids) if kids else [],
            )
        )
    return TopicTree(nodes=nodes)


def parse_tree_spec(spec: str) -> tuple[int, int]:
    """Parse 'B,D' (branching factor, depth)."""
    try:
        branching, depth = (int(part) for part in spec.split(","))
    except ValueError as err:
        raise TreeSpecError(f"Tree spec must be 'B,D', got '{spec}'") from err
    return branching, depth


# ============================================================
# Mapping between (q, n) and m
# ============================================================


def map_tree_to_proportions(q: np.ndarray, n: np.ndarray, tree: TopicTree) -> np.ndarray:
    """
    Proportions m from stop probabilities q and branch probabilities n.

    Raises:
        TreeParameterError: q outside [0, 1], q != 1 at a leaf, or a parent's
            children n not summing to 1 within 1e-9
    """
    q = np.asarray(q, dtype=np.float64)
    n = np.asarray(n, dtype=np.float64)
    if np.any(q < 0) or np.any(q > 1):
        raise TreeParameterError("Stop probabilities must lie in [0, 1]")
    if np.any(np.abs(q[tree.is_leaf] - 1.0) > SUM_TOLERANCE):
        raise TreeParameterError("Leaf stop probabilities must equal 1")

    m = np.zeros(tree.K)
    reach = np.zeros(tree.K)
    reach[0] = 1.0
    for k in tree.breadth_first_order:
        m[k] = reach[k] * q[k]
        children = tree.nodes[k].children
        if not children:
            continue
        if abs(n[children].sum() - 1.0) > SUM_TOLERANCE:
            raise TreeParameterError(
                f"Node {k}: children branch probabilities sum to {n[children].sum()!r}"
            )
        reach[children] = reach[k] * (1.0 - q[k]) * n[children]
    return m


def invert_proportions_to_tree(m: np.ndarray, tree: TopicTree) -> tuple[np.ndarray, np.ndarray]:
    """
    Recover (q, n) from proportions m.

    q_k = m_k / S_k and n_l = S_l / sum of sibling subtree masses, where S is
    the subtree mass. Where a parent's children carry no mass, n is uniform
    over them and the parent takes q = 1 (a DpcaWarning is raised).
    """
    m = np.asarray(m, dtype=np.float64)
    totals = tree.subtree_totals(m)
    q = np.ones(tree.K)
    n = np.ones(tree.K)
    degenerate = []

    for k in tree.internal_nodes:
        children = tree.nodes[k].children
        below = totals[children].sum()
        if below > 0:
            q[k] = m[k] / totals[k]
            n[children] = totals[children] / below
        else:
            q[k] = 1.0
            n[children] = 1.0 / len(children)
            degenerate.append(k)

    if degenerate:
        warnings.warn(
            f"Zero subtree mass below nodes {degenerate}; using uniform branch probabilities",
            DpcaWarning,
            stacklevel=2,
        )
    return q, n
