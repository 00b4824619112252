"""
Tree Navigation Utilities

Functions to traverse a component tree and render it for inspection.
"""

from collections.abc import Callable
from typing import List

from dpca.model.tree import TopicTree


class TreeNavigator:
    """Navigate and extract information from a TopicTree."""

    INTERNAL_TAG = "T"
    LEAF_TAG = "B"

    def __init__(self, tree: TopicTree):
        self.tree = tree

    def get_children(self, node: int) -> List[int]:
        return list(self.tree.nodes[node].children)

    def get_leaves(self) -> List[int]:
        return [k for k, node in enumerate(self.tree.nodes) if node.is_leaf]

    def group_tags(self) -> List[str]:
        """Per-component tag: 'T' for internal nodes, 'B' for leaves."""
        leaves = set(self.get_leaves())
        return [self.LEAF_TAG if k in leaves else self.INTERNAL_TAG for k in range(self.tree.K)]

    def get_structure_summary(self, describe: Callable[[int], str] | None = None) -> str:
        """
        Text rendering of the tree, one node per line.

        Args:
            describe: Optional node -> text (e.g. its dominant words)
        """
        describe = describe or (lambda k: "")

        def label(k: int) -> str:
            text = describe(k)
            return f"node {k}: {text}" if text else f"node {k}"

        lines = [label(0)]

        def walk(node: int, indent: str):
            children = self.get_children(node)
            for i, child in enumerate(children):
                is_last = i == len(children) - 1
                lines.append(f"{indent}{'└── ' if is_last else '├── '}{label(child)}")
                walk(child, indent + ("    " if is_last else "│   "))

        walk(0, "")
        return "\n".join(lines)
