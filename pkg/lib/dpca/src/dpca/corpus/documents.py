"""
Document records: raw (token strings) and indexed (token indices).
"""

from collections.abc import Mapping
from functools import cached_property
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

BagCounts = dict[int, int]
TokenArrays = tuple[np.ndarray, np.ndarray]


class RawDocument(BaseModel):
    """A parsed corpus line: bag name -> token string -> count."""

    model_config = ConfigDict(frozen=True)

    id: str
    bags: dict[str, dict[str, int]]
    label: Optional[str] = None


class Document(BaseModel):
    """
    A document as sparse counts over bag vocabularies.

    Absent entries mean zero; every stored count is a positive integer.
    Empty documents (L = 0) are allowed.
    """

    model_config = ConfigDict(frozen=True)

    id: str
    bags: dict[str, BagCounts] = Field(default_factory=dict)
    label: Optional[str] = None

    @field_validator("bags")
    @classmethod
    def _check_counts(cls, bags: dict[str, BagCounts]) -> dict[str, BagCounts]:
        for bag_name, counts in bags.items():
            for j, count in counts.items():
                if j < 0:
                    raise ValueError(f"Bag '{bag_name}': negative token index {j}")
                if count <= 0:
                    raise ValueError(f"Bag '{bag_name}': non-positive count {count} at {j}")
        return bags

    @property
    def length(self) -> int:
        """Total word count L over all bags."""
        return sum(sum(counts.values()) for counts in self.bags.values())

    def bag_length(self, bag_name: str) -> int:
        return sum(self.bags.get(bag_name, {}).values())

    @cached_property
    def arrays(self) -> dict[str, TokenArrays]:
        """Per bag (token indices, counts) as int64 arrays sorted by index."""
        out = {}
        for bag_name, counts in self.bags.items():
            if not counts:
                continue
            idx = np.array(sorted(counts), dtype=np.int64)
            out[bag_name] = (idx, np.array([counts[j] for j in idx], dtype=np.int64))
        return out

    def merged_with(self, extra: Mapping[str, Mapping[int, int]]) -> "Document":
        """Return a copy with extra counts added bag by bag."""
        bags = {bag_name: dict(counts) for bag_name, counts in self.bags.items()}
        for bag_name, counts in extra.items():
            target = bags.setdefault(bag_name, {})
            for j, count in counts.items():
                target[j] = target.get(j, 0) + count
        return Document(id=self.id, bags=bags, label=self.label)

    def without_bag(self, bag_name: str) -> "Document":
        bags = {b: dict(c) for b, c in self.bags.items() if b != bag_name}
        return Document(id=self.id, bags=bags, label=self.label)
