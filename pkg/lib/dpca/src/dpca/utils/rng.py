"""
Seeded random streams.

Every random draw in the library comes from a generator derived from the
master seed plus a tuple of integer keys (stream, cycle, document, ...).
Substreams depend only on their keys, never on scheduling, so results are
identical at any worker count.
"""

import numpy as np

# Stream namespaces
INIT_STREAM = 0
SWEEP_STREAM = 1
OMEGA_STREAM = 2
MODEL_INIT_STREAM = 3
SELECTION_STREAM = 4
QUERY_STREAM = 5


def substream(seed: int, *keys: int) -> np.random.Generator:
    """Return the generator for (seed, *keys)."""
    return np.random.default_rng([seed, *keys])


def derive_seed(seed: int, *keys: int) -> int:
    """Derive a child seed for an independent job (e.g. one candidate K)."""
    return int(substream(seed, *keys).integers(0, 2**31 - 1))


def generator_seed(rng: np.random.Generator) -> int:
    """Draw a seed from an existing generator to key further substreams."""
    return int(rng.integers(0, 2**31 - 1))
