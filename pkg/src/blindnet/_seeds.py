"""Counter-based random streams.

Every stochastic routine in the package draws from a Philox generator keyed
by ``(seed, domain, index...)``. Streams are therefore independent of call
order and of how work is scheduled: column ``i`` of a snapshot set is the
same whether 10 or 10000 columns are drawn, and replicate seeds do not shift
when a sweep grid grows.
"""

from __future__ import annotations

import numpy as np

# Domain tags keep unrelated draws on disjoint streams.
GRAPH = 1
INIT_COLUMN = 2
KMEANS = 3
REPLICATE = 4
NORM_CHECK = 5


def _key(seed: int, path: tuple[int, ...]) -> np.random.SeedSequence:
    seed = int(seed)
    if seed < 0:
        raise ValueError("seed must be a non-negative integer")
    return np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(p) for p in path))


def substream(seed: int, *path: int) -> np.random.Generator:
    """Return a Generator for the stream keyed by ``(seed, *path)``."""
    return np.random.Generator(np.random.Philox(_key(seed, path)))


def derive_seed(seed: int, *path: int) -> int:
    """Collapse ``(seed, *path)`` into a plain integer seed for sub-tasks."""
    return int(_key(seed, path).generate_state(1, np.uint64)[0])
