"""Space-filling and uniform sampling helpers."""

from __future__ import annotations

import numpy as np


def latin_hypercube(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Latin hypercube design in [0, 1]^d with one point per axis stratum.

    Points sit at stratum centers; the stratum order of each dimension is an
    independent permutation drawn from ``rng``, so the design is deterministic
    for a fixed generator state.
    """
    centers = (np.arange(n) + 0.5) / n
    sample = np.empty((n, d))
    for j in range(d):
        sample[:, j] = centers[rng.permutation(n)]
    return sample


def scale_to_bounds(unit: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    return lower + unit * (upper - lower)
