"""Real-coded variation operators: SBX crossover and polynomial mutation."""

from __future__ import annotations

import numpy as np


def sbx_crossover(p1, p2, eta_c: float, rng: np.random.Generator, lower, upper):
    """Simulated binary crossover with per-variable exchange probability 0.5.

    Children are clipped to the box bounds.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    c1 = p1.copy()
    c2 = p2.copy()
    do = rng.random(p1.size) < 0.5
    u = rng.random(p1.size)
    beta = np.where(
        u <= 0.5,
        (2.0 * u) ** (1.0 / (eta_c + 1.0)),
        (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta_c + 1.0)),
    )
    a = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    b = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    c1[do] = a[do]
    c2[do] = b[do]
    return np.clip(c1, lower, upper), np.clip(c2, lower, upper)


def polynomial_mutation(x, eta_m: float, p_mut: float, rng: np.random.Generator, lower, upper):
    """Polynomial mutation of each variable with probability ``p_mut``."""
    x = np.asarray(x, dtype=float).copy()
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    do = rng.random(x.size) < p_mut
    u = rng.random(x.size)
    delta = np.where(
        u < 0.5,
        (2.0 * u) ** (1.0 / (eta_m + 1.0)) - 1.0,
        1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta_m + 1.0)),
    )
    x[do] = x[do] + delta[do] * (upper[do] - lower[do])
    return np.clip(x, lower, upper)
