"""Deterministic per-key random streams.

Every random draw in the package comes from a generator keyed by a tuple of
nonnegative integers, so a sample's configuration depends only on its key and
never on evaluation order or worker count.
"""

from __future__ import annotations

import numpy as np

from compound_bounds.errors import DomainError


def stream(*key: int) -> np.random.Generator:
    if any(int(k) < 0 for k in key):
        raise DomainError(f"random stream keys must be nonnegative integers, got {key}")
    return np.random.default_rng([int(k) for k in key])


def unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """``count`` i.i.d. uniform points on the sphere S^(dim-1), shape (count, dim)."""
    vecs = rng.standard_normal((count, dim))
    norms = np.linalg.norm(vecs, axis=1)
    # a zero Gaussian draw has probability zero but would poison the normalization
    while np.any(norms == 0.0):
        bad = norms == 0.0
        vecs[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(vecs, axis=1)
    return vecs / norms[:, None]
