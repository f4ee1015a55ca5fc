"""Seeded random problems.

All draws come from ``numpy.random.default_rng(seed)`` (PCG64) in a fixed
order: tensor values, then the sparsity draw, then any random custom
matrices C1, C2, C3.

* real64: uniform on ``[-1, 1]``
* complex128: uniform on the unit disk
* int64: uniform on ``{-3, ..., 3}``

An element is zeroed when its sparsity draw ``u ~ U[0, 1)`` is below the
requested probability, so for one seed the zero sets are nested as the
sparsity grows.
"""

from __future__ import annotations

import numpy as np


def random_values(rng: np.random.Generator, shape, dtype: str) -> np.ndarray:
    if dtype == "real64":
        return rng.uniform(-1.0, 1.0, shape)
    if dtype == "complex128":
        r = np.sqrt(rng.uniform(0.0, 1.0, shape))
        theta = rng.uniform(0.0, 2.0 * np.pi, shape)
        return r * np.exp(1j * theta)
    if dtype == "int64":
        return rng.integers(-3, 4, shape, dtype=np.int64)
    raise ValueError(f"unknown scalar kind {dtype!r}")


def sparsify(values: np.ndarray, draw: np.ndarray, sparsity: float) -> np.ndarray:
    if not 0.0 <= sparsity <= 1.0:
        raise ValueError(f"sparsity must lie in [0, 1], got {sparsity}")
    out = values.copy()
    out[draw < sparsity] = 0
    return out


def random_problem(shape, dtype: str = "real64", seed: int = 0, sparsity: float = 0.0,
                   custom_matrices: bool = False):
    """Return ``(X, [C1, C2, C3] or None)``."""
    rng = np.random.default_rng(seed)
    shape = tuple(shape)
    values = random_values(rng, shape, dtype)
    draw = rng.uniform(0.0, 1.0, shape)
    X = sparsify(values, draw, sparsity)
    mats = None
    if custom_matrices:
        mdtype = "int64" if dtype == "int64" else "real64"
        mats = [random_values(rng, (n, n), mdtype) for n in shape]
    return X, mats
