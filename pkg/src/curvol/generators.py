"""Seeded test-matrix generators.

Every generator draws from ``numpy.random.default_rng(seed)``, i.e. the PCG64
bit generator with NumPy's ``SeedSequence`` seeding, so a seed fixes the
matrix on every platform.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidArgumentError

KINDS = ("gaussian", "low_rank_plus_noise")


def gaussian(m: int, n: int, seed: int) -> np.ndarray:
    """I.i.d. standard normal entries."""
    if m < 1 or n < 1:
        raise InvalidArgumentError(f"shape must be positive, got {m}x{n}")
    return np.random.default_rng(seed).standard_normal((m, n))


def low_rank_plus_noise(m: int, n: int, rank: int, noise: float, seed: int) -> np.ndarray:
    """``U @ V + noise * G`` with ``U`` (m x rank), ``V`` (rank x n), ``G`` all standard normal."""
    if m < 1 or n < 1:
        raise InvalidArgumentError(f"shape must be positive, got {m}x{n}")
    if not 0 <= rank <= min(m, n):
        raise InvalidArgumentError(f"rank={rank} outside [0, {min(m, n)}]")
    if noise < 0:
        raise InvalidArgumentError(f"noise must be >= 0, got {noise}")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((m, rank))
    v = rng.standard_normal((rank, n))
    return u @ v + noise * rng.standard_normal((m, n))


def generate(kind: str, m: int, n: int, seed: int, rank: int | None = None,
             noise: float = 0.0) -> np.ndarray:
    if kind == "gaussian":
        return gaussian(m, n, seed)
    if kind == "low_rank_plus_noise":
        if rank is None:
            raise InvalidArgumentError("low_rank_plus_noise needs a rank")
        return low_rank_plus_noise(m, n, rank, noise, seed)
    raise InvalidArgumentError(f"unknown generator {kind!r}; choose from {KINDS}")


def random_pd(size: int, rng: np.random.Generator) -> np.ndarray:
    """Symmetric positive definite ``B^T B + 0.1 I`` with Gaussian ``B``."""
    b = rng.standard_normal((size + 1, size))
    g = b.T @ b + 0.1 * np.eye(size)
    return (g + g.T) / 2
