"""Compound matrices, squared volumes and elementary symmetric polynomials.

The squared Frobenius norm of the ``k``-th compound matrix equals the
``k``-th elementary symmetric polynomial of the squared singular values, so
``compound_norm_sq`` never enumerates minors. The explicit minor table from
``compound`` is kept for small matrices, where it serves as an independent
cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .linalg import as_matrix, singular_values
from .subsets import IndexSet, check_enumeration_size, enumerate_subsets

# |det| below this fraction of the Hadamard bound is rounded to zero.
DET_ROUNDING = 1e-14


@dataclass(frozen=True)
class CompoundMatrix:
    order: int
    row_subsets: list[IndexSet]
    col_subsets: list[IndexSet]
    minors: np.ndarray

    def minor(self, rows: IndexSet, cols: IndexSet) -> float:
        return float(self.minors[self.row_subsets.index(rows), self.col_subsets.index(cols)])

    @property
    def norm_sq(self) -> float:
        return float(np.sum(self.minors**2))


def _subset_array(subsets: list[IndexSet], k: int) -> np.ndarray:
    return np.array([s.indices for s in subsets], dtype=np.intp).reshape(len(subsets), k)


def compound(m, k: int, allow_large: bool = False) -> CompoundMatrix:
    """Table of all ``k x k`` minors, both axes in lexicographic subset order."""
    a = as_matrix(m)
    rows, cols = a.shape
    if not 0 <= k <= min(rows, cols):
        raise InvalidArgumentError(f"order k={k} outside [0, {min(rows, cols)}] for shape {a.shape}")
    check_enumeration_size(rows, cols, k, k, allow_large=allow_large)
    row_subsets = enumerate_subsets(rows, k)
    col_subsets = enumerate_subsets(cols, k)
    if k == 0:
        return CompoundMatrix(0, row_subsets, col_subsets, np.ones((1, 1)))
    if k == 1:  # 1x1 minors are the entries; skip LU so they stay bit-exact
        return CompoundMatrix(1, row_subsets, col_subsets, a.copy())

    ri = _subset_array(row_subsets, k)
    ci = _subset_array(col_subsets, k)
    blocks = a[ri[:, None, :, None], ci[None, :, None, :]]
    minors = np.linalg.det(blocks)  # LU with partial pivoting
    scale = float(np.max(np.abs(a)))
    hadamard = (np.sqrt(k) * scale) ** k
    minors = np.where(np.abs(minors) < DET_ROUNDING * hadamard, 0.0, minors)
    return CompoundMatrix(k, row_subsets, col_subsets, minors)


def elementary_symmetric_table(values, kmax: int) -> np.ndarray:
    """``T[l, j] = e_l(values[:j])`` for ``0 <= l <= kmax``, ``0 <= j <= len(values)``.

    Built from the coefficient recurrence of ``prod(1 + v t)``:
    ``T[l, j] = T[l, j-1] + values[j-1] * T[l-1, j-1]``.
    """
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    if np.any(v < 0):
        raise InvalidArgumentError("elementary symmetric polynomials need nonnegative inputs")
    if kmax < 0:
        raise InvalidArgumentError(f"kmax must be >= 0, got {kmax}")
    table = np.zeros((kmax + 1, v.size + 1))
    table[0, :] = 1.0
    for j in range(1, v.size + 1):
        table[1:, j] = table[1:, j - 1] + v[j - 1] * table[:-1, j - 1]
    return table


def elementary_symmetric(values, k: int) -> float:
    """``e_k(values)``; ``e_0 = 1``."""
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    if not 0 <= k <= v.size:
        raise InvalidArgumentError(f"k={k} outside [0, {v.size}]")
    return float(elementary_symmetric_table(v, k)[k, -1])


def compound_norm_sq(m, k: int) -> float:
    """``||C_k(m)||_F^2`` computed as ``e_k`` of the squared singular values."""
    a = as_matrix(m)
    p = min(a.shape)
    if not 0 <= k <= p:
        raise InvalidArgumentError(f"order k={k} outside [0, {p}] for shape {a.shape}")
    return elementary_symmetric(singular_values(a) ** 2, k)


def volume_sq_batch(stack: np.ndarray) -> np.ndarray:
    """``det(A^T A)`` for every ``A`` in a stack of shape ``(..., r, k)``, ``r >= k``.

    Evaluated as the product of squared diagonal entries of the QR factor,
    which avoids squaring the condition number.
    """
    a = np.asarray(stack, dtype=np.float64)
    r, k = a.shape[-2:]
    if r < k:
        raise InvalidArgumentError(f"volume needs rows >= cols, got {r}x{k}")
    if k == 0:
        return np.ones(a.shape[:-2])
    rfac = np.linalg.qr(a, mode="r")
    diag = np.diagonal(rfac, axis1=-2, axis2=-1)
    vol = np.prod(diag * diag, axis=-1)
    hadamard = np.prod(np.sum(a * a, axis=-2), axis=-1)
    return np.where(vol < DET_ROUNDING**2 * hadamard, 0.0, vol)


def volume_sq(m) -> float:
    """Squared volume ``det(m^T m)`` of the columns of a tall matrix."""
    a = as_matrix(m)
    if a.shape[0] < a.shape[1]:
        raise InvalidArgumentError(
            f"volume_sq needs rows >= cols, got {a.shape}; transpose the input"
        )
    return float(volume_sq_batch(a))


def gram_det(m) -> float:
    """``det(m^T m)`` for any shape; zero when ``m`` has more columns than rows."""
    a = as_matrix(m)
    if a.shape[0] < a.shape[1]:
        return 0.0
    return float(volume_sq_batch(a))
