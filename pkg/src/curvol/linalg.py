"""Dense matrix kernels: validation, SVD, pseudoinverse, truncation, CSV I/O.

Matrices are plain ``numpy.ndarray`` objects of dtype float64 and ndim 2.
Blocks produced by partitioning may have a zero dimension; every other
matrix has positive row and column counts.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .errors import InvalidArgumentError, InvalidInputError

EPS = np.finfo(np.float64).eps

# Entrywise equality used across the test-suite and the identity runner.
DEFAULT_ATOL = 1e-12
DEFAULT_RTOL = 1e-10


def as_matrix(m, name: str = "matrix", allow_empty: bool = False) -> np.ndarray:
    """Return ``m`` as a finite float64 2-D array, raising on bad data."""
    try:
        arr = np.asarray(m, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"{name}: cannot convert to a real matrix ({exc})") from None
    if arr.ndim != 2:
        raise InvalidInputError(f"{name}: expected a 2-D matrix, got ndim={arr.ndim}")
    if not allow_empty and (arr.shape[0] == 0 or arr.shape[1] == 0):
        raise InvalidInputError(f"{name}: shape {arr.shape} has an empty dimension")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains NaN or Inf entries")
    return arr


def as_vector(v, length: int | None = None, name: str = "vector") -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: contains NaN or Inf entries")
    if length is not None and arr.shape[0] != length:
        raise InvalidArgumentError(f"{name}: expected length {length}, got {arr.shape[0]}")
    return arr


def matrices_close(a, b, atol: float = DEFAULT_ATOL, rtol: float = DEFAULT_RTOL) -> bool:
    """Entrywise ``|a - b| <= atol + rtol * max|b|``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        return False
    if a.size == 0:
        return True
    scale = float(np.max(np.abs(b)))
    return bool(np.all(np.abs(a - b) <= atol + rtol * scale))


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD ``m = left_vectors @ diag(singular_values) @ right_vectors.T``."""

    left_vectors: np.ndarray
    singular_values: np.ndarray
    right_vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.left_vectors * self.singular_values) @ self.right_vectors.T


def svd(m) -> SvdResult:
    """Thin singular value decomposition with nonincreasing singular values."""
    a = as_matrix(m)
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    return SvdResult(left_vectors=u, singular_values=s, right_vectors=vt.T)


def singular_values(m) -> np.ndarray:
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def default_tol_factor(shape: Sequence[int]) -> float:
    return EPS * max(shape[-2], shape[-1], 1)


def pseudoinverse(m, tol_factor: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse by truncated SVD.

    Singular values ``<= tol_factor * sigma_max`` are treated as zero; the
    default ``tol_factor`` is ``eps * max(rows, cols)``. A stack of matrices
    with shape ``(..., r, k)`` is inverted slice by slice. A zero matrix maps
    to the zero matrix of transposed shape.
    """
    a = np.asarray(m, dtype=np.float64)
    if a.ndim < 2:
        raise InvalidInputError(f"pseudoinverse: expected ndim >= 2, got {a.ndim}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("pseudoinverse: contains NaN or Inf entries")
    if tol_factor is None:
        tol_factor = default_tol_factor(a.shape)
    elif tol_factor <= 0:
        raise InvalidArgumentError(f"tol_factor must be positive, got {tol_factor}")
    out_shape = a.shape[:-2] + (a.shape[-1], a.shape[-2])
    if a.shape[-1] == 0 or a.shape[-2] == 0:
        return np.zeros(out_shape)

    u, s, vt = np.linalg.svd(a, full_matrices=False)
    cutoff = tol_factor * s[..., :1]
    keep = s > cutoff
    s_inv = np.divide(1.0, s, out=np.zeros_like(s), where=keep)
    # V diag(1/s) U^T
    return np.matmul(np.swapaxes(vt, -1, -2) * s_inv[..., None, :], np.swapaxes(u, -1, -2))


def numerical_rank(m, tol_factor: float | None = None) -> int:
    a = as_matrix(m, allow_empty=True)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if tol_factor is None:
        tol_factor = default_tol_factor(a.shape)
    return int(np.sum(s > tol_factor * s[0]))


def frobenius_sq(m) -> float:
    """Sum of squared entries."""
    a = as_matrix(m, allow_empty=True)
    return float(np.sum(a * a))


def best_rank_k(m, k: int) -> np.ndarray:
    """Best rank-``k`` approximation in the Frobenius norm (truncated SVD)."""
    a = as_matrix(m)
    p = min(a.shape)
    if not 0 <= k <= p:
        raise InvalidArgumentError(f"k={k} outside [0, {p}] for shape {a.shape}")
    res = svd(a)
    return (res.left_vectors[:, :k] * res.singular_values[:k]) @ res.right_vectors[:, :k].T


def check_indices(indices: Iterable[int], bound: int, name: str = "indices") -> np.ndarray:
    """Validate a strictly increasing index list inside ``[0, bound)``."""
    idx = np.asarray(list(indices), dtype=np.intp)
    if idx.ndim != 1:
        raise InvalidArgumentError(f"{name}: expected a flat index list")
    if idx.size and (idx[0] < 0 or idx[-1] >= bound):
        raise InvalidArgumentError(f"{name}: index out of range [0, {bound})")
    if idx.size > 1 and np.any(np.diff(idx) <= 0):
        raise InvalidArgumentError(f"{name}: indices must be strictly increasing")
    return idx


def submatrix(m, rows: Iterable[int], cols: Iterable[int]) -> np.ndarray:
    """Copy of ``m[rows][:, cols]`` with both index lists in increasing order."""
    a = as_matrix(m, allow_empty=True)
    r = check_indices(rows, a.shape[0], "rows")
    c = check_indices(cols, a.shape[1], "cols")
    return a[np.ix_(r, c)].copy()


# -- CSV ---------------------------------------------------------------------


def parse_matrix_csv(text: str) -> np.ndarray:
    """Parse a header-less CSV of reals, one matrix row per line."""
    rows = []
    for lineno, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not record or all(not field.strip() for field in record):
            continue
        try:
            rows.append([float(field) for field in record])
        except ValueError:
            raise InvalidInputError(f"line {lineno}: non-numeric field in {record!r}") from None
        if len(rows[-1]) != len(rows[0]):
            raise InvalidInputError(
                f"line {lineno}: ragged row with {len(rows[-1])} fields, expected {len(rows[0])}"
            )
    if not rows:
        raise InvalidInputError("empty matrix file")
    return as_matrix(rows)


def read_matrix_csv(source: str | os.PathLike | TextIO) -> np.ndarray:
    if hasattr(source, "read"):
        return parse_matrix_csv(source.read())
    with open(source, newline="") as fh:
        return parse_matrix_csv(fh.read())


def format_matrix_csv(m) -> str:
    # repr() gives the shortest string that round-trips exactly
    a = as_matrix(m)
    return "".join(",".join(repr(float(x)) for x in row) + "\n" for row in a)


def write_matrix_csv(m, dest: str | os.PathLike | TextIO) -> None:
    text = format_matrix_csv(m)
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
