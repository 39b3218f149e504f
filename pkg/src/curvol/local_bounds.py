"""Deterministic local bounds for a single bordered block.

Given ``X`` of shape ``(r+1) x (k+1)``, remove one row and one column to get
an ``r x k`` block ``A``. If the squared volume of ``A`` is at least the
average over all ``(r+1)(k+1)`` such removals, the CUR approximation of ``X``
built on ``A`` satisfies::

    ||X_cur - X||_F^2 <= det(X^T X) / det(A^T A)
                      <= (r+1)(k+1) / (r+1-k) * lambda_min(X^T X)

The square version (``G`` positive definite, principal ``k x k`` minors)
gives ``det(G) / det(F) <= (k+1) / sum(1/lambda) <= (k+1) * lambda_min``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .compound import volume_sq, volume_sq_batch
from .cur import cur_approximation
from .errors import DegenerateError, InvalidArgumentError
from .linalg import as_matrix, frobenius_sq


@dataclass(frozen=True)
class EigRatioResult:
    index: int
    ratio: float
    harmonic_bound: float
    bound: float
    minor_dets: np.ndarray
    eigenvalues: np.ndarray


def principal_minor_sum(g, k: int) -> float:
    """Sum of all principal ``k x k`` minors of a square matrix."""
    g = as_matrix(g)
    n = g.shape[0]
    if not 0 <= k <= n:
        raise InvalidArgumentError(f"k={k} outside [0, {n}]")
    return float(sum(np.linalg.det(g[np.ix_(s, s)]) if s else 1.0
                     for s in map(list, itertools.combinations(range(n), k))))


def eig_ratio_bound(g) -> EigRatioResult:
    """Pick the principal ``k x k`` minor of largest determinant and bound ``det(G)/det(F)``."""
    g = as_matrix(g)
    n = g.shape[0]
    if g.shape != (n, n):
        raise InvalidArgumentError(f"G must be square, got {g.shape}")
    scale = max(float(np.max(np.abs(g))), 1.0)
    if np.max(np.abs(g - g.T)) > 1e-12 * scale:
        raise InvalidArgumentError("G is not symmetric")
    lam = np.linalg.eigvalsh(g)
    if lam[0] <= 0:
        raise InvalidArgumentError(f"G is not positive definite: lambda_min={lam[0]:.3e}")

    dets = np.empty(n)
    for i in range(n):
        keep = [t for t in range(n) if t != i]
        dets[i] = np.linalg.det(g[np.ix_(keep, keep)]) if keep else 1.0
    best = int(np.argmax(dets))  # first maximum on ties
    det_g = float(np.prod(lam))
    return EigRatioResult(
        index=best,
        ratio=det_g / dets[best],
        harmonic_bound=n / float(np.sum(1.0 / lam)),
        bound=n * float(lam[0]),
        minor_dets=dets,
        eigenvalues=lam,
    )


@dataclass(frozen=True)
class SelectionResult:
    row_removed: int
    col_removed: int
    selected_volume_sq: float
    average_volume_sq: float
    bound_value: float
    gram_det: float
    volume_sum: float
    column_volume_sum: float
    lambda_min: float

    @property
    def ratio(self) -> float:
        """``det(X^T X) / det(A^T A)`` for the selected block."""
        return self.gram_det / self.selected_volume_sq


def _local_shape(x: np.ndarray) -> tuple[int, int]:
    rows, cols = x.shape
    r, k = rows - 1, cols - 1
    if r < k:
        raise InvalidArgumentError(f"X must be (r+1)x(k+1) with r >= k, got {x.shape}")
    return r, k


def average_volume_selection(x) -> SelectionResult:
    """Scan every single-row, single-column removal and keep the largest volume.

    The maximiser always meets the at-least-average criterion. Ties go to the
    smallest ``(row, col)`` in row-major order.
    """
    x = as_matrix(x, name="X")
    r, k = _local_shape(x)
    rows, cols = x.shape
    blocks = np.stack([
        np.delete(np.delete(x, i, axis=0), j, axis=1)
        for i in range(rows) for j in range(cols)
    ])
    vols = volume_sq_batch(blocks)
    if not np.any(vols > 0):
        raise DegenerateError("every (r x k) sub-block of X has zero volume")
    flat = int(np.argmax(vols))
    i_star, j_star = divmod(flat, cols)
    col_vols = volume_sq_batch(np.stack([np.delete(x, j, axis=1) for j in range(cols)]))
    sigma_min = float(np.linalg.svd(x, compute_uv=False)[-1])
    lam_min = sigma_min**2
    return SelectionResult(
        row_removed=i_star,
        col_removed=j_star,
        selected_volume_sq=float(vols[flat]),
        average_volume_sq=float(np.mean(vols)),
        bound_value=(r + 1) * (k + 1) / (r + 1 - k) * lam_min,
        gram_det=volume_sq(x),
        volume_sum=float(np.sum(vols)),
        column_volume_sum=float(np.sum(col_vols)),
        lambda_min=lam_min,
    )


def multiplicity_sums(x) -> tuple[float, float]:
    """Both sides of the row-removal counting identity, from explicit ``k x k`` minors.

    Returns ``(sum_{i,j} det(A_ij^T A_ij), (r+1-k) * sum_j det(Y_j^T Y_j))``
    with every Gram determinant expanded as a sum of squared minors.
    """
    x = as_matrix(x, name="X")
    r, k = _local_shape(x)
    rows, cols = x.shape

    def minor_sq(row_pool, y):
        return sum(np.linalg.det(y[list(s), :]) ** 2 if s else 1.0
                   for s in itertools.combinations(row_pool, k))

    lhs = 0.0
    rhs = 0.0
    for j in range(cols):
        y = np.delete(x, j, axis=1)
        rhs += minor_sq(range(rows), y)
        for i in range(rows):
            lhs += minor_sq([t for t in range(rows) if t != i], y)
    return float(lhs), float((r + 1 - k) * rhs)


@dataclass(frozen=True)
class LocalCurReport:
    selection: SelectionResult
    measured: float
    intermediate: float
    bound: float

    def holds(self, rtol: float = 1e-9, atol: float = 0.0) -> bool:
        return (self.measured <= self.intermediate * (1 + rtol) + atol
                and self.measured <= self.bound * (1 + rtol) + atol)


def local_cur_bound(x) -> LocalCurReport:
    """CUR of ``X`` on the selected block, with the measured error and its bounds."""
    x = as_matrix(x, name="X")
    sel = average_volume_selection(x)
    rows = [t for t in range(x.shape[0]) if t != sel.row_removed]
    cols = [t for t in range(x.shape[1]) if t != sel.col_removed]
    _, approx = cur_approximation(x, rows, cols)
    return LocalCurReport(
        selection=sel,
        measured=frobenius_sq(approx - x),
        intermediate=sel.ratio,
        bound=sel.bound_value,
    )
