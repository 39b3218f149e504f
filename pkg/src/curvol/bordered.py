"""Gram determinants of a block after bordering it with a column, a row, or both.

For ``A`` (r x k, full column rank), column ``b``, row ``c`` and corner ``d``::

    Y = [A b]          det(Y^T Y) = det(A^T A) * ||(I - A A^+) b||^2
    Z = [A; c^T]       det(Z^T Z) = det(A^T A) * (1 + c^T (A^T A)^{-1} c)
    X = [A b; c^T d]   det(X^T X) = det(Z^T Z) * ||u||^2 + det(A^T A) * gamma^2

with ``u = (I - A A^+) b`` and ``gamma = d - c^T A^+ b``. Each function
evaluates the left side directly from the bordered matrix and the right side
from the factored form, so comparing them checks the identity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .compound import gram_det, volume_sq
from .errors import InvalidArgumentError, PreconditionError
from .linalg import as_matrix, as_vector, pseudoinverse

RANK_TOL = 1e-10


@dataclass(frozen=True)
class BorderedResult:
    lhs: float
    rhs: float
    residual_norm_sq: float | None
    schur_scalar: float | None
    scale: float

    @property
    def abs_error(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_error(self) -> float:
        denom = max(abs(self.lhs), abs(self.rhs), self.scale)
        return self.abs_error / denom if denom > 0 else self.abs_error

    def holds(self, rtol: float = 1e-9) -> bool:
        return self.rel_error <= rtol


def require_full_column_rank(a: np.ndarray, name: str = "A") -> None:
    if a.shape[0] < a.shape[1]:
        raise PreconditionError(f"{name} is {a.shape[0]}x{a.shape[1]}: needs rows >= cols")
    s = np.linalg.svd(a, compute_uv=False)
    if s[-1] <= RANK_TOL * s[0]:
        raise PreconditionError(
            f"{name} is numerically rank deficient: sigma_min={s[-1]:.3e}, sigma_max={s[0]:.3e}"
        )


def _prepare(a):
    a = as_matrix(a, name="A")
    require_full_column_rank(a)
    return a


def add_column_identity(a, b) -> BorderedResult:
    a = _prepare(a)
    b = as_vector(b, a.shape[0], "b")
    y = np.column_stack([a, b])
    u = b - a @ (pseudoinverse(a) @ b)
    base = volume_sq(a)
    res = float(u @ u)
    return BorderedResult(
        lhs=gram_det(y),
        rhs=base * res,
        residual_norm_sq=res,
        schur_scalar=None,
        scale=base * (1.0 + float(b @ b)),
    )


def add_row_identity(a, c) -> BorderedResult:
    a = _prepare(a)
    c = as_vector(c, a.shape[1], "c")
    z = np.vstack([a, c])
    # c^T (A^T A)^{-1} c == ||(A^+)^T c||^2
    w = pseudoinverse(a).T @ c
    base = volume_sq(a)
    return BorderedResult(
        lhs=volume_sq(z),
        rhs=base * (1.0 + float(w @ w)),
        residual_norm_sq=None,
        schur_scalar=None,
        scale=base * (1.0 + float(c @ c)),
    )


def add_both_identity(a, b, c, d: float) -> BorderedResult:
    a = _prepare(a)
    b = as_vector(b, a.shape[0], "b")
    c = as_vector(c, a.shape[1], "c")
    d = float(d)
    x = np.block([[a, b[:, None]], [c[None, :], np.array([[d]])]])
    z = np.vstack([a, c])
    coef = pseudoinverse(a) @ b
    u = b - a @ coef
    gamma = d - float(c @ coef)
    base = volume_sq(a)
    res = float(u @ u)
    return BorderedResult(
        lhs=gram_det(x),
        rhs=volume_sq(z) * res + base * gamma**2,
        residual_norm_sq=res,
        schur_scalar=gamma,
        scale=base * (1.0 + float(b @ b) + float(c @ c) + d * d),
    )


def gram_increment(x) -> float:
    """``det(X^T X) - det(Y^T Y)`` where ``Y`` is ``X`` without its last row."""
    x = as_matrix(x, name="X")
    rows, cols = x.shape
    if rows - 1 < cols:
        raise InvalidArgumentError(
            f"gram_increment needs r >= k+1 for an (r+1)x(k+1) matrix, got {rows}x{cols}"
        )
    return volume_sq(x) - volume_sq(x[:-1])


def last_row_minor_sum(x) -> float:
    """Sum of squared maximal minors of ``X`` whose row set includes the last row.

    The subsets have size ``k+1`` (the column count of ``X``).
    """
    x = as_matrix(x, name="X")
    rows, cols = x.shape
    last = rows - 1
    total = 0.0
    for head in itertools.combinations(range(last), cols - 1):
        total += np.linalg.det(x[list(head) + [last], :]) ** 2
    return float(total)
