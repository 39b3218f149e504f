"""CUR factors, block partition, error decomposition, and the Nystrom case."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bordered import RANK_TOL
from .errors import InvalidArgumentError, PreconditionError
from .linalg import as_matrix, frobenius_sq, pseudoinverse
from .subsets import IndexSet, as_index_set, complement


@dataclass(frozen=True)
class BlockPartition:
    """``M ~ [[A, B], [C, D]]`` for selected rows ``I`` and columns ``J``."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    row_set: IndexSet
    col_set: IndexSet


@dataclass(frozen=True)
class CurFactors:
    c_factor: np.ndarray
    u_factor: np.ndarray
    r_factor: np.ndarray
    row_set: IndexSet
    col_set: IndexSet
    # True when M[I, J] is numerically rank deficient; the pseudoinverse
    # result is still returned but the interpolation property is lost.
    degenerate: bool = False

    def assemble(self) -> np.ndarray:
        return self.c_factor @ self.u_factor @ self.r_factor


def _index_sets(m: np.ndarray, i, j) -> tuple[IndexSet, IndexSet]:
    return as_index_set(i, m.shape[0]), as_index_set(j, m.shape[1])


def is_rank_deficient(a: np.ndarray) -> bool:
    if a.size == 0:
        return True
    s = np.linalg.svd(a, compute_uv=False)
    return bool(s[-1] <= RANK_TOL * s[0]) if s[0] > 0 else True


def partition(m, i, j) -> BlockPartition:
    m = as_matrix(m)
    rows, cols = _index_sets(m, i, j)
    ri, ci = list(rows), list(cols)
    rc, cc = list(complement(rows)), list(complement(cols))
    return BlockPartition(
        a=m[np.ix_(ri, ci)],
        b=m[np.ix_(ri, cc)],
        c=m[np.ix_(rc, ci)],
        d=m[np.ix_(rc, cc)],
        row_set=rows,
        col_set=cols,
    )


def cur_approximation(m, i, j) -> tuple[CurFactors, np.ndarray]:
    """``M[:, J] @ pinv(M[I, J]) @ M[I, :]`` together with its factors."""
    m = as_matrix(m)
    rows, cols = _index_sets(m, i, j)
    if len(rows) < len(cols):
        raise InvalidArgumentError(f"need |I| >= |J|, got |I|={len(rows)}, |J|={len(cols)}")
    ri, ci = list(rows), list(cols)
    a = m[np.ix_(ri, ci)]
    factors = CurFactors(
        c_factor=m[:, ci],
        u_factor=pseudoinverse(a),
        r_factor=m[ri, :],
        row_set=rows,
        col_set=cols,
        degenerate=is_rank_deficient(a),
    )
    return factors, factors.assemble()


def cur_error_sq(m, i, j) -> float:
    m = as_matrix(m)
    _, approx = cur_approximation(m, i, j)
    return frobenius_sq(approx - m)


def error_decomposition(p: BlockPartition) -> tuple[float, float]:
    """``(||(I - A A^+) B||^2, ||C A^+ B - D||^2)``; requires full column rank ``A``."""
    if p.a.shape[0] < p.a.shape[1] or is_rank_deficient(p.a):
        raise PreconditionError(
            f"A = M[I, J] ({p.a.shape[0]}x{p.a.shape[1]}) must have full column rank"
        )
    a_pinv = pseudoinverse(p.a)
    coef = a_pinv @ p.b
    b_err = frobenius_sq(p.b - p.a @ coef)
    d_err = frobenius_sq(p.c @ coef - p.d)
    return b_err, d_err


def optimal_middle_factor(m, i, j) -> np.ndarray:
    """``U* = pinv(C) @ M @ pinv(R)``, the Frobenius-optimal middle factor."""
    m = as_matrix(m)
    rows, cols = _index_sets(m, i, j)
    if len(rows) < len(cols):
        raise InvalidArgumentError(f"need |I| >= |J|, got |I|={len(rows)}, |J|={len(cols)}")
    c = m[:, list(cols)]
    r = m[list(rows), :]
    return pseudoinverse(c) @ m @ pseudoinverse(r)


@dataclass(frozen=True)
class CurErrorSummary:
    total: float
    b_err: float | None
    d_err: float | None
    optimal_error: float
    degenerate: bool


def cur_error_summary(m, i, j) -> CurErrorSummary:
    m = as_matrix(m)
    factors, approx = cur_approximation(m, i, j)
    u_star = optimal_middle_factor(m, factors.row_set, factors.col_set)
    optimal = frobenius_sq(factors.c_factor @ u_star @ factors.r_factor - m)
    b_err = d_err = None
    if not factors.degenerate:
        b_err, d_err = error_decomposition(partition(m, factors.row_set, factors.col_set))
    return CurErrorSummary(
        total=frobenius_sq(approx - m),
        b_err=b_err,
        d_err=d_err,
        optimal_error=optimal,
        degenerate=factors.degenerate,
    )


def check_symmetric_psd(m: np.ndarray, sym_tol: float = 1e-10, psd_tol: float = 1e-10) -> None:
    if m.shape[0] != m.shape[1]:
        raise InvalidArgumentError(f"matrix must be square, got {m.shape}")
    scale = max(float(np.max(np.abs(m))), 1.0)
    if np.max(np.abs(m - m.T)) > sym_tol * scale:
        raise InvalidArgumentError("matrix is not symmetric")
    lam_min = float(np.linalg.eigvalsh((m + m.T) / 2)[0])
    if lam_min < -psd_tol * scale:
        raise InvalidArgumentError(f"matrix is not PSD: lambda_min={lam_min:.3e}")


def nystrom_approximation(m, j) -> np.ndarray:
    """``M[:, J] @ pinv(M[J, J]) @ M[J, :]`` for symmetric PSD ``M``."""
    m = as_matrix(m)
    check_symmetric_psd(m)
    cols = list(as_index_set(j, m.shape[1]))
    c = m[:, cols]
    approx = c @ pseudoinverse(m[np.ix_(cols, cols)]) @ c.T
    return (approx + approx.T) / 2
