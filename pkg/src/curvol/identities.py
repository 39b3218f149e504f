"""Seeded randomized checks of the determinant identities and local bounds.

Each trial ``t`` draws its instance from ``default_rng([seed, t])`` so any
failure can be replayed from ``(seed, t)`` alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bordered import add_both_identity, add_column_identity, add_row_identity, gram_increment, last_row_minor_sum
from .compound import compound, compound_norm_sq, volume_sq
from .generators import random_pd
from .local_bounds import average_volume_selection, eig_ratio_bound, local_cur_bound

RTOL = 1e-9

# name -> human-readable statement
CHECKS = {
    "add_column": "det(Y^T Y) = det(A^T A) ||(I - A A^+) b||^2",
    "add_row": "det(Z^T Z) = det(A^T A) (1 + c^T (A^T A)^-1 c)",
    "add_both": "det(X^T X) = det(A^T A + c c^T) ||u||^2 + det(A^T A) gamma^2",
    "gram_increment": "det(X^T X) - det(Y^T Y) = sum of squared minors using the last row",
    "cauchy_binet": "det(A^T A) = ||C_k(A)||^2",
    "compound_spectral": "||C_k(M)||^2 = e_k(sigma^2)",
    "eig_ratio": "det(G)/det(F) <= (k+1)/sum(1/lambda) <= (k+1) lambda_min",
    "rect_multiplicity": "sum_ij det(A_ij^T A_ij) = (r+1-k) sum_j det(Y_j^T Y_j)",
    "rect_bound": "det(X^T X)/det(A^T A) <= (r+1)(k+1)/(r+1-k) lambda_min",
    "local_cur": "||X_cur - X||^2 <= det(X^T X)/det(A^T A) <= bound",
}


@dataclass
class CheckStats:
    name: str
    count: int = 0
    max_residual: float = 0.0
    first_failure: int | None = None

    @property
    def passed(self) -> bool:
        return self.first_failure is None


@dataclass
class SuiteResult:
    trials: int
    seed: int
    stats: dict[str, CheckStats] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.stats.values())

    def first_failure(self) -> CheckStats | None:
        failed = [s for s in self.stats.values() if not s.passed]
        return min(failed, key=lambda s: s.first_failure) if failed else None


def _rel(lhs: float, rhs: float, scale: float) -> float:
    denom = max(abs(lhs), abs(rhs), scale)
    return abs(lhs - rhs) / denom if denom > 0 else abs(lhs - rhs)


def _excess(value: float, bound: float, scale: float) -> float:
    """Relative amount by which ``value`` exceeds ``bound`` (0 when it does not)."""
    denom = max(abs(bound), scale)
    return max(0.0, value - bound) / denom if denom > 0 else max(0.0, value - bound)


def _full_rank(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    while True:
        a = rng.standard_normal((rows, cols))
        s = np.linalg.svd(a, compute_uv=False)
        if s[-1] > 1e-3 * s[0]:
            return a


def _trial(rng: np.random.Generator) -> dict[str, float]:
    r = int(rng.integers(1, 9))
    k = int(rng.integers(1, r + 1))
    a = _full_rank(rng, r, k)
    b = rng.standard_normal(r)
    c = rng.standard_normal(k)
    d = float(rng.standard_normal())
    out = {}

    res = add_column_identity(a, b)
    out["add_column"] = res.rel_error
    res = add_row_identity(a, c)
    out["add_row"] = res.rel_error
    res = add_both_identity(a, b, c, d)
    out["add_both"] = res.rel_error

    x = np.block([[a, b[:, None]], [c[None, :], np.array([[d]])]])
    gram = volume_sq(x)
    if r >= k + 1:
        out["gram_increment"] = _rel(gram_increment(x), last_row_minor_sum(x), gram)

    out["cauchy_binet"] = _rel(volume_sq(a), compound(a, k).norm_sq, 0.0)
    mrows, mcols = int(rng.integers(1, 9)), int(rng.integers(1, 6))
    mat = rng.standard_normal((mrows, mcols))
    order = int(rng.integers(1, min(mrows, mcols) + 1))
    out["compound_spectral"] = _rel(compound_norm_sq(mat, order), compound(mat, order).norm_sq, 0.0)

    g = random_pd(k + 1, rng)
    eig = eig_ratio_bound(g)
    out["eig_ratio"] = max(_excess(eig.ratio, eig.harmonic_bound, 0.0),
                           _excess(eig.harmonic_bound, eig.bound, 0.0))

    sel = average_volume_selection(x)
    out["rect_multiplicity"] = _rel(sel.volume_sum, (r + 1 - k) * sel.column_volume_sum, 0.0)
    out["rect_bound"] = _excess(sel.ratio, sel.bound_value, 0.0)
    loc = local_cur_bound(x)
    out["local_cur"] = max(_excess(loc.measured, loc.intermediate, 0.0),
                           _excess(loc.intermediate, loc.bound, 0.0))
    return out


def run_identity_suite(trials: int = 1000, seed: int = 42, rtol: float = RTOL,
                       corrupt: str | None = None) -> SuiteResult:
    """Run every check on ``trials`` random instances.

    ``corrupt`` names a check whose residual is forced above tolerance; it
    exists so callers can confirm a failing check is actually reported.
    """
    result = SuiteResult(trials=trials, seed=seed,
                         stats={name: CheckStats(name) for name in CHECKS})
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        residuals = _trial(rng)
        if corrupt is not None:
            residuals[corrupt] = residuals.get(corrupt, 0.0) + 1e3 * rtol
        for name, value in residuals.items():
            stats = result.stats[name]
            stats.count += 1
            stats.max_residual = max(stats.max_residual, value)
            if value > rtol and stats.first_failure is None:
                stats.first_failure = t
    return result
