"""Volume sampling of (row set, column set) pairs and the expected CUR error.

A pair ``(I, J)`` with ``|I| = r`` rows and ``|J| = k`` columns is drawn with
probability proportional to ``det(M[I,J]^T M[I,J])``. The normaliser is
``binom(m-k, r-k) * ||C_k(M)||_F^2``. Under this law the expected error of the
``B`` block is exactly

    (k+1)(r-k)/(m-k) * ||C_{k+1}(M)||^2 / ||C_k(M)||^2

and the ``D`` block error is at most ``(k+1)^2 (m-r)/(m-k)`` times the same
ratio, so the total is at most ``interpolation_factor(m, r, k)`` times it.

Expectations are computed either exactly, by enumerating every pair, or by
Monte-Carlo. Two exact samplers are available: inversion of the cumulative
weights of an enumerated distribution, and a sequential sampler (a k-DPP
over columns followed by reverse iterative row elimination) that never
enumerates pairs and so also works past the enumeration cap.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from dataclasses import asdict, dataclass, fields

import numpy as np

from .compound import compound_norm_sq, elementary_symmetric_table, volume_sq_batch
from .errors import DegenerateError, InvalidArgumentError
from .linalg import as_matrix, numerical_rank, pseudoinverse, singular_values
from .subsets import (
    MAX_ENUMERATED_PAIRS,
    IndexSet,
    binomial,
    check_enumeration_size,
    enumerate_subsets,
    pair_count,
)

SAMPLERS = ("auto", "enumerate", "sequential")


def _check_dims(shape: tuple[int, int], r: int, k: int) -> None:
    m, n = shape
    if not (1 <= k <= r <= m and k <= n):
        raise InvalidArgumentError(
            f"need 1 <= k <= r <= m and k <= n, got m={m}, n={n}, r={r}, k={k}"
        )


def _subset_rows(subsets: list[IndexSet], size: int) -> np.ndarray:
    return np.array([s.indices for s in subsets], dtype=np.intp).reshape(len(subsets), size)


# -- distribution --------------------------------------------------------------


@dataclass(frozen=True)
class SubsetDistribution:
    """Enumerated volume-sampling law.

    ``weights[a, b]`` is the squared volume of ``M[row_sets[a], col_sets[b]]``.
    Pairs are ordered lexicographically by row set, then by column set.
    """

    row_sets: list[IndexSet]
    col_sets: list[IndexSet]
    weights: np.ndarray
    zeta: float
    dims: tuple[int, int, int, int]  # (m, n, r, k)

    @property
    def probabilities(self) -> np.ndarray:
        return self.weights / self.zeta

    def pairs(self):
        """Yield ``(row_set, col_set, weight)`` in lexicographic pair order."""
        for a, rows in enumerate(self.row_sets):
            for b, cols in enumerate(self.col_sets):
                yield rows, cols, float(self.weights[a, b])

    def pair_at(self, flat_index: int) -> tuple[IndexSet, IndexSet]:
        a, b = divmod(int(flat_index), len(self.col_sets))
        return self.row_sets[a], self.col_sets[b]

    def flat_index(self, rows: IndexSet, cols: IndexSet) -> int:
        return self.row_sets.index(rows) * len(self.col_sets) + self.col_sets.index(cols)


def build_distribution(m, r: int, k: int, allow_large: bool = False) -> SubsetDistribution:
    m = as_matrix(m)
    _check_dims(m.shape, r, k)
    rows, cols = m.shape
    check_enumeration_size(rows, cols, r, k, allow_large=allow_large)
    row_sets = enumerate_subsets(rows, r)
    col_sets = enumerate_subsets(cols, k)
    row_idx = _subset_rows(row_sets, r)

    weights = np.empty((len(row_sets), len(col_sets)))
    for b, cs in enumerate(col_sets):
        weights[:, b] = volume_sq_batch(m[:, list(cs.indices)][row_idx])
    zeta = math.fsum(weights.ravel())
    if not zeta > 0:
        raise DegenerateError(
            f"every {r}x{k} submatrix has zero volume (rank(M) < k={k}); "
            "the volume-sampling distribution is undefined"
        )
    return SubsetDistribution(row_sets, col_sets, weights, zeta, (rows, cols, r, k))


def zeta_closed_form(m, r: int, k: int) -> float:
    """``binom(m-k, r-k) * ||C_k(M)||_F^2`` from the singular values."""
    m = as_matrix(m)
    _check_dims(m.shape, r, k)
    return binomial(m.shape[0] - k, r - k) * compound_norm_sq(m, k)


def sample_flat(dist: SubsetDistribution, seed: int, count: int) -> np.ndarray:
    """Flat pair indices drawn by inverting the cumulative weights."""
    if count < 0:
        raise InvalidArgumentError(f"count must be >= 0, got {count}")
    if not dist.zeta > 0:
        raise DegenerateError("cannot sample from a zero-weight distribution")
    cdf = np.cumsum(dist.weights.ravel())
    rng = np.random.default_rng(seed)
    u = rng.random(count) * cdf[-1]
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, cdf.size - 1)


def sample(dist: SubsetDistribution, seed: int, count: int) -> list[tuple[IndexSet, IndexSet]]:
    """``count`` i.i.d. pairs from ``dist``; reproducible for a fixed seed."""
    return [dist.pair_at(t) for t in sample_flat(dist, seed, count)]


# -- sequential sampler ----------------------------------------------------------


def _sample_kdpp(eigvals: np.ndarray, eigvecs: np.ndarray, k: int,
                 rng: np.random.Generator) -> list[int]:
    """Exact k-DPP draw for the kernel ``eigvecs @ diag(eigvals) @ eigvecs.T``."""
    n_eig = eigvals.size
    table = elementary_symmetric_table(eigvals, k)
    chosen = []
    remaining = k
    for i in range(n_eig, 0, -1):
        if remaining == 0:
            break
        denom = table[remaining, i]
        keep = eigvals[i - 1] * table[remaining - 1, i - 1] / denom if denom > 0 else 0.0
        if i == remaining or rng.random() < keep:
            chosen.append(i - 1)
            remaining -= 1
    v = eigvecs[:, chosen]

    items = []
    while v.shape[1] > 0:
        weights = np.sum(v * v, axis=1)
        weights[items] = 0.0
        item = int(rng.choice(weights.size, p=weights / weights.sum()))
        items.append(item)
        pivot = int(np.argmax(np.abs(v[item, :])))
        col = v[:, pivot].copy()
        v = np.delete(v, pivot, axis=1)
        if v.shape[1] == 0:
            break
        v = v - np.outer(col / col[item], v[item, :])
        v, _ = np.linalg.qr(v)
    return sorted(items)


def _reverse_volume_rows(c: np.ndarray, r: int, rng: np.random.Generator) -> list[int]:
    """Drop rows of ``c`` one at a time until ``r`` remain.

    Removing row ``i`` from the current set ``S`` has probability proportional
    to ``det(c[S-i]^T c[S-i]) = det(c[S]^T c[S]) * (1 - leverage_i)``, which
    leaves the final set distributed as ``det(c[I]^T c[I])``.
    """
    rows = list(range(c.shape[0]))
    while len(rows) > r:
        q, _ = np.linalg.qr(c[rows])
        p = np.clip(1.0 - np.sum(q * q, axis=1), 0.0, None)
        drop = int(rng.choice(len(rows), p=p / p.sum()))
        del rows[drop]
    return rows


def sample_sequential(m, r: int, k: int, seed: int, count: int) -> list[tuple[IndexSet, IndexSet]]:
    """Volume-sampled pairs without enumerating ``S_r(m) x S_k(n)``.

    Columns come from the k-DPP with kernel ``M^T M`` (marginal law of ``J``);
    rows then come from reverse iterative volume sampling on ``M[:, J]``.
    """
    m = as_matrix(m)
    _check_dims(m.shape, r, k)
    if count < 0:
        raise InvalidArgumentError(f"count must be >= 0, got {count}")
    rows, cols = m.shape
    if numerical_rank(m) < k:
        raise DegenerateError(f"rank(M) < k={k}; the volume-sampling distribution is undefined")
    _, s, vt = np.linalg.svd(m, full_matrices=True)
    eigvals = np.zeros(cols)
    eigvals[: s.size] = s**2
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        j = _sample_kdpp(eigvals, vt.T, k, rng)
        i = _reverse_volume_rows(m[:, j], r, rng)
        out.append((IndexSet(tuple(i), rows), IndexSet(tuple(j), cols)))
    return out


# -- per-pair errors --------------------------------------------------------------


def _pair_errors(m: np.ndarray, row_idx: np.ndarray, cols: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    """B- and D-block squared errors for many row sets sharing one column set.

    ``row_idx`` has shape ``(N, r)``. Works from the assembled residual
    ``CUR - M`` restricted to the ``I x J^c`` and ``I^c x J^c`` blocks.
    """
    rows, n = m.shape
    col_list = list(cols)
    off_cols = np.ones(n, dtype=bool)
    off_cols[col_list] = False
    c_factor = m[:, col_list]
    b_out = np.empty(row_idx.shape[0])
    d_out = np.empty(row_idx.shape[0])
    chunk = max(1, 4_000_000 // (rows * n))
    for start in range(0, row_idx.shape[0], chunk):
        idx = row_idx[start:start + chunk]
        r_factor = m[idx]                                  # (N, r, n)
        u_factor = pseudoinverse(r_factor[:, :, col_list])  # (N, k, r)
        resid = c_factor @ (u_factor @ r_factor) - m        # (N, m, n)
        sq = (resid * resid)[:, :, off_cols].sum(axis=2)    # (N, m)
        in_rows = np.zeros((idx.shape[0], rows), dtype=bool)
        np.put_along_axis(in_rows, idx, True, axis=1)
        b_out[start:start + chunk] = np.where(in_rows, sq, 0.0).sum(axis=1)
        d_out[start:start + chunk] = np.where(in_rows, 0.0, sq).sum(axis=1)
    return b_out, d_out


def pair_errors(m, rows, cols) -> tuple[float, float]:
    """``(||(I - A A^+) B||^2, ||C A^+ B - D||^2)`` for one pair."""
    m = as_matrix(m)
    rows = IndexSet(tuple(rows), m.shape[0]) if not isinstance(rows, IndexSet) else rows
    cols = IndexSet(tuple(cols), m.shape[1]) if not isinstance(cols, IndexSet) else cols
    b, d = _pair_errors(m, np.array([rows.indices], dtype=np.intp), cols.indices)
    return float(b[0]), float(d[0])


def exact_expectations(m, r: int, k: int, allow_large: bool = False,
                       dist: SubsetDistribution | None = None) -> tuple[float, float]:
    """Exact ``(E[b_err], E[d_err])`` by full enumeration; zero-weight pairs skipped."""
    m = as_matrix(m)
    if dist is None:
        dist = build_distribution(m, r, k, allow_large=allow_large)
    row_idx = _subset_rows(dist.row_sets, r)
    b_terms = []
    d_terms = []
    for b, cs in enumerate(dist.col_sets):
        w = dist.weights[:, b]
        live = w > 0
        if not np.any(live):
            continue
        b_err, d_err = _pair_errors(m, row_idx[live], cs.indices)
        b_terms.extend(w[live] * b_err)
        d_terms.extend(w[live] * d_err)
    return math.fsum(b_terms) / dist.zeta, math.fsum(d_terms) / dist.zeta


# -- bounds ----------------------------------------------------------------------


def interpolation_factor_exact(m: int, r: int, k: int) -> Fraction:
    """``((m-r)(k+1)^2 + (r-k)(k+1)) / (m-k)`` as an exact rational."""
    if not 0 <= k <= r <= m:
        raise InvalidArgumentError(f"need 0 <= k <= r <= m, got m={m}, r={r}, k={k}")
    if m == k:
        raise InvalidArgumentError("interpolation factor undefined for m == k")
    return Fraction((m - r) * (k + 1) ** 2 + (r - k) * (k + 1), m - k)


def interpolation_factor(m: int, r: int, k: int) -> float:
    """``(k+1)^2`` at ``r=k``, falling linearly to ``k+1`` at ``r=m``."""
    return float(interpolation_factor_exact(m, r, k))


@dataclass
class BoundReport:
    """Measured expectations and bound values for one ``(M, k, r)``.

    Expectation fields are ``None`` for a bounds-only report; the
    singular-value and tail bounds are ``None`` unless ``r < min(m, n)``.
    """

    m: int
    n: int
    k: int
    r: int
    interpolation_factor: float
    compound_ratio: float
    thm2_rhs: float
    thm3_rhs: float
    thm4_rhs: float
    sv_bound: float | None
    tail_bound: float | None
    b_err_expected: float | None = None
    d_err_expected: float | None = None
    total_expected: float | None = None
    estimation_mode: str = "bounds_only"
    samples: int | None = None
    seed: int | None = None
    b_err_std_error: float | None = None
    d_err_std_error: float | None = None
    total_std_error: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def to_text(self) -> str:
        """Flat ``key=value`` lines in field order."""
        return "".join(f"{key}={_fmt(val)}\n" for key, val in self.to_dict().items())

    def violations(self, rtol: float = 1e-10) -> list[str]:
        """Bound statements contradicted by the measured values.

        Monte-Carlo estimates are allowed three standard errors of slack.
        """
        if self.total_expected is None:
            return []
        out = []
        scale = max(self.thm4_rhs, 1.0)

        def slack(se):
            return rtol * scale + (3.0 * se if se is not None and math.isfinite(se) else 0.0)

        if self.d_err_expected > self.thm3_rhs + slack(self.d_err_std_error):
            out.append(f"d_err_expected={self.d_err_expected!r} > thm3_rhs={self.thm3_rhs!r}")
        if self.total_expected > self.thm4_rhs + slack(self.total_std_error):
            out.append(f"total_expected={self.total_expected!r} > thm4_rhs={self.thm4_rhs!r}")
        if self.estimation_mode == "exact" and \
                abs(self.b_err_expected - self.thm2_rhs) > 1e-7 * max(self.thm2_rhs, 1e-300) + rtol * scale:
            out.append(f"b_err_expected={self.b_err_expected!r} != thm2_rhs={self.thm2_rhs!r}")
        return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def reports_to_csv(reports: list[BoundReport]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    names = BoundReport.field_names()
    writer.writerow(names)
    for rep in reports:
        d = rep.to_dict()
        writer.writerow([_fmt(d[name]) for name in names])
    return buf.getvalue()


def reports_from_csv(text: str) -> list[BoundReport]:
    """Inverse of :func:`reports_to_csv`."""
    ints = {"m", "n", "k", "r", "samples", "seed"}
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        kwargs = {}
        for key, raw in row.items():
            if raw == "":
                kwargs[key] = None
            elif key == "estimation_mode":
                kwargs[key] = raw
            elif key in ints:
                kwargs[key] = int(raw)
            else:
                kwargs[key] = float(raw)
        out.append(BoundReport(**kwargs))
    return out


def reports_to_json(reports: list[BoundReport]) -> str:
    def clean(v):
        return None if isinstance(v, float) and not math.isfinite(v) else v

    payload = [{key: clean(val) for key, val in rep.to_dict().items()} for rep in reports]
    return json.dumps(payload, indent=2) + "\n"


def _esp_ratio(sq_sv: np.ndarray, k: int) -> tuple[float, float]:
    """``(e_k, e_{k+1})`` of the squared singular values; ``e_j = 0`` for ``j > p``."""
    table = elementary_symmetric_table(sq_sv, min(k + 1, sq_sv.size))
    e_k = float(table[k, -1])
    e_k1 = float(table[k + 1, -1]) if k + 1 <= sq_sv.size else 0.0
    return e_k, e_k1


def bound_suite(m, r: int, k: int) -> BoundReport:
    """All bound values for ``(M, k, r)`` from the singular values of ``M``.

    Requires ``m >= n``: sampling rows and columns plays asymmetric roles, so
    a wide matrix must be transposed by the caller.
    """
    m = as_matrix(m)
    rows, cols = m.shape
    if rows < cols:
        raise InvalidArgumentError(
            f"bounds assume m >= n, got {rows}x{cols}; transpose M (and swap the roles "
            "of rows and columns) before calling"
        )
    _check_dims(m.shape, r, k)
    factor = interpolation_factor(rows, r, k)
    if numerical_rank(m) < k:
        raise DegenerateError(f"rank(M) < k={k}: ||C_k(M)||^2 = e_k(sigma^2) = 0")
    sq_sv = singular_values(m) ** 2
    e_k, e_k1 = _esp_ratio(sq_sv, k)
    c_k1 = compound_norm_sq(m, k + 1) if k + 1 <= min(rows, cols) else 0.0
    ratio = c_k1 / compound_norm_sq(m, k)
    sv_bound = tail_bound = None
    if r < min(rows, cols):
        sv_bound = factor * e_k1 / e_k
        tail_bound = factor * math.fsum(sq_sv[k:])
    return BoundReport(
        m=rows,
        n=cols,
        k=k,
        r=r,
        interpolation_factor=factor,
        compound_ratio=ratio,
        thm2_rhs=(k + 1) * (r - k) / (rows - k) * ratio,
        thm3_rhs=(k + 1) ** 2 * (rows - r) / (rows - k) * ratio,
        thm4_rhs=factor * ratio,
        sv_bound=sv_bound,
        tail_bound=tail_bound,
    )


def expected_errors_exact(m, r: int, k: int, allow_large: bool = False) -> BoundReport:
    report = bound_suite(m, r, k)
    b, d = exact_expectations(m, r, k, allow_large=allow_large)
    report.b_err_expected = b
    report.d_err_expected = d
    report.total_expected = b + d
    report.estimation_mode = "exact"
    return report


def expected_errors_mc(m, r: int, k: int, samples: int, seed: int,
                       sampler: str = "auto", allow_large: bool = False) -> BoundReport:
    """Sample-mean estimates with standard errors ``std / sqrt(samples)``.

    ``sampler="auto"`` inverts the enumerated weights when the pair count is
    within the enumeration cap and falls back to the sequential sampler
    otherwise.
    """
    m = as_matrix(m)
    if samples < 1:
        raise InvalidArgumentError(f"samples must be >= 1, got {samples}")
    if sampler not in SAMPLERS:
        raise InvalidArgumentError(f"sampler must be one of {SAMPLERS}, got {sampler!r}")
    report = bound_suite(m, r, k)
    rows, cols = m.shape
    if sampler == "auto":
        fits = allow_large or pair_count(rows, cols, r, k) <= MAX_ENUMERATED_PAIRS
        sampler = "enumerate" if fits else "sequential"

    if sampler == "enumerate":
        dist = build_distribution(m, r, k, allow_large=allow_large)
        flat = sample_flat(dist, seed, samples)
        uniq, inverse = np.unique(flat, return_inverse=True)
        pairs = [dist.pair_at(t) for t in uniq]
    else:
        drawn = sample_sequential(m, r, k, seed, samples)
        index = {}
        inverse = np.array([index.setdefault(p, len(index)) for p in drawn])
        pairs = list(index)

    b_u = np.empty(len(pairs))
    d_u = np.empty(len(pairs))
    by_cols: dict[IndexSet, list[int]] = {}
    for t, (_, cs) in enumerate(pairs):
        by_cols.setdefault(cs, []).append(t)
    for cs, members in by_cols.items():
        idx = np.array([pairs[t][0].indices for t in members], dtype=np.intp).reshape(len(members), r)
        b_u[members], d_u[members] = _pair_errors(m, idx, cs.indices)

    b_s, d_s = b_u[inverse], d_u[inverse]
    t_s = b_s + d_s

    def stderr(x):
        return float(np.std(x, ddof=1) / math.sqrt(x.size)) if x.size > 1 else float("nan")

    report.b_err_expected = float(np.mean(b_s))
    report.d_err_expected = float(np.mean(d_s))
    report.total_expected = float(np.mean(t_s))
    report.estimation_mode = "monte_carlo"
    report.samples = samples
    report.seed = seed
    report.b_err_std_error = stderr(b_s)
    report.d_err_std_error = stderr(d_s)
    report.total_std_error = stderr(t_s)
    return report


@dataclass(frozen=True)
class ComponentDiagnostic:
    b_err_expected: float
    d_err_expected: float
    relative_gap: float


def spd_component_diagnostic(m, r: int, k: int, allow_large: bool = False) -> ComponentDiagnostic:
    """Compare the two expected error components for a symmetric PSD matrix.

    Reported only; no equality between the components is asserted.
    """
    from .cur import check_symmetric_psd

    m = as_matrix(m)
    check_symmetric_psd(m)
    b, d = exact_expectations(m, r, k, allow_large=allow_large)
    gap = abs(b - d) / max(b, d) if max(b, d) > 0 else 0.0
    return ComponentDiagnostic(b, d, gap)


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.asarray(p) - np.asarray(q))))


def empirical_distribution(dist: SubsetDistribution, draws) -> np.ndarray:
    """Frequency table of ``draws`` (flat indices or pairs) on ``dist``'s grid."""
    counts = np.zeros(dist.weights.size)
    draws = list(draws)
    if draws and isinstance(draws[0], tuple):
        draws = [dist.flat_index(i, j) for i, j in draws]
    np.add.at(counts, np.asarray(draws, dtype=np.intp), 1.0)
    return (counts / max(len(draws), 1)).reshape(dist.weights.shape)



__all__ = [
    "BoundReport",
    "SubsetDistribution",
    "bound_suite",
    "build_distribution",
    "empirical_distribution",
    "exact_expectations",
    "expected_errors_exact",
    "expected_errors_mc",
    "interpolation_factor",
    "interpolation_factor_exact",
    "pair_errors",
    "reports_from_csv",
    "reports_to_csv",
    "reports_to_json",
    "sample",
    "sample_flat",
    "sample_sequential",
    "spd_component_diagnostic",
    "total_variation",
    "zeta_closed_form",
]
