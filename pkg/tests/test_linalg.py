import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from curvol.errors import InvalidArgumentError, InvalidInputError
from curvol.linalg import (
    best_rank_k,
    format_matrix_csv,
    frobenius_sq,
    matrices_close,
    parse_matrix_csv,
    pseudoinverse,
    read_matrix_csv,
    submatrix,
    svd,
    write_matrix_csv,
)


def test_svd_identity_and_diagonal():
    assert np.allclose(svd(np.eye(3)).singular_values, [1, 1, 1])
    assert np.allclose(svd(np.diag([2.0, 1.0])).singular_values, [2, 1])
    assert np.allclose(svd(np.diag([1.0, 2.0])).singular_values, [2, 1])


def test_svd_reconstructs_gaussian(rng):
    a = rng.standard_normal((5, 3))
    res = svd(a)
    s = res.singular_values
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    assert np.max(np.abs(res.reconstruct() - a)) <= 1e-10 * s[0]


def test_svd_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        svd([[1.0, np.nan]])
    with pytest.raises(InvalidInputError):
        svd([[np.inf]])


def test_pseudoinverse_small_cases():
    assert np.array_equal(pseudoinverse([[1.0], [0.0]]), [[1.0, 0.0]])
    assert np.array_equal(pseudoinverse(np.zeros((2, 2))), np.zeros((2, 2)))
    assert pseudoinverse(np.zeros((2, 3))).shape == (3, 2)


def _penrose_residual(a, p):
    smax = np.linalg.svd(a, compute_uv=False)[0] if a.size else 0.0
    tol = 1e-8 * max(smax, 1.0)
    checks = [a @ p @ a - a, p @ a @ p - p, (a @ p) - (a @ p).T, (p @ a) - (p @ a).T]
    return max(np.max(np.abs(c)) for c in checks), tol


def test_penrose_identities_full_column_rank(rng):
    a = rng.standard_normal((4, 2))
    resid, tol = _penrose_residual(a, pseudoinverse(a))
    assert resid <= tol


def test_penrose_identities_1000_random(rng):
    for _ in range(1000):
        m, n = rng.integers(1, 9, size=2)
        a = rng.standard_normal((m, n))
        if rng.random() < 0.3:  # force rank deficiency
            rank = int(rng.integers(0, min(m, n) + 1))
            a = rng.standard_normal((m, rank)) @ rng.standard_normal((rank, n))
        resid, tol = _penrose_residual(a, pseudoinverse(a))
        assert resid <= tol


def test_pseudoinverse_stacked_matches_slices(rng):
    stack = rng.standard_normal((4, 5, 3))
    out = pseudoinverse(stack)
    for t in range(4):
        assert np.allclose(out[t], np.linalg.pinv(stack[t]))


def test_pseudoinverse_rejects_bad_tol():
    with pytest.raises(InvalidArgumentError):
        pseudoinverse(np.eye(2), tol_factor=0.0)


def test_frobenius_sq_values(rng):
    assert frobenius_sq(np.eye(3)) == 3
    assert frobenius_sq([[1, 2], [3, 4]]) == 30
    a = rng.standard_normal((6, 4))
    s = np.linalg.svd(a, compute_uv=False)
    assert frobenius_sq(a) == pytest.approx(np.sum(s**2), rel=1e-10)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(1, 6), st.integers(1, 6)),
              elements=st.floats(-100, 100)), st.randoms())
def test_frobenius_invariant_under_permutation(a, rnd):
    rows = list(range(a.shape[0]))
    cols = list(range(a.shape[1]))
    rnd.shuffle(rows)
    rnd.shuffle(cols)
    assert frobenius_sq(a[np.ix_(rows, cols)]) == pytest.approx(frobenius_sq(a), rel=1e-12, abs=1e-300)


def test_best_rank_k_examples(rng):
    a = rng.standard_normal((4, 3))
    assert matrices_close(best_rank_k(a, 3), a)
    assert np.allclose(best_rank_k(np.diag([2.0, 1.0]), 1), np.diag([2.0, 0.0]))
    assert np.array_equal(best_rank_k(a, 0), np.zeros_like(a))


def test_best_rank_k_tail_identity(rng):
    for _ in range(200):
        m, n = rng.integers(1, 9, size=2)
        a = rng.standard_normal((m, n))
        s = np.linalg.svd(a, compute_uv=False)
        for k in range(min(m, n) + 1):
            tail = float(np.sum(s[k:] ** 2))
            err = frobenius_sq(a - best_rank_k(a, k))
            assert err == pytest.approx(tail, rel=1e-10, abs=1e-12 * s[0] ** 2)


def test_best_rank_k_range():
    with pytest.raises(InvalidArgumentError):
        best_rank_k(np.eye(3), 4)
    with pytest.raises(InvalidArgumentError):
        best_rank_k(np.eye(3), -1)


def test_submatrix(rng):
    a = rng.standard_normal((5, 4))
    assert np.array_equal(submatrix(a, range(5), range(4)), a)
    assert np.array_equal(submatrix(np.eye(3), [0, 1], [0]), [[1.0], [0.0]])
    with pytest.raises(InvalidArgumentError):
        submatrix(a, [5], [0])
    with pytest.raises(InvalidArgumentError):
        submatrix(a, [1, 0], [0])


def test_submatrix_complement_partitions_norm(rng):
    a = rng.standard_normal((5, 4))
    rows, cols = [0, 3], [1]
    rc = [i for i in range(5) if i not in rows]
    cc = [j for j in range(4) if j not in cols]
    parts = [submatrix(a, r, c) for r in (rows, rc) for c in (cols, cc)]
    assert sum(frobenius_sq(p) for p in parts) == pytest.approx(frobenius_sq(a), rel=1e-14)


def test_csv_round_trip(rng, tmp_path):
    a = rng.standard_normal((4, 3)) * 10.0 ** rng.integers(-5, 5, size=(4, 3))
    path = tmp_path / "m.csv"
    write_matrix_csv(a, path)
    assert np.array_equal(read_matrix_csv(path), a)
    buf = io.StringIO()
    write_matrix_csv(a, buf)
    buf.seek(0)
    assert np.array_equal(read_matrix_csv(buf), a)
    assert format_matrix_csv([[1, 2.5]]) == "1.0,2.5\n"


def test_csv_rejects_ragged_and_garbage():
    with pytest.raises(InvalidInputError, match="ragged"):
        parse_matrix_csv("1,2\n3\n")
    with pytest.raises(InvalidInputError):
        parse_matrix_csv("1,x\n")
    with pytest.raises(InvalidInputError):
        parse_matrix_csv("")
    with pytest.raises(InvalidInputError):
        parse_matrix_csv("1,nan\n")
