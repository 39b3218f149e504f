import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from curvol.compound import (
    compound,
    compound_norm_sq,
    elementary_symmetric,
    elementary_symmetric_table,
    gram_det,
    volume_sq,
    volume_sq_batch,
)
from curvol.errors import EnumerationSizeError, InvalidArgumentError
from curvol.subsets import IndexSet
from tests.oracles import esp_brute, gram_det_lu, minor_sq_sum


def test_first_compound_is_matrix(rng):
    a = rng.standard_normal((4, 3))
    assert np.array_equal(compound(a, 1).minors, a)


def test_second_compound_of_identity():
    c = compound(np.eye(3), 2)
    assert np.array_equal(c.minors, np.eye(3))
    assert c.minor(IndexSet((0, 2), 3), IndexSet((0, 2), 3)) == 1.0
    assert c.minor(IndexSet((0, 1), 3), IndexSet((0, 2), 3)) == 0.0


def test_compound_norm_matches_enumeration(rng):
    a = rng.standard_normal((4, 3))
    assert compound(a, 2).norm_sq == pytest.approx(minor_sq_sum(a, 2), rel=1e-12)
    assert compound_norm_sq(a, 2) == pytest.approx(minor_sq_sum(a, 2), rel=1e-8)


def test_compound_errors():
    with pytest.raises(InvalidArgumentError):
        compound(np.eye(3), 4)
    with pytest.raises(EnumerationSizeError):
        compound(np.ones((40, 40)), 6)


@pytest.mark.parametrize("mat,k,expected", [
    (np.eye(3), 1, 3.0),
    (np.eye(3), 2, 3.0),
    (np.diag([2.0, 1.0]), 1, 5.0),
    (np.diag([2.0, 1.0]), 2, 4.0),
])
def test_compound_norm_hand_values(mat, k, expected):
    assert compound_norm_sq(mat, k) == pytest.approx(expected, rel=1e-14)


def test_elementary_symmetric_values():
    assert elementary_symmetric([4, 1], 1) == 5
    assert elementary_symmetric([4, 1], 0) == 1
    assert elementary_symmetric([], 0) == 1
    assert elementary_symmetric([1, 2, 3], 2) == esp_brute([1, 2, 3], 2) == 11
    with pytest.raises(InvalidArgumentError):
        elementary_symmetric([1, -1], 1)
    with pytest.raises(InvalidArgumentError):
        elementary_symmetric([1, 2], 3)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(0, 10), min_size=0, max_size=8))
def test_elementary_symmetric_table_vs_brute(values):
    table = elementary_symmetric_table(values, len(values))
    for k in range(len(values) + 1):
        assert table[k, -1] == pytest.approx(esp_brute(values, k), rel=1e-12, abs=1e-12)


def test_volume_sq_values(rng):
    assert volume_sq([[1.0], [0.0]]) == 1.0
    assert volume_sq([[1.0, 1.0], [1.0, 1.0], [0.0, 0.0]]) == 0.0
    a = rng.standard_normal((5, 3))
    assert volume_sq(a) == pytest.approx(minor_sq_sum(a, 3), rel=1e-10)
    with pytest.raises(InvalidArgumentError):
        volume_sq(np.ones((2, 3)))


def test_volume_sq_batch_matches_lu(rng):
    stack = rng.standard_normal((20, 6, 3))
    vols = volume_sq_batch(stack)
    for a, v in zip(stack, vols):
        assert v == pytest.approx(gram_det_lu(a), rel=1e-10)


def test_gram_det_wide_is_zero(rng):
    assert gram_det(rng.standard_normal((2, 3))) == 0.0


def test_cauchy_binet_random_shapes(rng):
    for rows in range(1, 9):
        for k in range(1, min(rows, 5) + 1):
            a = rng.standard_normal((rows, k))
            assert volume_sq(a) == pytest.approx(minor_sq_sum(a, k), rel=1e-9)
