import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from curvol.errors import EnumerationSizeError, InvalidArgumentError
from curvol.subsets import (
    IndexSet,
    binomial,
    check_enumeration_size,
    complement,
    enumerate_subsets,
    full_set,
    parse_index_set,
    supersets_count,
)


def test_enumerate_small():
    assert [s.indices for s in enumerate_subsets(3, 1)] == [(0,), (1,), (2,)]
    pairs = [s.indices for s in enumerate_subsets(4, 2)]
    assert pairs == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    assert pairs == sorted(pairs)
    assert len(enumerate_subsets(8, 3)) == 56
    assert [s.indices for s in enumerate_subsets(3, 0)] == [()]


def test_enumerate_counts_match_binomial():
    for n in range(13):
        for k in range(n + 1):
            subsets = enumerate_subsets(n, k)
            assert len(subsets) == binomial(n, k)
            assert len(set(subsets)) == len(subsets)


def test_enumerate_rejects_k_above_n():
    with pytest.raises(InvalidArgumentError):
        enumerate_subsets(3, 4)


def test_binomial():
    assert binomial(3 - 1, 1 - 1) == 1
    assert binomial(5, 2) == 10
    assert binomial(3, 5) == 0
    # arbitrary-precision oracle: product formula in exact integers
    expected = 1
    for i in range(30):
        expected = expected * (60 - i) // (i + 1)
    assert binomial(60, 30) == expected == 118264581564861424
    with pytest.raises(InvalidArgumentError):
        binomial(-1, 0)


def test_supersets_count():
    assert supersets_count(3, 1, 2) == 2
    assert supersets_count(5, 3, 3) == 1
    brute = sum(1 for s in itertools.combinations(range(6), 4) if {0, 1} <= set(s))
    assert supersets_count(6, 2, 4) == brute == 6
    with pytest.raises(InvalidArgumentError):
        supersets_count(4, 3, 2)


def test_supersets_count_brute_force_all_small():
    for n in range(9):
        for r in range(n + 1):
            for k in range(r + 1):
                for fixed in itertools.combinations(range(n), k):
                    brute = sum(1 for s in itertools.combinations(range(n), r) if set(fixed) <= set(s))
                    assert brute == supersets_count(n, k, r)


def test_complement():
    assert complement(IndexSet((0,), 3)).indices == (1, 2)
    assert complement(full_set(4)).indices == ()


@given(st.integers(0, 12).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(0, max(n - 1, 0)), max_size=n))))
def test_complement_is_involution_and_partition(data):
    n, chosen = data
    chosen = {i for i in chosen if i < n}
    s = IndexSet(tuple(sorted(chosen)), n)
    c = complement(s)
    assert complement(c) == s
    assert set(s) | set(c) == set(range(n)) and not set(s) & set(c)


def test_index_set_validation():
    with pytest.raises(InvalidArgumentError):
        IndexSet((1, 1), 3)
    with pytest.raises(InvalidArgumentError):
        IndexSet((0, 3), 3)
    with pytest.raises(InvalidArgumentError):
        IndexSet((2, 1), 3)


def test_parse_and_format():
    s = parse_index_set("0,2,3", 5)
    assert s.indices == (0, 2, 3) and str(s) == "0,2,3"
    assert parse_index_set("", 3).indices == ()
    with pytest.raises(InvalidArgumentError):
        parse_index_set("0,a", 3)
    with pytest.raises(InvalidArgumentError):
        parse_index_set("3,1", 5)


def test_enumeration_guard():
    assert check_enumeration_size(8, 6, 4, 3) == math.comb(8, 4) * 20
    with pytest.raises(EnumerationSizeError):
        check_enumeration_size(40, 30, 20, 3)
    assert check_enumeration_size(40, 30, 20, 3, allow_large=True) > 2_000_000
