"""Index subsets: lexicographic enumeration, counting, complements, parsing."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator

from .errors import EnumerationSizeError, InvalidArgumentError

# Largest number of (row set, column set) pairs an exact enumeration may visit
# unless the caller explicitly opts in.
MAX_ENUMERATED_PAIRS = 2_000_000


@dataclass(frozen=True, order=True)
class IndexSet:
    """Strictly increasing 0-based indices drawn from ``range(universe)``."""

    indices: tuple[int, ...]
    universe: int

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if self.universe < 0:
            raise InvalidArgumentError(f"universe must be >= 0, got {self.universe}")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise InvalidArgumentError(f"indices {idx} are not strictly increasing")
        if idx and (idx[0] < 0 or idx[-1] >= self.universe):
            raise InvalidArgumentError(f"indices {idx} fall outside range({self.universe})")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, item) -> bool:
        return item in self.indices

    def issubset(self, other: "IndexSet") -> bool:
        return set(self.indices) <= set(other.indices)

    def __str__(self) -> str:
        return format_index_set(self)


def full_set(n: int) -> IndexSet:
    return IndexSet(tuple(range(n)), n)


def parse_index_set(text: str, universe: int) -> IndexSet:
    """Parse ``"0,2,3"``; an empty string is the empty set."""
    text = text.strip()
    if not text:
        return IndexSet((), universe)
    try:
        values = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise InvalidArgumentError(f"cannot parse index set {text!r}") from None
    return IndexSet(values, universe)


def format_index_set(s: IndexSet) -> str:
    return ",".join(str(i) for i in s.indices)


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient; ``0`` when ``k > n``.

    Python integers do not overflow, so the value is always exact.
    """
    if n < 0 or k < 0:
        raise InvalidArgumentError(f"binomial({n}, {k}): arguments must be nonnegative")
    return math.comb(n, k)


def enumerate_subsets(n: int, k: int) -> list[IndexSet]:
    """All ``k``-subsets of ``range(n)`` in lexicographic order."""
    if n < 0 or not 0 <= k <= n:
        raise InvalidArgumentError(f"need 0 <= k <= n, got n={n}, k={k}")
    return [IndexSet(c, n) for c in itertools.combinations(range(n), k)]


def supersets_count(n: int, k: int, r: int) -> int:
    """Number of ``r``-subsets of ``range(n)`` containing a fixed ``k``-subset."""
    if not 0 <= k <= r <= n:
        raise InvalidArgumentError(f"need 0 <= k <= r <= n, got n={n}, k={k}, r={r}")
    return binomial(n - k, r - k)


def complement(s: IndexSet) -> IndexSet:
    present = set(s.indices)
    return IndexSet(tuple(i for i in range(s.universe) if i not in present), s.universe)


def pair_count(m: int, n: int, r: int, k: int) -> int:
    return binomial(m, r) * binomial(n, k)


def check_enumeration_size(m: int, n: int, r: int, k: int, allow_large: bool = False) -> int:
    """Return the number of ``(I, J)`` pairs, raising when over the cap."""
    count = pair_count(m, n, r, k)
    if count > MAX_ENUMERATED_PAIRS and not allow_large:
        raise EnumerationSizeError(
            f"C({m},{r})*C({n},{k}) = {count} pairs exceeds the cap of "
            f"{MAX_ENUMERATED_PAIRS}; pass allow_large=True to override"
        )
    return count


def as_index_set(s, universe: int) -> IndexSet:
    """Coerce an ``IndexSet``, a ``"0,2"`` string or an int sequence."""
    if isinstance(s, IndexSet):
        if s.universe != universe:
            raise InvalidArgumentError(f"index set universe {s.universe} != {universe}")
        return s
    if isinstance(s, str):
        return parse_index_set(s, universe)
    return IndexSet(tuple(int(i) for i in s), universe)
