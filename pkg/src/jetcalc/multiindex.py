"""Multi-indices over the base directions, and the symmetric-list correspondence."""

from __future__ import annotations

import itertools
from math import factorial


class MultiIndex(tuple):
    """An n-tuple of non-negative integers counting derivatives per base direction.

    Immutable; behaves as a tuple.  ``order`` is the total number of
    derivatives (|mu|); the zero multi-index stands for the field itself.
    """

    __slots__ = ()

    def __new__(cls, exponents):
        exps = tuple(int(e) for e in exponents)
        if any(e < 0 for e in exps):
            raise ValueError("multi-index entries must be non-negative")
        return super().__new__(cls, exps)

    @classmethod
    def zero(cls, n: int) -> "MultiIndex":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, direction: int) -> "MultiIndex":
        """Unit multi-index e_direction; directions are 1-based."""
        if not 1 <= direction <= n:
            raise ValueError(f"direction {direction} out of range 1..{n}")
        return cls(tuple(1 if i == direction - 1 else 0 for i in range(n)))

    @property
    def n(self) -> int:
        return len(self)

    @property
    def order(self) -> int:
        return sum(self)

    def add(self, other: "MultiIndex") -> "MultiIndex":
        if len(self) != len(other):
            raise ValueError("multi-index dimension mismatch")
        return MultiIndex(a + b for a, b in zip(self, other))

    def bump(self, direction: int) -> "MultiIndex":
        return self.add(MultiIndex.unit(len(self), direction))

    def drop(self, direction: int) -> "MultiIndex | None":
        """self - e_direction, or None if the entry is already zero."""
        if self[direction - 1] == 0:
            return None
        return MultiIndex(
            e - 1 if i == direction - 1 else e for i, e in enumerate(self)
        )

    def weight(self) -> int:
        """Number of distinct index arrangements, |mu|! / (mu_1! ... mu_n!)."""
        w = factorial(self.order)
        for e in self:
            w //= factorial(e)
        return w

    def directions(self):
        """The 1-based directions with a non-zero entry."""
        return [i + 1 for i, e in enumerate(self) if e > 0]

    def __repr__(self):
        return f"MultiIndex({tuple(self)})"


def multiindex_factor(indices, n: int) -> tuple[MultiIndex, int]:
    """Collapse a symmetric index list (1-based entries) to (multi-index, weight).

    The weight is the multinomial count of arrangements of ``indices`` and
    relates symmetric-list momentum storage to multi-index storage.
    """
    exps = [0] * n
    for i in indices:
        if not 1 <= i <= n:
            raise ValueError(f"index {i} out of range 1..{n}")
        exps[i - 1] += 1
    mi = MultiIndex(exps)
    return mi, mi.weight()


def all_multiindices(n: int, order: int):
    """All multi-indices with n entries and total order exactly ``order``."""
    if n == 1:
        yield MultiIndex((order,))
        return
    for head in range(order, -1, -1):
        for tail in all_multiindices(n - 1, order - head):
            yield MultiIndex((head,) + tuple(tail))


def multiindices_up_to(n: int, order: int):
    """All multi-indices with total order 0..order, grouped low to high."""
    return itertools.chain.from_iterable(
        all_multiindices(n, o) for o in range(order + 1)
    )
