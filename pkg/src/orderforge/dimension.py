"""Linear extensions, realizers and exact Dushnik-Miller dimension."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Iterator, Sequence

from . import bounds
from .errors import InvalidStructure
from .relcore.structures import FinitePoset, LinearOrder, check_same_domain, iter_bits


@dataclass(frozen=True)
class Realizer:
    orders: tuple[LinearOrder, ...]
    target: FinitePoset

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        if not is_realizer(self.target, self.orders):
            raise InvalidStructure("orders do not realize the target poset")

    def __len__(self) -> int:
        return len(self.orders)


def iter_linear_extensions(P: FinitePoset) -> Iterator[LinearOrder]:
    """Linear extensions in lexicographic order of their bottom-to-top listings."""
    n = P.n
    full = (1 << n) - 1
    strict_down = [P.down[x] & ~(1 << x) for x in range(n)]
    seq: list[int] = []

    def rec(placed: int):
        if placed == full:
            yield LinearOrder.from_sequence(seq)
            return
        for x in range(n):
            if not placed >> x & 1 and strict_down[x] & ~placed == 0:
                seq.append(x)
                yield from rec(placed | 1 << x)
                seq.pop()

    yield from rec(0)


def linear_extensions(P: FinitePoset, limit: int | None = None) -> list[LinearOrder]:
    return list(islice(iter_linear_extensions(P), limit))


def is_linear_extension(P: FinitePoset, L: LinearOrder) -> bool:
    return all(P.up[a] & ~L.up[a] == 0 for a in range(P.n))


def is_realizer(P: FinitePoset, orders: Sequence[LinearOrder]) -> bool:
    """True iff the intersection of ``orders`` is exactly the order of ``P``."""
    check_same_domain(P.n, orders)
    full = (1 << P.n) - 1
    for a in range(P.n):
        acc = full
        for L in orders:
            acc &= L.up[a]
        if acc != P.up[a]:
            return False
    return True


def complementary_order(P: FinitePoset, L: LinearOrder) -> LinearOrder | None:
    """The unique order agreeing with P on comparable pairs and reversing L elsewhere."""
    n = P.n
    up2 = []
    for a in range(n):
        m = P.up[a]
        for b in range(n):
            if not P.comparable(a, b) and L.rank[b] < L.rank[a]:
                m |= 1 << b
        up2.append(m)
    for a in range(n):
        for b in iter_bits(up2[a]):
            if up2[b] & ~up2[a]:
                return None
    return LinearOrder(tuple(n - bin(up2[a]).count("1") for a in range(n)))


def two_dim_realizer(P: FinitePoset) -> tuple[LinearOrder, LinearOrder] | None:
    """Lexicographically least realizing pair, or None when the dimension exceeds 2.

    For each candidate first order the second one is forced (it must reverse
    every incomparable pair), so scanning the first order in lexicographic
    order is exhaustive.
    """
    for L1 in iter_linear_extensions(P):
        L2 = complementary_order(P, L1)
        if L2 is not None:
            return L1, L2
    return None


def critical_pairs(P: FinitePoset) -> list[tuple[int, int]]:
    """Incomparable ``(a, b)`` with everything below ``a`` below ``b`` and everything above ``b`` above ``a``.

    A family of linear extensions realizes ``P`` iff each such pair has ``b``
    below ``a`` in some member.
    """
    n = P.n
    out = []
    for a in range(n):
        for b in range(n):
            if a == b or P.comparable(a, b):
                continue
            below_a = P.down[a] & ~(1 << a)
            above_b = P.up[b] & ~(1 << b)
            if below_a & ~P.down[b] == 0 and above_b & ~P.up[a] == 0:
                out.append((a, b))
    return out


def _reversal_classes(P: FinitePoset, pairs: list[tuple[int, int]], d: int):
    """Split ``pairs`` into at most ``d`` classes, each reversible by one linear extension.

    A class is reversible iff adding ``b <= a`` for all its pairs keeps the
    order acyclic; closures are maintained incrementally as up-masks.
    """
    n = P.n
    classes: list[list[int]] = []

    def add(up: list[int], a: int, b: int) -> list[int] | None:
        if up[a] >> b & 1:
            return None
        new = list(up)
        for x in range(n):
            if new[x] >> b & 1:
                new[x] |= up[a]
        return new

    def rec(i: int) -> bool:
        if i == len(pairs):
            return True
        a, b = pairs[i]
        for c in range(len(classes)):
            nxt = add(classes[c], a, b)
            if nxt is not None:
                saved = classes[c]
                classes[c] = nxt
                if rec(i + 1):
                    return True
                classes[c] = saved
        if len(classes) < d:
            nxt = add(list(P.up), a, b)
            if nxt is not None:
                classes.append(nxt)
                if rec(i + 1):
                    return True
                classes.pop()
        return False

    if not rec(0):
        return None
    return [next(iter_linear_extensions(FinitePoset.from_up_masks(up))) for up in classes]


def minimum_realizer(P: FinitePoset) -> Realizer:
    """A realizer of least size: d = 1, 2 directly, then colourings of the critical pairs."""
    n = P.n
    bounds.check("dimension", n, "dimension")
    if n == 0:
        return Realizer((), P)
    if P.is_chain():
        return Realizer((linear_extensions(P, 1)[0],), P)
    pair = two_dim_realizer(P)
    if pair is not None:
        return Realizer(pair, P)
    pairs = critical_pairs(P)
    d = 3
    while True:
        found = _reversal_classes(P, pairs, d)
        if found is not None:
            return Realizer(tuple(found), P)
        d += 1


def dimension(P: FinitePoset) -> int:
    """Least number of linear extensions whose intersection is ``P``."""
    return len(minimum_realizer(P))


def dimension_at_most(P: FinitePoset, k: int) -> bool:
    if P.n == 0:
        return True
    if k <= 0:
        return False
    if P.is_chain():
        return True
    if k == 1:
        return False
    if two_dim_realizer(P) is not None:
        return True
    if k == 2:
        return False
    return dimension(P) <= k


def crown(k: int) -> FinitePoset:
    """The crown on 2k points: minimal x_i = i, maximal y_j = k + j, x_i < y_j iff i != j."""
    if k < 3:
        raise ValueError("crown needs k >= 3")
    pairs = [(i, k + j) for i in range(k) for j in range(k) if i != j]
    return FinitePoset.from_relation(2 * k, pairs)
