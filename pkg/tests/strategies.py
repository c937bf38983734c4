"""Hypothesis strategies for random finite posets and permutations."""

from __future__ import annotations

from hypothesis import strategies as st

from orderforge.relcore.structures import FinitePoset, LinearOrder


@st.composite
def posets(draw, min_n: int = 0, max_n: int = 6) -> FinitePoset:
    """Random DAG on a random labelling, closed transitively."""
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    pairs = []
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                pairs.append((perm[i], perm[j]))
    return FinitePoset.from_relation(n, pairs)


@st.composite
def linear_orders(draw, n: int) -> LinearOrder:
    return LinearOrder(tuple(draw(st.permutations(range(n)))))


def as_matrix(P: FinitePoset) -> list[list[bool]]:
    return [list(row) for row in P.leq]
