"""Monomorphic and interval decompositions of finite structures, profiles of
classes, a growth heuristic for profiles, and the König tree of interval
decompositions along a chain of structures.

A partition into blocks is monomorphic when any two subsets meeting every
block in the same number of points induce isomorphic substructures. An
interval decomposition is a monomorphic one whose blocks are intervals of the
designated total order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import bounds
from .errors import EmptyLevel, InvalidStructure
from .relcore.canon import canonical_form
from .relcore.classes import ClassSpec, enumerate_upto_iso, induced_substructure
from .relcore.structures import EmbeddingMap, RelationalStructure, as_structure, iter_bits

MARKED_CHAIN_SIGNATURE = (("lt", 2), ("mark", 1))


@dataclass(frozen=True)
class Decomposition:
    blocks: tuple[tuple[int, ...], ...]
    kind: str = "general"

    def __post_init__(self):
        blocks = tuple(tuple(sorted(b)) for b in self.blocks)
        if any(not b for b in blocks):
            raise InvalidStructure("empty block")
        object.__setattr__(self, "blocks", tuple(sorted(blocks)))
        if self.kind not in ("interval", "general"):
            raise ValueError(f"unknown decomposition kind {self.kind!r}")
        seen = [x for b in blocks for x in b]
        if len(seen) != len(set(seen)):
            raise InvalidStructure("blocks overlap")

    @property
    def size(self) -> int:
        return sum(len(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def validate(self, S) -> None:
        """Check that the blocks cover ``S`` and, for intervals, follow its order."""
        if sorted(x for b in self.blocks for x in b) != list(range(S.n)):
            raise InvalidStructure("blocks do not partition the domain")
        if self.kind == "interval":
            rank = _order_rank(S)
            for b in self.blocks:
                ranks = sorted(rank[x] for x in b)
                if ranks[-1] - ranks[0] != len(b) - 1:
                    raise InvalidStructure(f"block {b} is not an interval of the order")

    def restrict(self, inclusion: EmbeddingMap) -> "Decomposition":
        """Pull back along ``inclusion``, dropping blocks that miss its image."""
        inv = {y: x for x, y in enumerate(inclusion)}
        blocks = [tuple(inv[y] for y in b if y in inv) for b in self.blocks]
        return Decomposition(tuple(b for b in blocks if b), self.kind)

    def to_json(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks], "kind": self.kind}


def _order_rank(S) -> list[int]:
    s = as_structure(S)
    if s.order is None:
        raise InvalidStructure("structure has no designated total order")
    return list(s.order_rank())


def _subset_codes(S) -> list[bytes]:
    """Canonical code of the substructure induced by every subset bitmask."""
    n = S.n
    bounds.check("monomorphic", n, "monomorphic decomposition")
    codes = []
    for mask in range(1 << n):
        codes.append(canonical_form(induced_substructure(S, list(iter_bits(mask)))))
    return codes


def _is_monomorphic(n: int, codes: list[bytes], block_masks: Sequence[int], up_to: int) -> bool:
    seen: dict[tuple[int, ...], bytes] = {}
    for mask in range(1 << n):
        if bin(mask).count("1") > up_to:
            continue
        trace = tuple(bin(mask & b).count("1") for b in block_masks)
        prev = seen.setdefault(trace, codes[mask])
        if prev != codes[mask]:
            return False
    return True


def is_monomorphic_decomposition(S, d: Decomposition, up_to: int | None = None) -> bool:
    """Equal block traces imply isomorphic induced substructures, for subsets of size <= up_to."""
    d.validate(S)
    n = S.n
    up_to = n if up_to is None else up_to
    if up_to > n:
        raise ValueError("up_to exceeds the structure size")
    masks = [sum(1 << x for x in b) for b in d.blocks]
    return _is_monomorphic(n, _subset_codes(S), masks, up_to)


def _interval_partitions(seq: Sequence[int], blocks: int):
    n = len(seq)
    for cuts in itertools.combinations(range(1, n), blocks - 1):
        edges = (0, *cuts, n)
        yield tuple(tuple(seq[edges[i] : edges[i + 1]]) for i in range(blocks))


def interval_decompositions(S, max_blocks: int, *, codes: list[bytes] | None = None) -> list[Decomposition]:
    """Every monomorphic interval decomposition of ``S`` with at most ``max_blocks`` blocks."""
    rank = _order_rank(S)
    n = S.n
    if n == 0:
        return [Decomposition((), "interval")]
    seq = sorted(range(n), key=rank.__getitem__)
    codes = _subset_codes(S) if codes is None else codes
    out = []
    for count in range(1, min(max_blocks, n) + 1):
        for blocks in _interval_partitions(seq, count):
            masks = [sum(1 << x for x in b) for b in blocks]
            if _is_monomorphic(n, codes, masks, n):
                out.append(Decomposition(blocks, "interval"))
    return out


def minimal_interval_decomposition(S, k_max: int) -> Decomposition | None:
    """Fewest-block monomorphic interval decomposition with at most ``k_max + 1`` blocks.

    Block counts are tried in increasing order, so every coarser interval
    partition has been rejected before the returned one.
    """
    rank = _order_rank(S)
    n = S.n
    if n == 0:
        return Decomposition((), "interval")
    seq = sorted(range(n), key=rank.__getitem__)
    codes = _subset_codes(S)
    for count in range(1, min(k_max + 1, n) + 1):
        for blocks in _interval_partitions(seq, count):
            masks = [sum(1 << x for x in b) for b in blocks]
            if _is_monomorphic(n, codes, masks, n):
                return Decomposition(blocks, "interval")
    return None


# --------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class ProfileTable:
    cls: ClassSpec
    values: tuple[int, ...]

    def to_json(self) -> dict:
        return {"class": str(self.cls), "values": list(self.values)}


def profile(cls: ClassSpec, N: int) -> ProfileTable:
    """Number of members with ``n`` points up to isomorphism, for ``n = 0..N``."""
    return ProfileTable(cls, tuple(len(enumerate_upto_iso(cls, n)) for n in range(N + 1)))


@dataclass(frozen=True)
class GrowthTag:
    kind: str  # eventually-polynomial | exponential-candidate | inconclusive
    degree: int | None = None
    heuristic: bool = True

    def __str__(self) -> str:
        if self.kind == "eventually-polynomial":
            return f"eventually-polynomial({self.degree})"
        return self.kind

    def to_json(self) -> dict:
        return {"tag": str(self), "kind": self.kind, "degree": self.degree, "heuristic": self.heuristic}


def growth_classify(t: ProfileTable | Sequence[int], window: int = 4, c: float = 1.4) -> GrowthTag:
    """Empirical guess at the growth of a profile from its trailing ``window`` values.

    Polynomial of degree ``d`` when the ``d``-th differences are constant and
    nonzero (``d`` least, at most ``window - 2`` so at least two differences
    are compared); exponential candidate when every successive ratio exceeds
    ``c``; inconclusive otherwise.
    """
    values = list(t.values if isinstance(t, ProfileTable) else t)
    if window < 3:
        raise ValueError("window must be at least 3")
    if window > len(values):
        raise ValueError(f"window {window} exceeds the {len(values)} available values")
    tail = values[-window:]
    diffs = tail
    for d in range(window - 1):
        if len(set(diffs)) == 1 and diffs[0] != 0:
            return GrowthTag("eventually-polynomial", d)
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    if all(a > 0 and Fraction(b, a) > Fraction(c).limit_denominator() for a, b in zip(tail, tail[1:])):
        return GrowthTag("exponential-candidate")
    return GrowthTag("inconclusive")


# --------------------------------------------------------------------------
# König tree


def marked_chain(n: int, mark: int | None) -> RelationalStructure:
    """The chain ``0 < 1 < ... < n-1`` with an optional marked point."""
    lt = frozenset((a, b) for a in range(n) for b in range(a + 1, n))
    marks = frozenset() if mark is None else frozenset({(mark,)})
    return RelationalStructure(n, MARKED_CHAIN_SIGNATURE, (lt, marks), "lt")


def marked_chain_corpus(max_n: int = 8) -> list[tuple[RelationalStructure, EmbeddingMap | None]]:
    """Chains grown around a marked point, alternately below and above it.

    Entry ``i`` is ``(S_i, incl)`` with ``incl : S_{i-1} -> S_i`` (None for ``i = 0``).
    """
    out: list[tuple[RelationalStructure, EmbeddingMap | None]] = [(marked_chain(1, 0), None)]
    mark = 0
    for n in range(2, max_n + 1):
        if n % 2 == 0:  # new point at the bottom
            incl = EmbeddingMap(tuple(x + 1 for x in range(n - 1)))
            mark += 1
        else:  # new point at the top
            incl = EmbeddingMap(tuple(range(n - 1)))
        out.append((marked_chain(n, mark), incl))
    return out


@dataclass(frozen=True)
class KoenigTree:
    levels: tuple[tuple[Decomposition, ...], ...]
    parents: tuple[tuple[int, ...], ...]  # parents[i][j]: index at level i-1 of node j's restriction


def koenig_tree(chain: Sequence[tuple[object, EmbeddingMap | None]], k: int) -> KoenigTree:
    """Levels of interval decompositions into at most ``k + 1`` blocks, joined by restriction."""
    levels = []
    parents = []
    for i, (S, incl) in enumerate(chain):
        level = tuple(interval_decompositions(S, k + 1))
        if not level:
            raise EmptyLevel(i, f"stage {i} ({S.n} points) has no interval decomposition into <= {k + 1} blocks")
        if i == 0:
            parents.append(tuple(-1 for _ in level))
        else:
            prev = {d: j for j, d in enumerate(levels[-1])}
            parents.append(tuple(prev[d.restrict(incl)] for d in level))
        levels.append(level)
    return KoenigTree(tuple(levels), tuple(parents))


def koenig_branch(chain: Sequence[tuple[object, EmbeddingMap | None]], k: int) -> list[Decomposition]:
    """One root-to-leaf branch through every level, each entry the restriction of the next."""
    if not chain:
        return []
    tree = koenig_tree(chain, k)
    j = 0
    branch = []
    for i in range(len(tree.levels) - 1, -1, -1):
        branch.append(tree.levels[i][j])
        j = tree.parents[i][j]
    return branch[::-1]
