"""Finite stages of the generic permutation, their poset reducts and ages, and
the weak-injectivity extender for posets of dimension at most 2.

A stage is a set ``0..n-1`` carrying two linear orders. Growth inserts a
point at a chosen gap of each order, so relative positions of old points
never change and every realized pattern stays realized.

No finite stage satisfies the extension property outright: a point that is
top in both orders has nothing above it. Level ``k`` is therefore certified
relative to a *core*, a set of stage points containing a copy of every
permutation with ``k - 1`` points:

    for every ``X`` inside the core with ``|X| < k`` and every one-point
    extension type ``(i, j)`` of ``X`` (``i`` points of ``X`` below in the first
    order, ``j`` in the second), some stage point outside ``X`` has that type.

A stage certified at level ``k`` contains every permutation with ``k`` points.
"""

from __future__ import annotations

import bisect
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from . import bounds
from .dimension import is_realizer, two_dim_realizer
from .errors import BoundExceeded, NotAnEmbedding, NotInClass, StageExhausted, StageTooSmall
from .products import ProductPoset, ProductTag, classify_product_embedding, product_poset
from .relcore.canon import canonical_form
from .relcore.classes import (
    PERMUTATION_SIGNATURE,
    ClassSpec,
    enumerate_upto_iso,
    induced_substructure,
    permutation_structure,
)
from .relcore.embed import is_embedding, require_embedding
from .relcore.structures import EmbeddingMap, FinitePoset, LinearOrder, as_structure


@dataclass(frozen=True)
class PermutationStructure:
    """Two reflexive linear orders on ``0..n-1``."""

    ord1: LinearOrder
    ord2: LinearOrder

    def __post_init__(self):
        if self.ord1.n != self.ord2.n:
            raise ValueError("orders live on different domains")

    @property
    def n(self) -> int:
        return self.ord1.n

    @classmethod
    def from_ranks(cls, rank1: Sequence[int], rank2: Sequence[int]) -> "PermutationStructure":
        return cls(LinearOrder(tuple(rank1)), LinearOrder(tuple(rank2)))

    def to_structure(self):
        """Strict view with relations ``lt1``, ``lt2``."""
        return permutation_structure(self.ord1.rank, self.ord2.rank)

    def restrict(self, elements: Sequence[int]) -> "PermutationStructure":
        return PermutationStructure(self.ord1.restrict(elements), self.ord2.restrict(elements))

    def pattern(self, elements: Sequence[int]) -> tuple[int, ...]:
        """Second-order ranks of ``elements`` listed in first-order sequence."""
        sub = self.restrict(sorted(elements, key=self.ord1.rank.__getitem__))
        return sub.ord2.rank

    def to_json(self) -> dict:
        return {"ord1": list(self.ord1.rank), "ord2": list(self.ord2.rank)}

    @classmethod
    def from_json(cls, data: dict) -> "PermutationStructure":
        return cls.from_ranks(data["ord1"], data["ord2"])


@dataclass
class StageLog:
    points: list[tuple[int, int]] = field(default_factory=list)  # insertion gaps, in order
    ep_level: int = 0
    cores: dict[int, tuple[int, ...]] = field(default_factory=dict)
    seed: int | None = None

    def to_json(self) -> dict:
        return {
            "points": [list(p) for p in self.points],
            "ep_level": self.ep_level,
            "cores": {str(k): list(v) for k, v in sorted(self.cores.items())},
            "seed": self.seed,
        }


# --------------------------------------------------------------------------
# mutable stage used during growth


class _Stage:
    def __init__(self, rank1: Sequence[int] = (), rank2: Sequence[int] = ()):
        self.rank1 = list(rank1)
        self.rank2 = list(rank2)

    @property
    def n(self) -> int:
        return len(self.rank1)

    def insert(self, g1: int, g2: int) -> int:
        for r, g in ((self.rank1, g1), (self.rank2, g2)):
            for x in range(len(r)):
                if r[x] >= g:
                    r[x] += 1
        self.rank1.append(g1)
        self.rank2.append(g2)
        return self.n - 1

    def freeze(self) -> PermutationStructure:
        return PermutationStructure.from_ranks(self.rank1, self.rank2)


def _gap_range(ranks: list[int], i: int, n: int) -> tuple[int, int]:
    """Insertion gaps leaving exactly ``i`` of the sorted ``ranks`` below."""
    lo = ranks[i - 1] + 1 if i > 0 else 0
    hi = ranks[i] if i < len(ranks) else n
    return lo, hi


def _type_of(z: int, xs1: list[int], xs2: list[int], stage: _Stage) -> tuple[int, int]:
    return bisect.bisect(xs1, stage.rank1[z]), bisect.bisect(xs2, stage.rank2[z])


# --------------------------------------------------------------------------
# permutation embedding search


def find_permutation_embedding(
    pattern: PermutationStructure,
    stage: PermutationStructure | _Stage,
    pinned: dict[int, int] | None = None,
    node_limit: int = 5_000,
) -> tuple[int, ...] | None:
    """Map ``pattern`` into ``stage`` respecting both orders, honouring ``pinned``.

    Returns None when no embedding exists or ``node_limit`` search nodes are spent.
    """
    if isinstance(stage, PermutationStructure):
        stage = _Stage(stage.ord1.rank, stage.ord2.rank)
    pinned = dict(pinned or {})
    m = pattern.n
    p1, p2 = pattern.ord1.rank, pattern.ord2.rank
    s1, s2 = stage.rank1, stage.rank2
    for a, x in pinned.items():
        for b, y in pinned.items():
            if (p1[a] < p1[b]) != (s1[x] < s1[y]) or (p2[a] < p2[b]) != (s2[x] < s2[y]):
                return None
    if len(set(pinned.values())) != len(pinned):
        return None
    seq1 = sorted(range(stage.n), key=s1.__getitem__)
    image = dict(pinned)
    used = set(pinned.values())
    nodes = 0

    def candidates(a: int) -> list[int]:
        lo1, hi1, lo2, hi2 = -1, stage.n, -1, stage.n
        for b, y in image.items():
            if p1[b] < p1[a]:
                lo1 = max(lo1, s1[y])
            else:
                hi1 = min(hi1, s1[y])
            if p2[b] < p2[a]:
                lo2 = max(lo2, s2[y])
            else:
                hi2 = min(hi2, s2[y])
        return [z for z in seq1[lo1 + 1 : max(hi1, lo1 + 1)] if z not in used and lo2 < s2[z] < hi2]

    def rec(rest: frozenset) -> bool:
        nonlocal nodes
        if not rest:
            return True
        # most constrained point first; an empty candidate list prunes at once
        best = None
        for a in sorted(rest):
            cand = candidates(a)
            if best is None or len(cand) < len(best[1]):
                best = (a, cand)
                if not cand:
                    return False
        a, cand = best
        for z in cand:
            nodes += 1
            if nodes > node_limit:
                return False
            image[a] = z
            used.add(z)
            if rec(rest - {a}):
                return True
            del image[a]
            used.discard(z)
        return False

    if rec(frozenset(range(m)) - set(pinned)):
        return tuple(image[a] for a in range(m))
    return None


def all_permutations(k: int) -> list[PermutationStructure]:
    """Every permutation of ``0..k-1`` as a pattern with ``ord1`` the identity."""
    return [
        PermutationStructure(LinearOrder.identity(k), LinearOrder(p)) for p in itertools.permutations(range(k))
    ]


def _patterns(stage: _Stage, points: Sequence[int], k: int) -> set[tuple[int, ...]]:
    out = set()
    for combo in itertools.combinations(points, k):
        by1 = sorted(combo, key=stage.rank1.__getitem__)
        r2 = sorted(stage.rank2[x] for x in by1)
        out.add(tuple(r2.index(stage.rank2[x]) for x in by1))
    return out


def _choose_core(stage: _Stage, k: int) -> tuple[int, ...] | None:
    """Greedy set of points containing every permutation with ``k`` points."""
    core: list[int] = []
    for perm in all_permutations(k):
        if perm.ord2.rank in _patterns(stage, core, k):
            continue
        emb = find_permutation_embedding(perm, stage)
        if emb is None:
            return None
        core.extend(x for x in emb if x not in core)
    return tuple(sorted(core))


def _subsets(core: Sequence[int], k: int) -> Iterator[tuple[int, ...]]:
    for size in range(k):
        yield from itertools.combinations(core, size)


def _realized(stage: _Stage, X: tuple[int, ...]) -> set[tuple[int, int]]:
    xs1 = sorted(stage.rank1[x] for x in X)
    xs2 = sorted(stage.rank2[x] for x in X)
    inside = set(X)
    return {_type_of(z, xs1, xs2, stage) for z in range(stage.n) if z not in inside}


def missing_demands(p: PermutationStructure, k: int, core: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[int, int]]]:
    """Unrealized one-point extension demands of level ``k`` relative to ``core``.

    Also reports ``((), (-1, -1))`` when the core misses a ``k - 1`` point pattern.
    """
    stage = _Stage(p.ord1.rank, p.ord2.rank)
    out = []
    if k >= 1 and len(_patterns(stage, core, k - 1)) != len(list(itertools.permutations(range(k - 1)))):
        out.append(((), (-1, -1)))
    for X in _subsets(core, k):
        have = _realized(stage, X)
        for t in itertools.product(range(len(X) + 1), repeat=2):
            if t not in have:
                out.append((X, t))
    return out


def certify_ep(p: PermutationStructure, k: int, core: Sequence[int]) -> bool:
    return not missing_demands(p, k, core)


def build_generic_permutation(target_ep: int, max_points: int, seed: int = 0) -> tuple[PermutationStructure, StageLog]:
    """Grow a stage until the extension property is certified at ``target_ep``.

    Levels are saturated in turn. At each level a core is fixed, then the
    least unrealized demand (in subset-then-type order) is met by inserting a
    point at random gaps inside its allowed rectangle. Raises StageExhausted
    with the partial stage when more than ``max_points`` points are needed.
    """
    if target_ep < 1:
        raise ValueError("target_ep must be at least 1")
    rng = random.Random(seed)
    stage = _Stage()
    log = StageLog(seed=seed)
    for level in range(1, target_ep + 1):
        core = _choose_core(stage, level - 1)
        if core is None:  # unreachable once the previous level is certified
            raise StageExhausted(f"no core for level {level}", stage.freeze(), log)
        log.cores[level] = core
        subsets = list(_subsets(core, level))
        realized = {X: _realized(stage, X) for X in subsets}
        for X in subsets:
            for t in itertools.product(range(len(X) + 1), repeat=2):
                if t in realized[X]:
                    continue
                if stage.n >= max_points:
                    raise StageExhausted(
                        f"max_points={max_points} reached before level {level} was certified "
                        f"(certified level {log.ep_level})",
                        stage.freeze(),
                        log,
                    )
                xs1 = sorted(stage.rank1[x] for x in X)
                xs2 = sorted(stage.rank2[x] for x in X)
                g1 = rng.randint(*_gap_range(xs1, t[0], stage.n))
                g2 = rng.randint(*_gap_range(xs2, t[1], stage.n))
                z = stage.insert(g1, g2)
                log.points.append((g1, g2))
                for Y in subsets:
                    ys1 = sorted(stage.rank1[y] for y in Y)
                    ys2 = sorted(stage.rank2[y] for y in Y)
                    realized[Y].add(_type_of(z, ys1, ys2, stage))
        frozen = stage.freeze()
        # re-verify every level from scratch; growth never breaks a level but this is checked, not assumed
        certified = 0
        for j in range(1, level + 1):
            if not certify_ep(frozen, j, log.cores[j]):
                break
            certified = j
        log.ep_level = certified
        if certified < level:
            raise StageExhausted(f"level {level} failed verification", frozen, log)
    return stage.freeze(), log


# --------------------------------------------------------------------------
# reduct and age


def reduct_to_poset(p: PermutationStructure) -> FinitePoset:
    """``a <= b`` iff ``a`` is below ``b`` in both orders."""
    return FinitePoset.from_up_masks([p.ord1.up[x] & p.ord2.up[x] for x in range(p.n)])


def _universe(S, k: int) -> frozenset | None:
    """Codes of every ``k``-element structure the age could contain, when enumerable."""
    if k > bounds.bound("enumerate"):
        return None
    if isinstance(S, FinitePoset):
        return frozenset(canonical_form(Q) for Q in enumerate_upto_iso(ClassSpec("all-posets"), k))
    if as_structure(S).signature == PERMUTATION_SIGNATURE:
        return frozenset(canonical_form(Q) for Q in enumerate_upto_iso(ClassSpec("permutations"), k))
    return None


def _raw_key(S, subset: tuple[int, ...]):
    """Cheap labelled key for an induced substructure, used to memoize canonical forms."""
    if isinstance(S, FinitePoset):
        return tuple(tuple(S.leq[a][b] for b in subset) for a in subset)
    return as_structure(S).induced(subset)


def age_at(S, k: int, *, seed: int = 0, samples: int = 20_000, max_subsets: int = 3_000_000) -> frozenset:
    """Canonical codes of the ``k``-element induced substructures of ``S``.

    When there are more subsets than ``samples``, random subsets are drawn
    first; if they already cover every ``k``-element structure of the
    signature the answer is exact. Otherwise all subsets are scanned,
    refusing more than ``max_subsets``.
    """
    bounds.check("age", k, "age")
    n = S.n
    if k > n:
        return frozenset()
    if not isinstance(S, FinitePoset):
        S = as_structure(S)
    cache: dict = {}

    def code(subset):
        key = _raw_key(S, subset)
        if key not in cache:
            cache[key] = canonical_form(induced_substructure(S, subset))
        return cache[key]

    total = math.comb(n, k)
    universe = _universe(S, k) if total > samples else None
    if universe is not None:
        rng = random.Random(seed)
        found = set()
        for _ in range(samples):
            found.add(code(tuple(sorted(rng.sample(range(n), k)))))
            if len(found) == len(universe):
                return frozenset(found)
    if total > max_subsets:
        raise BoundExceeded(f"age subsets of size {k}", total, max_subsets)
    return frozenset(code(c) for c in itertools.combinations(range(n), k))


def age_upto(S, m: int, **kwargs) -> frozenset:
    """Canonical codes of all induced substructures with 1..m points."""
    if m > S.n:
        raise ValueError("m exceeds the structure size")
    out = set()
    for k in range(1, m + 1):
        out |= age_at(S, k, **kwargs)
    return frozenset(out)


# --------------------------------------------------------------------------
# weak injectivity


@dataclass
class Extension:
    h: EmbeddingMap
    tag: ProductTag
    orders: tuple[LinearOrder, LinearOrder]
    grown: int  # points added to the stage


@dataclass
class WeakInjectivity:
    """``e : A -> Abar`` and an extender closing triangles over ``f``.

    ``stage`` is replaced by a larger one whenever the extender grows it; old
    point indices stay valid.
    """

    A: FinitePoset
    f: EmbeddingMap
    stage: PermutationStructure
    abar: ProductPoset
    e: EmbeddingMap
    allow_growth: bool = True

    def extend(self, B: FinitePoset, g: EmbeddingMap) -> Extension:
        """``h : B -> reduct(stage)`` with ``h . g . e = f``."""
        require_embedding(g, self.abar.poset, B, "g")
        pair = two_dim_realizer(B)
        if pair is None:
            raise NotInClass("B has dimension > 2")
        M1, M2 = pair
        nb = B.n
        bprod = product_poset(nb, nb)
        ell = EmbeddingMap(tuple(bprod.index(M1.rank[b], M2.rank[b]) for b in range(nb)))
        tag = classify_product_embedding(g.then(ell), self.abar, bprod)
        if tag is ProductTag.LEX_TO_ALEX:
            M1, M2 = M2, M1
        pattern = PermutationStructure(M1, M2)
        pinned = {g[self.e[a]]: self.f[a] for a in range(self.A.n)}
        image = find_permutation_embedding(pattern, self.stage, pinned)
        grown = 0
        if image is None:
            if not self.allow_growth:
                raise StageTooSmall(
                    "stage has no copy of the required permutation over f",
                    required={"ord1": list(M1.rank), "ord2": list(M2.rank), "pinned": sorted(pinned.items())},
                )
            image, grown = self._grow(pattern, pinned)
        h = EmbeddingMap(image)
        if not is_embedding(h, B, reduct_to_poset(self.stage)):
            raise NotAnEmbedding("extender produced a non-embedding")
        if any(h[g[self.e[a]]] != self.f[a] for a in range(self.A.n)):
            raise NotAnEmbedding("extender output does not commute with f")
        return Extension(h, tag, (M1, M2), grown)

    def _grow(self, pattern: PermutationStructure, pinned: dict[int, int]) -> tuple[tuple[int, ...], int]:
        """Insert the unpinned points of ``pattern`` next to their pinned neighbours."""
        st = _Stage(self.stage.ord1.rank, self.stage.ord2.rank)
        image = dict(pinned)
        free = [a for a in range(pattern.n) if a not in pinned]
        for a in free:
            image[a] = st.n + free.index(a)
        seqs = []
        for prank, srank in ((pattern.ord1.rank, st.rank1), (pattern.ord2.rank, st.rank2)):
            seq = sorted(range(st.n), key=srank.__getitem__)
            by_pattern = sorted(range(pattern.n), key=prank.__getitem__)
            # walk the pattern; each free point goes right after the image of the pattern point below it
            anchor_pos = -1
            inserted_after: dict[int, list[int]] = {}
            for a in by_pattern:
                if a in pinned:
                    anchor_pos = seq.index(pinned[a])
                else:
                    inserted_after.setdefault(anchor_pos, []).append(image[a])
            out = list(inserted_after.get(-1, []))
            for pos, x in enumerate(seq):
                out.append(x)
                out.extend(inserted_after.get(pos, []))
            seqs.append(out)
        self.stage = PermutationStructure(LinearOrder.from_sequence(seqs[0]), LinearOrder.from_sequence(seqs[1]))
        return tuple(image[a] for a in range(pattern.n)), len(free)


def weak_injectivity_witness(
    A: FinitePoset, f: EmbeddingMap, stage: PermutationStructure, *, allow_growth: bool = True
) -> WeakInjectivity:
    """Pull the stage orders back through ``f``; ``Abar`` is the product of the two chains."""
    require_embedding(f, A, reduct_to_poset(stage), "f")
    n = A.n
    if n == 0:
        raise ValueError("A must be nonempty")
    L1 = stage.ord1.restrict(f.images)
    L2 = stage.ord2.restrict(f.images)
    if not is_realizer(A, [L1, L2]):
        raise NotInClass("A is not 2-dimensional")
    abar = product_poset(n, n)
    e = EmbeddingMap(tuple(abar.index(L1.rank[a], L2.rank[a]) for a in range(n)))
    return WeakInjectivity(A, f, stage, abar, e, allow_growth)
