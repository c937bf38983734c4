"""Finite relational structures, posets, linear orders and embedding maps.

All types are immutable. Elements of an ``n``-element structure are the
integers ``0..n-1``. Posets are stored reflexively as a boolean matrix and
mirrored as bitmasks (``up[a]`` has bit ``b`` set iff ``a <= b``) for the
search routines.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from ..errors import DomainMismatch, InvalidStructure

POSET_SIGNATURE: tuple[tuple[str, int], ...] = (("leq", 2),)


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class LinearOrder:
    """A total order on ``0..n-1`` given by the position ``rank[x]`` of each element."""

    rank: tuple[int, ...]

    def __post_init__(self):
        rank = tuple(self.rank)
        object.__setattr__(self, "rank", rank)
        if sorted(rank) != list(range(len(rank))):
            raise InvalidStructure(f"rank {rank} is not a bijection onto 0..{len(rank) - 1}")

    @classmethod
    def from_sequence(cls, seq: Sequence[int]) -> "LinearOrder":
        """Build the order listing ``seq`` from bottom to top."""
        rank = [0] * len(seq)
        if sorted(seq) != list(range(len(seq))):
            raise InvalidStructure(f"sequence {tuple(seq)} is not a permutation")
        for pos, x in enumerate(seq):
            rank[x] = pos
        return cls(tuple(rank))

    @classmethod
    def identity(cls, n: int) -> "LinearOrder":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.rank)

    @cached_property
    def sequence(self) -> tuple[int, ...]:
        seq = [0] * len(self.rank)
        for x, r in enumerate(self.rank):
            seq[r] = x
        return tuple(seq)

    def leq(self, a: int, b: int) -> bool:
        return self.rank[a] <= self.rank[b]

    @cached_property
    def up(self) -> tuple[int, ...]:
        seq = self.sequence
        n = len(seq)
        out = [0] * n
        mask = 0
        for pos in range(n - 1, -1, -1):
            mask |= 1 << seq[pos]
            out[seq[pos]] = mask
        return tuple(out)

    def as_poset(self) -> "FinitePoset":
        return FinitePoset.from_up_masks(self.up)

    def restrict(self, elements: Sequence[int]) -> "LinearOrder":
        """The induced order on ``elements``, renumbered in the given listing order."""
        ranks = [self.rank[x] for x in elements]
        order = sorted(range(len(elements)), key=ranks.__getitem__)
        return LinearOrder.from_sequence(order)

    def __str__(self) -> str:
        return "<".join(map(str, self.sequence))


@dataclass(frozen=True)
class FinitePoset:
    """A reflexive partial order; ``leq[a][b]`` means ``a <= b``."""

    leq: tuple[tuple[bool, ...], ...]

    def __post_init__(self):
        leq = tuple(tuple(bool(v) for v in row) for row in self.leq)
        object.__setattr__(self, "leq", leq)
        n = len(leq)
        for row in leq:
            if len(row) != n:
                raise InvalidStructure("leq must be a square matrix")
        for a in range(n):
            if not leq[a][a]:
                raise InvalidStructure(f"not reflexive at {a}")
            for b in range(n):
                if a != b and leq[a][b] and leq[b][a]:
                    raise InvalidStructure(f"not antisymmetric: {a} and {b}")
                if leq[a][b]:
                    for c in range(n):
                        if leq[b][c] and not leq[a][c]:
                            raise InvalidStructure(f"not transitive: {a}<={b}<={c} but not {a}<={c}")

    # construction ---------------------------------------------------------

    @classmethod
    def from_up_masks(cls, up: Sequence[int]) -> "FinitePoset":
        """Trusted constructor from bitmasks; callers guarantee the axioms."""
        n = len(up)
        obj = object.__new__(cls)
        leq = tuple(tuple(bool(up[a] >> b & 1) for b in range(n)) for a in range(n))
        object.__setattr__(obj, "leq", leq)
        obj.__dict__["up"] = tuple(up)
        return obj

    @classmethod
    def from_relation(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "FinitePoset":
        """Reflexive-transitive closure of ``pairs``; raises if a cycle appears."""
        up = [1 << a for a in range(n)]
        for a, b in pairs:
            if not (0 <= a < n and 0 <= b < n):
                raise InvalidStructure(f"pair {(a, b)} out of range")
            up[a] |= 1 << b
        changed = True
        while changed:
            changed = False
            for a in range(n):
                acc = up[a]
                for b in iter_bits(up[a]):
                    acc |= up[b]
                if acc != up[a]:
                    up[a] = acc
                    changed = True
        for a in range(n):
            for b in iter_bits(up[a] & ~(1 << a)):
                if up[b] >> a & 1:
                    raise InvalidStructure(f"relation has a cycle through {a} and {b}")
        return cls.from_up_masks(up)

    @classmethod
    def chain(cls, n: int) -> "FinitePoset":
        return cls.from_up_masks([((1 << n) - 1) & ~((1 << a) - 1) for a in range(n)])

    @classmethod
    def antichain(cls, n: int) -> "FinitePoset":
        return cls.from_up_masks([1 << a for a in range(n)])

    # views ----------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.leq)

    @cached_property
    def up(self) -> tuple[int, ...]:
        n = self.n
        return tuple(sum(1 << b for b in range(n) if self.leq[a][b]) for a in range(n))

    @cached_property
    def down(self) -> tuple[int, ...]:
        n = self.n
        out = [0] * n
        for a in range(n):
            for b in iter_bits(self.up[a]):
                out[b] |= 1 << a
        return tuple(out)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.leq[a][b]

    def comparable(self, a: int, b: int) -> bool:
        return self.leq[a][b] or self.leq[b][a]

    def incomparable_pairs(self) -> list[tuple[int, int]]:
        """Unordered incomparable pairs ``(a, b)`` with ``a < b`` as integers."""
        n = self.n
        return [(a, b) for a in range(n) for b in range(a + 1, n) if not self.comparable(a, b)]

    def is_chain(self) -> bool:
        return not self.incomparable_pairs()

    def strict_pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(self.n) for b in iter_bits(self.up[a]) if a != b]

    def relation_count(self) -> int:
        return sum(bin(m).count("1") for m in self.up)

    def covers(self) -> list[tuple[int, int]]:
        """Pairs ``(a, b)`` where ``b`` covers ``a``."""
        out = []
        for a, b in self.strict_pairs():
            between = (self.up[a] & self.down[b]) & ~((1 << a) | (1 << b))
            if not between:
                out.append((a, b))
        return out

    def minimal_elements(self) -> list[int]:
        return [a for a in range(self.n) if self.down[a] == 1 << a]

    def maximal_elements(self) -> list[int]:
        return [a for a in range(self.n) if self.up[a] == 1 << a]

    def restrict(self, elements: Sequence[int]) -> "FinitePoset":
        """Induced subposet on ``elements``, renumbered in the given listing order."""
        idx = list(elements)
        up = []
        for a in idx:
            m = 0
            for j, b in enumerate(idx):
                if self.up[a] >> b & 1:
                    m |= 1 << j
            up.append(m)
        return FinitePoset.from_up_masks(up)

    def relabel(self, perm: Sequence[int]) -> "FinitePoset":
        """Image under the bijection ``x -> perm[x]``."""
        n = self.n
        up = [0] * n
        for a in range(n):
            m = 0
            for b in iter_bits(self.up[a]):
                m |= 1 << perm[b]
            up[perm[a]] = m
        return FinitePoset.from_up_masks(up)

    def dual(self) -> "FinitePoset":
        return FinitePoset.from_up_masks(self.down)

    def to_structure(self) -> "RelationalStructure":
        pairs = frozenset((a, b) for a in range(self.n) for b in iter_bits(self.up[a]))
        return RelationalStructure(self.n, POSET_SIGNATURE, (pairs,), None)

    @classmethod
    def from_structure(cls, s: "RelationalStructure") -> "FinitePoset":
        if s.signature != POSET_SIGNATURE:
            raise InvalidStructure(f"not a poset signature: {s.signature}")
        leq = [[False] * s.n for _ in range(s.n)]
        for a, b in s.relations[0]:
            leq[a][b] = True
        return cls(tuple(map(tuple, leq)))

    def __repr__(self) -> str:
        return f"FinitePoset(n={self.n}, strict={self.strict_pairs()})"


@dataclass(frozen=True)
class RelationalStructure:
    """A finite structure over a relational signature.

    ``order`` names a relation that must be a strict total order, or is None.
    """

    n: int
    signature: tuple[tuple[str, int], ...]
    relations: tuple[frozenset, ...]
    order: str | None = None

    def __post_init__(self):
        sig = tuple((str(name), int(arity)) for name, arity in self.signature)
        rels = tuple(frozenset(tuple(t) for t in r) for r in self.relations)
        object.__setattr__(self, "signature", sig)
        object.__setattr__(self, "relations", rels)
        if self.n < 0:
            raise InvalidStructure("negative domain size")
        if len(rels) != len(sig):
            raise InvalidStructure("one tuple set per relation symbol is required")
        if len({name for name, _ in sig}) != len(sig):
            raise InvalidStructure("duplicate relation names")
        for (name, arity), tuples in zip(sig, rels):
            for t in tuples:
                if len(t) != arity:
                    raise InvalidStructure(f"{name}: tuple {t} does not have arity {arity}")
                if any(not (isinstance(x, int) and 0 <= x < self.n) for x in t):
                    raise InvalidStructure(f"{name}: tuple {t} out of range")
        if self.order is not None:
            names = [name for name, _ in sig]
            if self.order not in names:
                raise InvalidStructure(f"designated order {self.order!r} not in signature")
            i = names.index(self.order)
            if sig[i][1] != 2:
                raise InvalidStructure("designated order must be binary")
            lt = rels[i]
            for a in range(self.n):
                if (a, a) in lt:
                    raise InvalidStructure(f"designated order is not irreflexive at {a}")
                for b in range(a + 1, self.n):
                    if ((a, b) in lt) == ((b, a) in lt):
                        raise InvalidStructure(f"designated order does not order {a}, {b} strictly")
            for a, b in lt:
                for c in range(self.n):
                    if (b, c) in lt and (a, c) not in lt:
                        raise InvalidStructure("designated order is not transitive")

    def relation(self, name: str) -> frozenset:
        for (rname, _), tuples in zip(self.signature, self.relations):
            if rname == name:
                return tuples
        raise KeyError(name)

    @property
    def order_index(self) -> int | None:
        if self.order is None:
            return None
        return [name for name, _ in self.signature].index(self.order)

    def order_rank(self) -> tuple[int, ...]:
        """Rank of each element in the designated order."""
        if self.order is None:
            raise InvalidStructure("structure has no designated order")
        lt = self.relation(self.order)
        below = [0] * self.n
        for _, b in lt:
            below[b] += 1
        return tuple(below)

    def induced(self, elements: Sequence[int]) -> "RelationalStructure":
        """Induced substructure, renumbered in the given listing order."""
        pos = {x: i for i, x in enumerate(elements)}
        rels = tuple(
            frozenset(tuple(pos[x] for x in t) for t in tuples if all(x in pos for x in t))
            for tuples in self.relations
        )
        return RelationalStructure(len(pos), self.signature, rels, self.order)

    def relabel(self, perm: Sequence[int]) -> "RelationalStructure":
        rels = tuple(frozenset(tuple(perm[x] for x in t) for t in tuples) for tuples in self.relations)
        return RelationalStructure(self.n, self.signature, rels, self.order)

    def is_poset(self) -> bool:
        return self.signature == POSET_SIGNATURE


@dataclass(frozen=True)
class EmbeddingMap:
    """An injective map ``x -> images[x]`` from a source domain into a target domain."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(set(images)) != len(images):
            raise InvalidStructure(f"map {images} is not injective")

    @classmethod
    def identity(cls, n: int) -> "EmbeddingMap":
        return cls(tuple(range(n)))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __getitem__(self, x: int) -> int:
        return self.images[x]

    def __len__(self) -> int:
        return len(self.images)

    def __iter__(self):
        return iter(self.images)

    def then(self, other: "EmbeddingMap") -> "EmbeddingMap":
        """Composition ``other o self``."""
        return EmbeddingMap(tuple(other.images[y] for y in self.images))


def as_structure(obj) -> RelationalStructure:
    if isinstance(obj, RelationalStructure):
        return obj
    if isinstance(obj, FinitePoset):
        return obj.to_structure()
    if isinstance(obj, LinearOrder):
        return obj.as_poset().to_structure()
    if hasattr(obj, "to_structure"):
        return obj.to_structure()
    raise TypeError(f"cannot view {type(obj).__name__} as a relational structure")


def check_same_domain(n: int, orders: Iterable[LinearOrder]) -> None:
    for o in orders:
        if o.n != n:
            raise DomainMismatch(f"order on {o.n} elements, expected {n}")


def empty_like(s: RelationalStructure) -> RelationalStructure:
    return RelationalStructure(0, s.signature, tuple(frozenset() for _ in s.signature), s.order)


__all__ = [
    "POSET_SIGNATURE",
    "LinearOrder",
    "FinitePoset",
    "RelationalStructure",
    "EmbeddingMap",
    "as_structure",
    "check_same_domain",
    "empty_like",
    "iter_bits",
]
