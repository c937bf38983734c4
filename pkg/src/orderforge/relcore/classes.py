"""Hereditary classes of finite structures and their enumeration up to isomorphism."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations
from pathlib import Path

from .. import bounds
from ..errors import InvalidStructure, NotInClass
from .canon import canonical_form, canonical_structure
from .structures import POSET_SIGNATURE, FinitePoset, RelationalStructure, as_structure, iter_bits

PERMUTATION_SIGNATURE: tuple[tuple[str, int], ...] = (("lt1", 2), ("lt2", 2))

CLASS_NAMES = ("all-posets", "posets-dim-le", "linear-orders", "permutations", "user-file")


def permutation_structure(rank1, rank2) -> RelationalStructure:
    """Two strict total orders given by rank sequences; ``lt1`` is the designated order."""
    n = len(rank1)
    lt1 = frozenset((a, b) for a in range(n) for b in range(n) if rank1[a] < rank1[b])
    lt2 = frozenset((a, b) for a in range(n) for b in range(n) if rank2[a] < rank2[b])
    return RelationalStructure(n, PERMUTATION_SIGNATURE, (lt1, lt2), "lt1")


def _is_strict_total(n: int, lt: frozenset) -> bool:
    for a in range(n):
        if (a, a) in lt:
            return False
        for b in range(a + 1, n):
            if ((a, b) in lt) == ((b, a) in lt):
                return False
    return all((a, c) in lt for a, b in lt for c in range(n) if (b, c) in lt)


@dataclass(frozen=True)
class ClassSpec:
    """Names a hereditary class: ``all-posets``, ``posets-dim-le(k)``,
    ``linear-orders``, ``permutations`` or ``user-file:<path>``."""

    name: str
    k: int | None = None
    path: str | None = None

    def __post_init__(self):
        if self.name not in CLASS_NAMES:
            raise ValueError(f"unknown class {self.name!r}")
        if self.name == "posets-dim-le" and (self.k is None or self.k < 1):
            raise ValueError("posets-dim-le needs k >= 1")
        if self.name == "user-file" and not self.path:
            raise ValueError("user-file class needs a path")

    @classmethod
    def parse(cls, text: str) -> "ClassSpec":
        text = text.strip()
        m = re.fullmatch(r"posets-dim-le[(:=]?(\d+)\)?", text)
        if m:
            return cls("posets-dim-le", k=int(m.group(1)))
        if text.startswith("user-file:"):
            return cls("user-file", path=text.split(":", 1)[1])
        return cls(text)

    def __str__(self) -> str:
        if self.name == "posets-dim-le":
            return f"posets-dim-le({self.k})"
        if self.name == "user-file":
            return f"user-file:{self.path}"
        return self.name

    @property
    def signature(self) -> tuple[tuple[str, int], ...]:
        if self.name == "permutations":
            return PERMUTATION_SIGNATURE
        if self.name == "user-file":
            return _load_user_file(self.path)[0]
        return POSET_SIGNATURE

    @property
    def is_poset_class(self) -> bool:
        return self.name in ("all-posets", "posets-dim-le", "linear-orders")

    def contains(self, obj) -> bool:
        if self.is_poset_class:
            if isinstance(obj, FinitePoset):
                P = obj
            else:
                s = as_structure(obj)
                if s.signature != POSET_SIGNATURE:
                    return False
                try:
                    P = FinitePoset.from_structure(s)
                except InvalidStructure:
                    return False
            if self.name == "all-posets":
                return True
            if self.name == "linear-orders":
                return P.is_chain()
            from ..dimension import dimension_at_most

            return dimension_at_most(P, self.k)
        s = as_structure(obj)
        if s.signature != self.signature:
            return False
        if self.name == "permutations":
            return all(_is_strict_total(s.n, rel) for rel in s.relations)
        _, by_size = _load_user_file(self.path)
        return canonical_form(s) in by_size.get(s.n, {})

    def members(self, n: int) -> list:
        return enumerate_upto_iso(self, n)


def _ideals(P: FinitePoset):
    n = P.n
    down = P.down
    for mask in range(1 << n):
        if all(down[x] & ~mask == 0 for x in iter_bits(mask)):
            yield mask


@lru_cache(maxsize=None)
def _all_posets(n: int) -> tuple[tuple[bytes, FinitePoset], ...]:
    if n == 0:
        P = FinitePoset.antichain(0)
        return ((canonical_form(P), P),)
    found: dict[bytes, FinitePoset] = {}
    for _, P in _all_posets(n - 1):
        for ideal in _ideals(P):
            top = n - 1
            up = [m | (1 << top) if ideal >> a & 1 else m for a, m in enumerate(P.up)]
            up.append(1 << top)
            Q = FinitePoset.from_up_masks(up)
            code = canonical_form(Q)
            if code not in found:
                found[code] = canonical_structure(Q)
    return tuple(sorted(found.items()))


@lru_cache(maxsize=None)
def _dim_le_posets(n: int, k: int) -> tuple[tuple[bytes, FinitePoset], ...]:
    from ..dimension import dimension_at_most

    return tuple((c, P) for c, P in _all_posets(n) if dimension_at_most(P, k))


@lru_cache(maxsize=None)
def _permutations(n: int) -> tuple[tuple[bytes, RelationalStructure], ...]:
    out = {}
    for perm in permutations(range(n)):
        s = permutation_structure(tuple(range(n)), perm)
        out[canonical_form(s)] = canonical_structure(s)
    return tuple(sorted(out.items()))


@lru_cache(maxsize=None)
def _load_user_file(path: str):
    """Parse ``{"signature": [...], "structures": [<structure json>, ...]}``."""
    from ..io import structure_from_json

    data = json.loads(Path(path).read_text())
    items = data["structures"] if isinstance(data, dict) else data
    structures = [structure_from_json(item) for item in items]
    if isinstance(data, dict) and "signature" in data:
        signature = tuple((d["name"], d["arity"]) for d in data["signature"])
    elif structures:
        signature = as_structure(structures[0]).signature
    else:
        raise InvalidStructure("user-file class lists no structures and no signature")
    by_size: dict[int, dict[bytes, RelationalStructure]] = {}
    for st in structures:
        s = as_structure(st)
        if s.signature != signature:
            raise InvalidStructure("user-file structures disagree on the signature")
        by_size.setdefault(s.n, {})[canonical_form(s)] = canonical_structure(s)
    return signature, by_size


def enumerate_upto_iso(cls: ClassSpec, n: int) -> list:
    """One canonical representative per isomorphism class of ``n``-element members,
    sorted by canonical code. Poset classes return ``FinitePoset`` objects."""
    if n < 0:
        raise ValueError("negative size")
    if cls.name == "linear-orders":
        return [FinitePoset.chain(n)]
    bounds.check("enumerate", n, f"enumerate {cls}")
    if cls.name == "all-posets":
        items = _all_posets(n)
    elif cls.name == "posets-dim-le":
        items = _dim_le_posets(n, cls.k)
    elif cls.name == "permutations":
        items = _permutations(n)
    else:
        items = tuple(sorted(_load_user_file(cls.path)[1].get(n, {}).items()))
    return [rep for _, rep in items]


def hereditary_violations(cls: ClassSpec, n: int) -> list[tuple[object, tuple[int, ...]]]:
    """Spot-check closure under induced substructures for members of size ``n``.

    Returns ``(member, subset)`` pairs whose induced substructure is not a member.
    """
    bad = []
    for member in enumerate_upto_iso(cls, n):
        for size in range(n):
            for subset in combinations(range(n), size):
                sub = induced_substructure(member, subset)
                if not cls.contains(sub):
                    bad.append((member, subset))
    return bad


def induced_substructure(S, subset):
    """Restriction to ``subset``, renumbered in increasing element order."""
    elements = sorted(set(subset))
    n = S.n
    for x in elements:
        if not (isinstance(x, int) and 0 <= x < n):
            raise InvalidStructure(f"element {x} not in domain 0..{n - 1}")
    if isinstance(S, FinitePoset):
        return S.restrict(elements)
    return as_structure(S).induced(elements)


def raise_unless_member(cls: ClassSpec, obj, what: str = "structure") -> None:
    if not cls.contains(obj):
        raise NotInClass(f"{what} is not a member of {cls}")
