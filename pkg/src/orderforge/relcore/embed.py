"""Embedding search: injective maps that preserve and reflect every relation."""

from __future__ import annotations

import itertools
from typing import Iterator, Mapping

from ..errors import NotAnEmbedding, SignatureMismatch
from .structures import EmbeddingMap, FinitePoset, RelationalStructure, as_structure, iter_bits


def _poset_embeddings(P: FinitePoset, Q: FinitePoset, fixed: Mapping[int, int]) -> Iterator[tuple[int, ...]]:
    n, m = P.n, Q.n
    full = (1 << m) - 1
    Pup, Pdown, Qup, Qdown = P.up, P.down, Q.up, Q.down
    order = sorted(range(n), key=lambda x: (x not in fixed, x))
    img = [-1] * n

    def rec(k: int, used: int):
        if k == n:
            yield tuple(img)
            return
        x = order[k]
        cand = full & ~used
        for j in order[:k]:
            y = img[j]
            cand &= Qdown[y] if Pup[x] >> j & 1 else ~Qdown[y]
            cand &= Qup[y] if Pdown[x] >> j & 1 else ~Qup[y]
            if not cand:
                return
        if x in fixed:
            cand &= 1 << fixed[x]
        for t in iter_bits(cand):
            img[x] = t
            yield from rec(k + 1, used | 1 << t)
        img[x] = -1

    yield from rec(0, 0)


def _structure_embeddings(S: RelationalStructure, T: RelationalStructure, fixed: Mapping[int, int]):
    n, m = S.n, T.n
    arities = [a for _, a in S.signature]
    for arity, srel, trel in zip(arities, S.relations, T.relations):
        if arity == 0 and bool(srel) != bool(trel):
            return
    order = sorted(range(n), key=lambda x: (x not in fixed, x))
    img = [-1] * n

    def consistent(k: int) -> bool:
        placed = order[: k + 1]
        x = order[k]
        for arity, srel, trel in zip(arities, S.relations, T.relations):
            if arity == 0:
                continue
            for t in itertools.product(placed, repeat=arity):
                if x not in t:
                    continue
                if (t in srel) != (tuple(img[y] for y in t) in trel):
                    return False
        return True

    def rec(k: int, used: set):
        if k == n:
            yield tuple(img)
            return
        x = order[k]
        targets = [fixed[x]] if x in fixed else range(m)
        for t in targets:
            if t in used:
                continue
            img[x] = t
            if consistent(k):
                used.add(t)
                yield from rec(k + 1, used)
                used.discard(t)
        img[x] = -1

    yield from rec(0, set())


def iter_embeddings(S, T, fixed: Mapping[int, int] | None = None) -> Iterator[EmbeddingMap]:
    """Lazily yield embeddings ``S -> T``; ``fixed`` pins some source elements to given targets."""
    fixed = dict(fixed or {})
    if isinstance(S, FinitePoset) and isinstance(T, FinitePoset):
        gen = _poset_embeddings(S, T, fixed)
    else:
        s, t = as_structure(S), as_structure(T)
        if s.signature != t.signature:
            raise SignatureMismatch(f"{s.signature} vs {t.signature}")
        if s.is_poset() and t.is_poset():
            gen = _poset_embeddings(FinitePoset.from_structure(s), FinitePoset.from_structure(t), fixed)
        else:
            gen = _structure_embeddings(s, t, fixed)
    return (EmbeddingMap(images) for images in gen)


def find_embeddings(S, T, limit: int | None = None, fixed: Mapping[int, int] | None = None) -> list[EmbeddingMap]:
    """All embeddings ``S -> T`` (at most ``limit``), sorted by image tuple."""
    gen = iter_embeddings(S, T, fixed)
    if limit is not None and limit <= 0:
        return []
    out = list(itertools.islice(gen, limit))
    out.sort(key=lambda f: f.images)
    return out


def is_embedding(f: EmbeddingMap, S, T) -> bool:
    """Direct check that ``f`` is injective and preserves and reflects every relation."""
    if isinstance(S, FinitePoset) and isinstance(T, FinitePoset):
        images = tuple(f)
        if len(images) != S.n or len(set(images)) != S.n or any(not 0 <= y < T.n for y in images):
            return False
        return all(
            bool(S.up[a] >> b & 1) == bool(T.up[images[a]] >> images[b] & 1)
            for a in range(S.n)
            for b in range(S.n)
        )
    s, t = as_structure(S), as_structure(T)
    if s.signature != t.signature:
        raise SignatureMismatch(f"{s.signature} vs {t.signature}")
    images = tuple(f)
    if len(images) != s.n or len(set(images)) != s.n or any(not 0 <= y < t.n for y in images):
        return False
    for (_, arity), srel, trel in zip(s.signature, s.relations, t.relations):
        for tup in itertools.product(range(s.n), repeat=arity):
            if (tup in srel) != (tuple(images[x] for x in tup) in trel):
                return False
    return True


def require_embedding(f: EmbeddingMap, S, T, what: str = "map") -> None:
    if not is_embedding(f, S, T):
        raise NotAnEmbedding(f"{what} {tuple(f)} is not an embedding")


def automorphisms(S) -> list[EmbeddingMap]:
    return find_embeddings(S, S)
