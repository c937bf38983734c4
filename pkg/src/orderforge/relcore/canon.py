"""Canonical forms for finite relational structures.

The canonical labeling is the lexicographically least relabeled structure over
all bijections that respect an isomorphism-invariant ordered partition of the
domain (colour refinement). Because the partition is computed from the
structure alone, the minimum is taken over an isomorphism-invariant set of
labelings, so two structures get the same code exactly when they are
isomorphic.
"""

from __future__ import annotations

import itertools
import json
from math import factorial

from ..errors import BoundExceeded
from .structures import FinitePoset, RelationalStructure, as_structure

# Largest number of labelings tried before giving up (9! covers every 9-element cell).
LABELING_CAP = 362_880


def refine_colors(s: RelationalStructure, colors: list[int] | None = None) -> list[int]:
    """Stable colour refinement; colours are dense ranks with an invariant order."""
    n = s.n
    if colors is None:
        colors = [0] * n
    rels = s.relations
    while True:
        contrib: list[list] = [[] for _ in range(n)]
        for ri, tuples in enumerate(rels):
            for t in tuples:
                ct = tuple(colors[y] for y in t)
                for pos, x in enumerate(t):
                    contrib[x].append((ri, pos, ct))
        sigs = [(colors[x], tuple(sorted(contrib[x]))) for x in range(n)]
        distinct = sorted(set(sigs))
        index = {sig: i for i, sig in enumerate(distinct)}
        new = [index[sig] for sig in sigs]
        if len(distinct) == len(set(colors)):
            return new
        colors = new


def _labeling_key(n: int, rels, arities, lab) -> tuple:
    key = []
    for arity, tuples in zip(arities, rels):
        if arity == 1:
            key.append(sum(1 << lab[t[0]] for t in tuples))
        elif arity == 2:
            key.append(sum(1 << (lab[a] * n + lab[b]) for a, b in tuples))
        else:
            key.append(tuple(sorted(tuple(lab[x] for x in t) for t in tuples)))
    return tuple(key)


def canonical_labeling(obj) -> tuple[int, ...]:
    """A bijection ``x -> lab[x]`` carrying ``obj`` onto its canonical copy."""
    s = as_structure(obj)
    n = s.n
    if n == 0:
        return ()
    colors = refine_colors(s)
    cells: list[list[int]] = [[] for _ in range(max(colors) + 1)]
    for x, c in enumerate(colors):
        cells[c].append(x)
    total = 1
    for cell in cells:
        total *= factorial(len(cell))
    if total > LABELING_CAP:
        raise BoundExceeded("canonical_form labelings", total, LABELING_CAP)
    arities = [arity for _, arity in s.signature]
    offsets = list(itertools.accumulate([0] + [len(c) for c in cells[:-1]]))
    best_key = None
    best_lab = None
    lab = [0] * n
    for choice in itertools.product(*(itertools.permutations(c) for c in cells)):
        for off, perm in zip(offsets, choice):
            for i, x in enumerate(perm):
                lab[x] = off + i
        key = _labeling_key(n, s.relations, arities, lab)
        if best_key is None or key < best_key:
            best_key = key
            best_lab = tuple(lab)
    return best_lab


def canonical_structure(obj):
    """The canonical copy, of the same Python type as ``obj`` for posets."""
    lab = canonical_labeling(obj)
    if isinstance(obj, FinitePoset):
        return obj.relabel(lab)
    return as_structure(obj).relabel(lab)


def encode(s: RelationalStructure) -> bytes:
    payload = [
        s.n,
        [list(sig) for sig in s.signature],
        [sorted(list(t) for t in tuples) for tuples in s.relations],
        s.order,
    ]
    return json.dumps(payload, separators=(",", ":")).encode()


def canonical_form(obj) -> bytes:
    """Byte code equal for two structures iff they are isomorphic."""
    s = as_structure(obj)
    return encode(s.relabel(canonical_labeling(s)))


def is_isomorphic(x, y) -> bool:
    return canonical_form(x) == canonical_form(y)
