"""Brute-force reference computations, written without the library.

Posets are boolean matrices ``m[a][b] == (a <= b)``; orders are rank tuples.
"""

from __future__ import annotations

import itertools


def is_poset_matrix(m) -> bool:
    n = len(m)
    for a in range(n):
        if not m[a][a]:
            return False
        for b in range(n):
            if a != b and m[a][b] and m[b][a]:
                return False
            for c in range(n):
                if m[a][b] and m[b][c] and not m[a][c]:
                    return False
    return True


def iso(m1, m2) -> bool:
    n = len(m1)
    if n != len(m2):
        return False
    for p in itertools.permutations(range(n)):
        if all(m1[a][b] == m2[p[a]][p[b]] for a in range(n) for b in range(n)):
            return True
    return False


def all_posets_naive(n: int) -> list:
    """Filter every reflexive 0/1 matrix, then keep one per isomorphism class."""
    off = [(a, b) for a in range(n) for b in range(n) if a != b]
    reps = []
    for bits in range(1 << len(off)):
        m = [[a == b for b in range(n)] for a in range(n)]
        for i, (a, b) in enumerate(off):
            if bits >> i & 1:
                m[a][b] = True
        if not is_poset_matrix(m):
            continue
        if not any(iso(m, r) for r in reps):
            reps.append(m)
    return reps


def all_orders(n: int) -> list[tuple[int, ...]]:
    return list(itertools.permutations(range(n)))


def extends(m, rank) -> bool:
    n = len(m)
    return all(rank[a] <= rank[b] for a in range(n) for b in range(n) if m[a][b])


def linear_extensions_naive(m) -> list[tuple[int, ...]]:
    return [r for r in all_orders(len(m)) if extends(m, r)]


def intersection_is(m, ranks) -> bool:
    n = len(m)
    return all(m[a][b] == all(r[a] <= r[b] for r in ranks) for a in range(n) for b in range(n))


def dimension_naive(m) -> int:
    n = len(m)
    if n == 0:
        return 0
    exts = linear_extensions_naive(m)
    for d in range(1, n + 1):
        for combo in itertools.combinations(exts, d):
            if intersection_is(m, combo):
                return d
    raise AssertionError("unreachable")


def realizer_pairs_naive(m) -> set[frozenset]:
    """All unordered pairs of linear orders (as rank tuples) intersecting to ``m``."""
    exts = linear_extensions_naive(m)
    out = set()
    for r1, r2 in itertools.combinations_with_replacement(exts, 2):
        if intersection_is(m, (r1, r2)):
            out.add(frozenset((r1, r2)))
    return out


def product_matrix(a: int, b: int):
    pts = [(i, j) for i in range(a) for j in range(b)]
    return [[p[0] <= q[0] and p[1] <= q[1] for q in pts] for p in pts], pts


def lex_alex_ranks(a: int, b: int):
    _, pts = product_matrix(a, b)
    lex = sorted(pts)
    alex = sorted(pts, key=lambda p: (p[1], p[0]))
    return tuple(lex.index(p) for p in pts), tuple(alex.index(p) for p in pts)


def product_embeddings_naive(src: tuple[int, int], dst: tuple[int, int]):
    """Yield ``(map, tag)`` for every poset embedding; tag is LexToLex, LexToAlex or None."""
    ms, ps = product_matrix(*src)
    md, pd = product_matrix(*dst)
    lex_s, alex_s = lex_alex_ranks(*src)
    lex_d, alex_d = lex_alex_ranks(*dst)
    ns = len(ps)
    for f in itertools.permutations(range(len(pd)), ns):
        if not all(ms[x][y] == md[f[x]][f[y]] for x in range(ns) for y in range(ns)):
            continue

        def respects(o1, o2) -> bool:
            return all(
                (lex_s[x] < lex_s[y]) == (o1[f[x]] < o1[f[y]]) and (alex_s[x] < alex_s[y]) == (o2[f[x]] < o2[f[y]])
                for x in range(ns)
                for y in range(ns)
            )

        if respects(lex_d, alex_d):
            tag = "LexToLex"
        elif respects(alex_d, lex_d):
            tag = "LexToAlex"
        else:
            tag = None
        yield f, tag


def permutation_patterns_naive(r1, r2, k: int) -> set[tuple[int, ...]]:
    """Patterns of size ``k``: second-order ranks listed in first-order sequence."""
    n = len(r1)
    out = set()
    for combo in itertools.combinations(range(n), k):
        by1 = sorted(combo, key=lambda x: r1[x])
        vals = sorted(r2[x] for x in by1)
        out.add(tuple(vals.index(r2[x]) for x in by1))
    return out
