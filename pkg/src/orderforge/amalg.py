"""Amalgamation machinery: span completion search, AP/JEP scans over enumerable
classes, the crown counterexample for posets of dimension at most 2, and
bounded certification of weak amalgamation.

An amalgam of a span ``B <-f- A -g-> C`` is searched on the vertex set
``B`` followed by the points of ``C`` outside ``g(A)``. Points of ``C`` may also
be identified with points of ``B`` (non-strong amalgams) and ``max_extra``
fresh points may be added. Any amalgam restricts to the union of the images
of ``B`` and ``C``, which is one of the vertex sets scanned at
``max_extra = 0``; for hereditary classes that setting is therefore complete
for proving that no amalgam exists.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from . import bounds as _bounds
from .dimension import is_realizer, two_dim_realizer
from .errors import BoundExceeded, NotInClass, SignatureMismatch
from .products import ProductPoset, ProductTag, classify_product_embedding, product_poset
from .relcore.canon import canonical_form
from .relcore.classes import ClassSpec, enumerate_upto_iso
from .relcore.embed import automorphisms, find_embeddings, is_embedding, require_embedding
from .relcore.structures import (
    EmbeddingMap,
    FinitePoset,
    LinearOrder,
    RelationalStructure,
    as_structure,
    iter_bits,
)


# Generic (non-poset) search enumerates subsets of the free tuples; cap them.
FREE_TUPLE_CAP = 20

CROWN_SPAN_NOTE = (
    "reconstructed span: A = antichain x1,x2,x3; B = crown(3) minus y3; "
    "C = A plus y3 above x1 and x2"
)


@dataclass(frozen=True)
class Span:
    """``B <-f- A -g-> C`` with both legs embeddings."""

    A: object
    B: object
    C: object
    f: EmbeddingMap
    g: EmbeddingMap

    def __post_init__(self):
        sigs = {as_structure(x).signature for x in (self.A, self.B, self.C)}
        if len(sigs) != 1:
            raise SignatureMismatch("span members use different signatures")
        require_embedding(self.f, self.A, self.B, "f")
        require_embedding(self.g, self.A, self.C, "g")

    @property
    def pushout_size(self) -> int:
        return self.B.n + self.C.n - self.A.n

    def swapped(self) -> "Span":
        return Span(self.A, self.C, self.B, self.g, self.f)


@dataclass(frozen=True)
class Completion:
    """An amalgam ``D`` with ``f' : B -> D`` and ``g' : C -> D``."""

    D: object
    f_prime: EmbeddingMap
    g_prime: EmbeddingMap

    def commutes(self, span: Span, over: Sequence[int] | None = None) -> bool:
        points = range(span.A.n) if over is None else over
        return all(self.f_prime[span.f[a]] == self.g_prime[span.g[a]] for a in points)

    def is_valid_for(self, span: Span) -> bool:
        return (
            is_embedding(self.f_prime, span.B, self.D)
            and is_embedding(self.g_prime, span.C, self.D)
            and self.commutes(span)
        )


@dataclass(frozen=True)
class AmalgamReport:
    span: Span
    completion: Completion | None
    searched_within: ClassSpec
    exhaustive: bool
    max_extra: int = 0
    amalgams: tuple[Completion, ...] = ()
    rejected: tuple[Completion, ...] = field(default=(), repr=False)

    @property
    def completes(self) -> bool:
        return self.completion is not None


# --------------------------------------------------------------------------
# vertex layouts


@dataclass
class _Layout:
    size: int
    g_prime: tuple[int, ...]
    img_b: frozenset
    img_c: frozenset


def _layouts(span: Span, max_extra: int, allow_identification: bool) -> Iterator[_Layout]:
    """Vertex sets for candidate amalgams: matchings of new C points onto B points."""
    nb, nc = span.B.n, span.C.n
    a_of_c = {span.g[a]: span.f[a] for a in range(span.A.n)}
    new_c = [c for c in range(nc) if c not in a_of_c]
    new_b = [b for b in range(nb) if b not in set(span.f.images)]
    max_match = min(len(new_c), len(new_b)) if allow_identification else 0
    for extra in range(max_extra + 1):
        for m in range(max_match + 1):
            for cs in itertools.combinations(new_c, m):
                for bs in itertools.permutations(new_b, m):
                    match = dict(zip(cs, bs))
                    g_prime = []
                    nxt = nb
                    for c in range(nc):
                        if c in a_of_c:
                            g_prime.append(a_of_c[c])
                        elif c in match:
                            g_prime.append(match[c])
                        else:
                            g_prime.append(nxt)
                            nxt += 1
                    yield _Layout(nxt + extra, tuple(g_prime), frozenset(range(nb)), frozenset(g_prime))


# --------------------------------------------------------------------------
# poset amalgams


def _poset_amalgams(B: FinitePoset, C: FinitePoset, lay: _Layout) -> Iterator[FinitePoset]:
    N = lay.size
    le: list[list[bool | None]] = [[None] * N for _ in range(N)]
    for x in range(N):
        le[x][x] = True
    for x in range(B.n):
        for y in range(B.n):
            le[x][y] = bool(B.up[x] >> y & 1)
    gp = lay.g_prime
    for x in range(C.n):
        for y in range(C.n):
            val = bool(C.up[x] >> y & 1)
            cur = le[gp[x]][gp[y]]
            if cur is not None and cur != val:
                return
            le[gp[x]][gp[y]] = val
    # known part must already be transitive where fully decided
    for x in range(N):
        for y in range(N):
            if le[x][y]:
                for z in range(N):
                    if le[y][z] and le[x][z] is False:
                        return
    free = [(x, y) for x in range(N) for y in range(x + 1, N) if le[x][y] is None]

    def ok(x: int, y: int) -> bool:
        for p, q in ((x, y), (y, x)):
            if le[p][q]:
                for z in range(N):
                    if le[q][z] and le[p][z] is False:
                        return False
                    if le[z][p] and le[z][q] is False:
                        return False
            else:
                for z in range(N):
                    if le[p][z] and le[z][q]:
                        return False
        return True

    def rec(i: int):
        if i == len(free):
            yield FinitePoset.from_up_masks([sum(1 << y for y in range(N) if le[x][y]) for x in range(N)])
            return
        x, y = free[i]
        # incomparable first, so the free amalgam is met early
        for a, b in ((False, False), (True, False), (False, True)):
            le[x][y], le[y][x] = a, b
            if ok(x, y):
                yield from rec(i + 1)
        le[x][y] = le[y][x] = None

    yield from rec(0)


# --------------------------------------------------------------------------
# generic amalgams


def _structure_amalgams(B: RelationalStructure, C: RelationalStructure, lay: _Layout):
    N = lay.size
    gp = lay.g_prime
    known = []
    free = []
    for (_, arity), brel, crel in zip(B.signature, B.relations, C.relations):
        rel = set(brel)
        mapped = {tuple(gp[x] for x in t) for t in crel}
        # C's tuples must agree with B's inside the overlap of the two images
        inv = {d: c for c, d in enumerate(gp)}
        for t in itertools.product(sorted(lay.img_b & lay.img_c), repeat=arity):
            if (t in rel) != (tuple(inv[x] for x in t) in crel):
                return
        rel |= mapped
        known.append(rel)
        free.append(
            [
                t
                for t in itertools.product(range(N), repeat=arity)
                if not all(x in lay.img_b for x in t) and not all(x in lay.img_c for x in t)
            ]
        )
    total = sum(len(fr) for fr in free)
    if total > FREE_TUPLE_CAP:
        raise BoundExceeded("amalgam free tuples", total, FREE_TUPLE_CAP)
    flat = [(ri, t) for ri, fr in enumerate(free) for t in fr]
    for bits in range(1 << len(flat)):
        rels = [set(k) for k in known]
        for i in iter_bits(bits):
            ri, t = flat[i]
            rels[ri].add(t)
        try:
            yield RelationalStructure(N, B.signature, tuple(rels), B.order)
        except Exception:
            # the designated order may fail to be total on this candidate
            continue


def complete_span(
    span: Span,
    cls: ClassSpec,
    max_extra: int = 0,
    *,
    collect_all: bool = False,
    allow_identification: bool = True,
) -> AmalgamReport:
    """Search for ``D`` in ``cls`` completing the span to a commuting square."""
    B, C = span.B, span.C
    if as_structure(B).signature != cls.signature:
        raise SignatureMismatch(f"span signature differs from that of {cls}")
    _bounds.check("amalgam", span.pushout_size + max_extra, "complete_span")
    poset_path = isinstance(B, FinitePoset) and isinstance(C, FinitePoset)
    found: list[Completion] = []
    rejected: list[Completion] = []
    f_prime = EmbeddingMap.identity(B.n)
    for lay in _layouts(span, max_extra, allow_identification):
        if poset_path:
            candidates = _poset_amalgams(B, C, lay)
        else:
            candidates = _structure_amalgams(as_structure(B), as_structure(C), lay)
        for D in candidates:
            comp = Completion(D, f_prime, EmbeddingMap(lay.g_prime))
            if cls.contains(D):
                found.append(comp)
                if not collect_all:
                    return AmalgamReport(span, comp, cls, False, max_extra, tuple(found), tuple(rejected))
            elif collect_all:
                rejected.append(comp)
    return AmalgamReport(span, found[0] if found else None, cls, True, max_extra, tuple(found), tuple(rejected))


# --------------------------------------------------------------------------
# scans over a class


def span_key(span: Span) -> bytes:
    """Isomorphism-invariant code of a span (automorphisms of A, B and C included)."""

    def encode(s: Span) -> bytes:
        Bs, Cs = as_structure(s.B), as_structure(s.C)
        lay = next(_layouts(s, 0, False))
        gp = lay.g_prime
        sig = []
        rels = []
        for (name, arity), brel, crel in zip(Bs.signature, Bs.relations, Cs.relations):
            sig.append(("B." + name, arity))
            rels.append(frozenset(brel))
            sig.append(("C." + name, arity))
            rels.append(frozenset(tuple(gp[x] for x in t) for t in crel))
        sig += [("inB", 1), ("inC", 1)]
        rels += [frozenset((x,) for x in lay.img_b), frozenset((x,) for x in lay.img_c)]
        return canonical_form(RelationalStructure(lay.size, tuple(sig), tuple(rels)))

    return min(encode(span), encode(span.swapped()))


def embedding_orbit_reps(A, B) -> list[EmbeddingMap]:
    """Embeddings ``A -> B`` up to post-composition with automorphisms of ``B``."""
    autos = automorphisms(B)
    reps = []
    for f in find_embeddings(A, B):
        if all(tuple(sigma[y] for y in f) >= f.images for sigma in autos):
            reps.append(f)
    return reps


def iter_spans(cls: ClassSpec, n: int, bases: Iterable | None = None) -> Iterator[Span]:
    """Non-trivial spans with all parts of size <= n, one per isomorphism type."""
    seen = set()
    if bases is None:
        bases = [A for k in range(1, n) for A in enumerate_upto_iso(cls, k)]
    for A in bases:
        legs = []
        for size in range(A.n + 1, n + 1):
            for B in enumerate_upto_iso(cls, size):
                for f in embedding_orbit_reps(A, B):
                    legs.append((B, f))
        for i, (B, f) in enumerate(legs):
            for C, g in legs[i:]:
                span = Span(A, B, C, f, g)
                key = span_key(span)
                if key in seen:
                    continue
                seen.add(key)
                yield span


def has_AP_upto(
    cls: ClassSpec,
    n: int,
    *,
    bases: Iterable | None = None,
    max_extra: int = 0,
    limit: int | None = None,
) -> list[Span]:
    """Spans with parts of size <= n that do not complete inside ``cls``.

    Returns the failures of least pushout size (empty when AP holds up to n).
    Spans with an isomorphic leg always complete and are skipped.
    """
    _bounds.check("span", n, "has_AP_upto", limit)
    failures = []
    for span in iter_spans(cls, n, bases):
        report = complete_span(span, cls, max_extra)
        if report.completion is None:
            failures.append(span)
    if not failures:
        return []
    least = min(s.pushout_size for s in failures)
    return [s for s in failures if s.pushout_size == least]


def has_JEP_upto(cls: ClassSpec, n: int, *, limit: int | None = None) -> bool:
    """Every pair of members with at most n points embeds into a common member."""
    _bounds.check("span", n, "has_JEP_upto", limit)
    members = [X for k in range(1, n + 1) for X in enumerate_upto_iso(cls, k)]
    empty = _empty_member(cls)
    none = EmbeddingMap(())
    for i, X in enumerate(members):
        for Y in members[i:]:
            if complete_span(Span(empty, X, Y, none, none), cls).completion is None:
                return False
    return True


def _empty_member(cls: ClassSpec):
    members = enumerate_upto_iso(cls, 0)
    if members:
        return members[0]
    sig = cls.signature
    return RelationalStructure(0, sig, tuple(frozenset() for _ in sig))


# --------------------------------------------------------------------------
# the crown counterexample


def crown_span() -> Span:
    """A = {x1, x2, x3} antichain; B = crown(3) minus y3; C = A plus y3 above x1, x2.

    Points: x_i = i - 1; in B, y1 = 3 (above x2, x3) and y2 = 4 (above x1, x3);
    in C, y3 = 3.
    """
    A = FinitePoset.antichain(3)
    B = FinitePoset.from_relation(5, [(1, 3), (2, 3), (0, 4), (2, 4)])
    C = FinitePoset.from_relation(4, [(0, 3), (1, 3)])
    ident = EmbeddingMap.identity(3)
    return Span(A, B, C, ident, ident)


def ap_counterexample() -> tuple[Span, AmalgamReport]:
    """The crown span with an exhaustive amalgam report inside posets of dimension <= 2.

    ``report.rejected`` lists every amalgam among all posets (each one outside
    the class); ``report.amalgams`` is empty.
    """
    span = crown_span()
    report = complete_span(span, ClassSpec("posets-dim-le", k=2), 0, collect_all=True)
    return span, report


# --------------------------------------------------------------------------
# weak amalgamation


def one_point_extensions(X, cls: ClassSpec) -> list:
    """Members of ``cls`` obtained by adding one point (index ``X.n``) to ``X``."""
    n = X.n
    out = []
    if isinstance(X, FinitePoset):
        down = X.down
        up = X.up
        ideals = [m for m in range(1 << n) if all(down[x] & ~m == 0 for x in iter_bits(m))]
        filters = [m for m in range(1 << n) if all(up[x] & ~m == 0 for x in iter_bits(m))]
        for I in ideals:
            above_all = (1 << n) - 1
            for x in iter_bits(I):
                above_all &= up[x]
            for F in filters:
                if F & I or F & ~above_all:
                    continue
                masks = [up[x] | (1 << n) if I >> x & 1 else up[x] for x in range(n)]
                masks.append((1 << n) | F)
                Y = FinitePoset.from_up_masks(masks)
                if cls.contains(Y):
                    out.append(Y)
        return out
    s = as_structure(X)
    free = []
    for ri, (_, arity) in enumerate(s.signature):
        for t in itertools.product(range(n + 1), repeat=arity):
            if n in t:
                free.append((ri, t))
    if len(free) > FREE_TUPLE_CAP:
        raise BoundExceeded("one-point extension tuples", len(free), FREE_TUPLE_CAP)
    for bits in range(1 << len(free)):
        rels = [set(r) for r in s.relations]
        for i in iter_bits(bits):
            ri, t = free[i]
            rels[ri].add(t)
        try:
            Y = RelationalStructure(n + 1, s.signature, tuple(rels), s.order)
        except Exception:
            continue
        if cls.contains(Y):
            out.append(Y)
    return out


def _ext_key(Y, base_n: int) -> tuple:
    """Key identifying an extension up to renaming the added points."""
    s = as_structure(Y)
    extra = list(range(base_n, s.n))
    best = None
    for perm in itertools.permutations(extra):
        lab = list(range(base_n)) + list(perm)
        key = tuple(tuple(sorted(tuple(lab[x] for x in t) for t in r)) for r in s.relations)
        if best is None or key < best:
            best = key
    return best


def extensions(X, cls: ClassSpec, extra: int) -> list:
    """Members containing ``X`` as the first ``X.n`` points with 0..extra added points."""
    layers = [[X]]
    for _ in range(extra):
        nxt = {}
        for Y in layers[-1]:
            for Z in one_point_extensions(Y, cls):
                nxt.setdefault(_ext_key(Z, X.n), Z)
        layers.append([nxt[k] for k in sorted(nxt)])
    return [Y for layer in layers for Y in layer]


def oriented_realizer(B: FinitePoset, emb: EmbeddingMap, abar: ProductPoset) -> tuple[LinearOrder, LinearOrder]:
    """A realizer (O1, O2) of ``B`` such that ``emb`` carries lex/alex of ``abar`` onto it.

    Picks a realizer, views ``B`` inside the product of its two orders via the
    diagonal, classifies the composite product embedding and swaps the orders
    when it is LexToAlex.
    """
    pair = two_dim_realizer(B)
    if pair is None:
        raise NotInClass("target poset has dimension > 2")
    M1, M2 = pair
    nb = B.n
    bprod = product_poset(nb, nb)
    diag = EmbeddingMap(tuple(bprod.index(M1.rank[b], M2.rank[b]) for b in range(nb)))
    tag = classify_product_embedding(emb.then(diag), abar, bprod)
    return (M1, M2) if tag is ProductTag.LEX_TO_LEX else (M2, M1)


def merge_sequences(s1: Sequence[int], s2: Sequence[int], common: set) -> list[int]:
    """Interleave two chains that list the shared points in the same order."""
    out = []
    i = j = 0
    while i < len(s1) or j < len(s2):
        while i < len(s1) and s1[i] not in common:
            out.append(s1[i])
            i += 1
        while j < len(s2) and s2[j] not in common:
            out.append(s2[j])
            j += 1
        if i < len(s1) and j < len(s2):
            if s1[i] != s2[j]:
                raise ValueError("chains order the shared points differently")
            out.append(s1[i])
            i += 1
            j += 1
        elif i < len(s1) or j < len(s2):
            raise ValueError("chains share different point sets")
    return out


@dataclass(frozen=True)
class WeakAmalgam:
    completion: Completion
    orders: tuple[LinearOrder, LinearOrder]


def weak_amalgamate_two_dim(
    abar: ProductPoset, e: EmbeddingMap, B: FinitePoset, f: EmbeddingMap, C: FinitePoset, g: EmbeddingMap
) -> WeakAmalgam:
    """Amalgamate ``B <-f- abar -g-> C`` over the image of ``e`` inside dimension <= 2.

    Both sides are oriented by classifying product embeddings, after which they are
    permutations agreeing on the image of ``e``; the two permutation orders are
    merged and the result intersected.
    """
    ob = oriented_realizer(B, f, abar)
    oc = oriented_realizer(C, g, abar)
    shared = {g[e[a]]: f[e[a]] for a in range(len(e))}
    g_prime = []
    nxt = B.n
    for c in range(C.n):
        if c in shared:
            g_prime.append(shared[c])
        else:
            g_prime.append(nxt)
            nxt += 1
    common = set(shared.values())
    orders = []
    for lb, lc in zip(ob, oc):
        seq_c = [g_prime[c] for c in lc.sequence]
        orders.append(LinearOrder.from_sequence(merge_sequences(list(lb.sequence), seq_c, common)))
    N = nxt
    D = FinitePoset.from_up_masks([orders[0].up[x] & orders[1].up[x] for x in range(N)])
    comp = Completion(D, EmbeddingMap.identity(B.n), EmbeddingMap(tuple(g_prime)))
    return WeakAmalgam(comp, (orders[0], orders[1]))


@dataclass(frozen=True)
class WapCertificate:
    regime: str  # "exhaustive" or "sampled"
    extensions: int
    pairs_total: int
    pairs_checked: int
    failures: tuple = ()
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass(frozen=True)
class WapWitness:
    A: object
    abar: object
    e: EmbeddingMap
    certificate: WapCertificate


def _pair_indices(total_ext: int, budget: int, seed: int):
    total = total_ext * total_ext
    if total <= budget:
        return "exhaustive", total, [divmod(i, total_ext) for i in range(total)]
    rng = random.Random(seed)
    picks = sorted(rng.sample(range(total), budget))
    return "sampled", total, [divmod(i, total_ext) for i in picks]


def wap_witness(
    A,
    cls: ClassSpec,
    bounds: tuple[int, int] = (16, 1),
    *,
    budget: int = 20000,
    seed: int = 0,
) -> WapWitness | None:
    """Find ``e : A -> Abar`` over which every pair of extensions weakly amalgamates.

    ``bounds = (max |Abar|, extra points)``: extensions ``B, C`` of ``Abar`` have
    at most ``|Abar| + extra`` points. Pairs are checked exhaustively when there
    are at most ``budget`` of them and sampled (seeded) otherwise.
    """
    max_abar, extra = bounds
    if not cls.contains(A):
        raise NotInClass("A is not a member of the class")
    if cls.name == "posets-dim-le" and cls.k == 2:
        return _wap_two_dim(A, cls, max_abar, extra, budget, seed)
    return _wap_search(A, cls, max_abar, extra, budget, seed)


def _wap_two_dim(A: FinitePoset, cls, max_abar, extra, budget, seed) -> WapWitness:
    n = A.n
    if n == 0:
        raise ValueError("A must be nonempty")
    if n * n > max_abar:
        raise BoundExceeded("wap Abar", n * n, max_abar)
    L1, L2 = two_dim_realizer(A)
    abar = product_poset(n, n)
    e = EmbeddingMap(tuple(abar.index(L1.rank[a], L2.rank[a]) for a in range(n)))
    exts = extensions(abar.poset, cls, extra)
    incl = EmbeddingMap.identity(abar.n)
    regime, total, pairs = _pair_indices(len(exts), budget, seed)
    failures = []
    for i, j in pairs:
        B, C = exts[i], exts[j]
        wa = weak_amalgamate_two_dim(abar, e, B, incl, C, incl)
        span = Span(A, B, C, e, e)
        if not (wa.completion.is_valid_for(span) and is_realizer(wa.completion.D, wa.orders)):
            failures.append((i, j))
    cert = WapCertificate(regime, len(exts), total, len(pairs), tuple(failures), seed if regime == "sampled" else None)
    return WapWitness(A, abar, e, cert)


def _wap_search(A, cls, max_abar, extra, budget, seed) -> WapWitness | None:
    for size in range(A.n, max_abar + 1):
        for abar in enumerate_upto_iso(cls, size):
            exts = extensions(abar, cls, extra)
            regime, total, pairs = _pair_indices(len(exts), budget, seed)
            for e in find_embeddings(A, abar):
                failures = []
                for i, j in pairs:
                    span = Span(A, exts[i], exts[j], e, e)
                    if complete_span(span, cls).completion is None:
                        failures.append((i, j))
                        break
                if not failures:
                    cert = WapCertificate(regime, len(exts), total, len(pairs), (), seed if regime == "sampled" else None)
                    return WapWitness(A, abar, e, cert)
    return None
