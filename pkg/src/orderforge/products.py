"""Products of two finite chains, their lex/alex realizer, and the checks that
the realizer is unique and that embeddings between products respect it.

Element ``(a, b)`` of an ``a_size x b_size`` product has index ``a * b_size + b``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

from . import bounds
from .dimension import complementary_order, iter_linear_extensions
from .errors import UnclassifiableEmbedding
from .relcore.embed import iter_embeddings, require_embedding
from .relcore.structures import EmbeddingMap, FinitePoset, LinearOrder


class ProductTag(str, enum.Enum):
    LEX_TO_LEX = "LexToLex"
    LEX_TO_ALEX = "LexToAlex"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ProductPoset:
    a_size: int
    b_size: int
    poset: FinitePoset

    @property
    def n(self) -> int:
        return self.a_size * self.b_size

    def index(self, a: int, b: int) -> int:
        return a * self.b_size + b

    def coords(self, x: int) -> tuple[int, int]:
        return divmod(x, self.b_size)


@lru_cache(maxsize=256)
def product_poset(a_size: int, b_size: int) -> ProductPoset:
    """Coordinatewise order on the product of the chains 0..a_size-1 and 0..b_size-1."""
    if a_size < 1 or b_size < 1:
        raise ValueError("factor sizes must be at least 1")
    n = a_size * b_size
    up = []
    for x in range(n):
        a1, b1 = divmod(x, b_size)
        up.append(sum(1 << (a2 * b_size + b2) for a2 in range(a1, a_size) for b2 in range(b1, b_size)))
    return ProductPoset(a_size, b_size, FinitePoset.from_up_masks(up))


@lru_cache(maxsize=256)
def lex_order(p: ProductPoset) -> LinearOrder:
    """First coordinate dominant; with the fixed indexing the rank is the index itself."""
    return LinearOrder(tuple(range(p.n)))


@lru_cache(maxsize=256)
def alex_order(p: ProductPoset) -> LinearOrder:
    """Second coordinate dominant."""
    return LinearOrder(tuple(b * p.a_size + a for a, b in map(p.coords, range(p.n))))


def realizing_pairs(P: FinitePoset) -> frozenset[frozenset[LinearOrder]]:
    """Every unordered pair {L1, L2} of linear orders whose intersection is ``P``.

    L1 must be a linear extension and L2 is then forced, so scanning the
    extensions is exhaustive over all pairs.
    """
    out = set()
    for L1 in iter_linear_extensions(P):
        L2 = complementary_order(P, L1)
        if L2 is not None:
            out.add(frozenset((L1, L2)))
    return frozenset(out)


def realizer_pair_set(p: ProductPoset, max_n: int | None = None) -> frozenset[frozenset[LinearOrder]]:
    bounds.check("realizer_pairs", p.n, "realizer_pair_set", max_n)
    return realizing_pairs(p.poset)


def realizer_uniqueness_report(a_size: int, b_size: int, max_n: int | None = None) -> dict:
    """Compare the realizer pair set of a product against {{lex, alex}}."""
    p = product_poset(a_size, b_size)
    lex, alex = lex_order(p), alex_order(p)
    pairs = realizer_pair_set(p, max_n)
    expected = frozenset({frozenset((lex, alex))})
    return {
        "a": a_size,
        "b": b_size,
        "verdict": "PASS" if pairs == expected else "FAIL",
        "degenerate": lex == alex,
        "pairs": sorted(sorted(list(L.sequence) for L in pair) for pair in pairs),
        "lex": list(lex.sequence),
        "alex": list(alex.sequence),
        "exhaustive": True,
    }


def _is_two_order_embedding(f: EmbeddingMap, src_orders, dst_orders) -> bool:
    n = len(f)
    for s, d in zip(src_orders, dst_orders):
        for x in range(n):
            for y in range(x + 1, n):
                if (s.rank[x] < s.rank[y]) != (d.rank[f[x]] < d.rank[f[y]]):
                    return False
    return True


def classify_product_embedding(f: EmbeddingMap, src: ProductPoset, dst: ProductPoset) -> ProductTag:
    """Which pairing of lex/alex orders the poset embedding ``f`` respects.

    LexToLex wins ties (for instance a one-point source).
    """
    require_embedding(f, src.poset, dst.poset, "product map")
    src_orders = (lex_order(src), alex_order(src))
    if _is_two_order_embedding(f, src_orders, (lex_order(dst), alex_order(dst))):
        return ProductTag.LEX_TO_LEX
    if _is_two_order_embedding(f, src_orders, (alex_order(dst), lex_order(dst))):
        return ProductTag.LEX_TO_ALEX
    raise UnclassifiableEmbedding(f"embedding {tuple(f)} respects neither lex/alex pairing")


def embedding_classification_report(src_sizes: tuple[int, int], dst_sizes: tuple[int, int]) -> dict:
    """Classify every embedding between two products."""
    src = product_poset(*src_sizes)
    dst = product_poset(*dst_sizes)
    counts = {tag.value: 0 for tag in ProductTag}
    unclassified = []
    total = 0
    for f in iter_embeddings(src.poset, dst.poset):
        total += 1
        try:
            counts[classify_product_embedding(f, src, dst).value] += 1
        except UnclassifiableEmbedding:
            unclassified.append(list(f))
    return {
        "src": list(src_sizes),
        "dst": list(dst_sizes),
        "embeddings": total,
        "counts": counts,
        "unclassified": unclassified,
        "verdict": "PASS" if not unclassified else "FAIL",
    }
