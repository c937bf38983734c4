from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import lex_alex_ranks, product_embeddings_naive, product_matrix, realizer_pairs_naive

from orderforge.errors import BoundExceeded, NotAnEmbedding
from orderforge.products import (
    ProductTag,
    alex_order,
    classify_product_embedding,
    realizer_uniqueness_report,
    embedding_classification_report,
    lex_order,
    product_poset,
    realizer_pair_set,
)
from orderforge.relcore import EmbeddingMap, find_embeddings


def test_product_indexing():
    p = product_poset(2, 3)
    assert p.n == 6 and p.index(1, 2) == 5 and p.coords(4) == (1, 1)
    assert p.poset.leq[p.index(0, 1)][p.index(1, 2)]
    assert not p.poset.leq[p.index(0, 2)][p.index(1, 1)]


@pytest.mark.parametrize("a,b", [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2)])
def test_realizer_pairs_match_brute_force(a, b):
    m, _ = product_matrix(a, b)
    ours = {frozenset(L.rank for L in pair) for pair in realizer_pair_set(product_poset(a, b))}
    assert ours == realizer_pairs_naive(m)


def test_lex_alex_match_oracle():
    for a, b in [(2, 3), (3, 2), (3, 3)]:
        p = product_poset(a, b)
        assert (lex_order(p).rank, alex_order(p).rank) == lex_alex_ranks(a, b)


def test_realizer_uniqueness_two_by_two():
    rep = realizer_uniqueness_report(2, 2)
    assert rep["verdict"] == "PASS" and not rep["degenerate"]
    assert rep["pairs"] == [[[0, 1, 2, 3], [0, 2, 1, 3]]]


def test_realizer_uniqueness_degenerate_factor():
    rep = realizer_uniqueness_report(1, 4)
    assert rep["verdict"] == "PASS" and rep["degenerate"] and len(rep["pairs"]) == 1


def test_realizer_uniqueness_bound():
    with pytest.raises(BoundExceeded):
        realizer_uniqueness_report(3, 3)
    assert realizer_uniqueness_report(3, 3, max_n=9)["verdict"] == "PASS"


@pytest.mark.parametrize("src,dst", [((2, 2), (2, 3)), ((2, 2), (3, 2)), ((1, 2), (2, 2)), ((2, 1), (1, 3))])
def test_embedding_classification_matches_brute_force(src, dst):
    naive = list(product_embeddings_naive(src, dst))
    assert all(tag is not None for _, tag in naive)
    rep = embedding_classification_report(src, dst)
    assert rep["embeddings"] == len(naive)
    for tag in ("LexToLex", "LexToAlex"):
        assert rep["counts"][tag] == sum(t == tag for _, t in naive)
    assert rep["unclassified"] == []


def test_coordinate_swap_is_lex_to_alex():
    src, dst = product_poset(2, 3), product_poset(3, 2)
    f = EmbeddingMap(tuple(dst.index(b, a) for a, b in map(src.coords, range(src.n))))
    assert classify_product_embedding(f, src, dst) is ProductTag.LEX_TO_ALEX


def test_one_point_source_ties_to_lex():
    src, dst = product_poset(1, 1), product_poset(2, 2)
    assert classify_product_embedding(EmbeddingMap((3,)), src, dst) is ProductTag.LEX_TO_LEX


def test_non_embedding_rejected():
    src, dst = product_poset(1, 2), product_poset(2, 2)
    with pytest.raises(NotAnEmbedding):
        classify_product_embedding(EmbeddingMap((3, 0)), src, dst)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_tag_preserves_the_named_orders(a, b, data):
    src, dst = product_poset(a, b), product_poset(3, 3)
    embs = find_embeddings(src.poset, dst.poset, limit=200)
    f = data.draw(st.sampled_from(embs))
    tag = classify_product_embedding(f, src, dst)
    targets = (lex_order(dst), alex_order(dst))
    if tag is ProductTag.LEX_TO_ALEX:
        targets = targets[::-1]
    for s_ord, d_ord in zip((lex_order(src), alex_order(src)), targets):
        for x in range(src.n):
            for y in range(src.n):
                assert (s_ord.rank[x] < s_ord.rank[y]) == (d_ord.rank[f[x]] < d_ord.rank[f[y]])
