from __future__ import annotations


import pytest

from orderforge.amalg import (
    Completion,
    Span,
    ap_counterexample,
    complete_span,
    crown_span,
    extensions,
    has_AP_upto,
    has_JEP_upto,
    merge_sequences,
    one_point_extensions,
    span_key,
    wap_witness,
)
from orderforge.dimension import crown, dimension, is_realizer
from orderforge.errors import NotAnEmbedding, NotInClass, SignatureMismatch
from orderforge.relcore import (
    ClassSpec,
    EmbeddingMap,
    FinitePoset,
    canonical_form,
    is_embedding,
    permutation_structure,
)

ALL = ClassSpec.parse("all-posets")
DIM2 = ClassSpec.parse("posets-dim-le(2)")
CHAINS = ClassSpec.parse("linear-orders")


def _assert_valid(report):
    for comp in report.amalgams:
        assert comp.is_valid_for(report.span)
        assert report.searched_within.contains(comp.D)


def test_two_chains_over_a_point():
    A = FinitePoset.chain(1)
    B = FinitePoset.chain(2)
    span = Span(A, B, B, EmbeddingMap((0,)), EmbeddingMap((0,)))
    rep = complete_span(span, ALL, collect_all=True)
    assert rep.completion is not None and rep.exhaustive
    _assert_valid(rep)
    # free amalgam first: the two tops incomparable
    assert rep.completion.D.n == 3 and not rep.completion.D.comparable(1, 2)


def test_identity_span_completes_to_itself():
    A = FinitePoset.from_relation(3, [(0, 1)])
    ident = EmbeddingMap.identity(3)
    rep = complete_span(Span(A, A, A, ident, ident), ALL)
    assert rep.completion.D == A


def test_span_requires_embeddings_and_one_signature():
    A = FinitePoset.chain(2)
    with pytest.raises(NotAnEmbedding):
        Span(A, A, A, EmbeddingMap((1, 0)), EmbeddingMap((0, 1)))
    P = permutation_structure((0, 1), (0, 1))
    with pytest.raises(SignatureMismatch):
        Span(A, P, A, EmbeddingMap((0, 1)), EmbeddingMap((0, 1)))


def test_crown_span_members_are_two_dimensional():
    span = crown_span()
    for X in (span.A, span.B, span.C):
        assert DIM2.contains(X)
    assert dimension(span.B) == 2 and dimension(span.C) == 2


def test_crown_counterexample():
    span, rep = ap_counterexample()
    assert rep.completion is None and rep.exhaustive and rep.amalgams == ()
    assert [canonical_form(c.D) for c in rep.rejected] == [canonical_form(crown(3))]
    assert all(dimension(c.D) >= 3 for c in rep.rejected)
    within_all = complete_span(span, ALL, collect_all=True)
    assert len(within_all.amalgams) == 1
    _assert_valid(within_all)


def test_restriction_soundness_with_extra_points():
    span = crown_span()
    rep = complete_span(span, ALL, max_extra=1, collect_all=True)
    assert len(rep.amalgams) > 1
    for comp in rep.amalgams:
        image = sorted(set(comp.f_prime) | set(comp.g_prime))
        D0 = comp.D.restrict(image)
        pos = {x: i for i, x in enumerate(image)}
        restricted = Completion(
            D0, EmbeddingMap(tuple(pos[x] for x in comp.f_prime)), EmbeddingMap(tuple(pos[x] for x in comp.g_prime))
        )
        assert restricted.is_valid_for(span)


def test_identification_amalgams_are_found():
    # two one-point extensions of the empty poset can share their point
    empty = FinitePoset.antichain(0)
    one = FinitePoset.chain(1)
    rep = complete_span(Span(empty, one, one, EmbeddingMap(()), EmbeddingMap(())), ALL, collect_all=True)
    assert sorted(c.D.n for c in rep.amalgams) == [1, 2, 2, 2]


@pytest.mark.parametrize("cls", [ALL, CHAINS, DIM2])
def test_ap_holds_up_to_three(cls):
    assert has_AP_upto(cls, 3) == []


def test_ap_fails_for_dim2_over_the_antichain():
    fails = has_AP_upto(DIM2, 5, bases=[FinitePoset.antichain(3)], limit=5)
    assert fails and all(s.pushout_size == 6 for s in fails)
    assert span_key(crown_span()) in {span_key(s) for s in fails}


@pytest.mark.parametrize("cls,n", [(DIM2, 3), (CHAINS, 4), (ALL, 4)])
def test_jep(cls, n):
    assert has_JEP_upto(cls, n)


def test_span_key_is_invariant_under_swapping_legs():
    span = crown_span()
    assert span_key(span) == span_key(span.swapped())


@pytest.mark.parametrize("P", [FinitePoset.from_relation(3, [(0, 1)]), FinitePoset.antichain(3), FinitePoset.chain(3)])
def test_one_point_extensions_match_brute_force(P):
    ours = one_point_extensions(P, ALL)
    assert all(Y.restrict(range(P.n)) == P for Y in ours)
    assert set(ours) == set(_labelled_extensions(P))


def _labelled_extensions(P):
    n = P.n
    out = []
    for bits in range(1 << (2 * n)):
        below = {x for x in range(n) if bits >> x & 1}
        above = {x for x in range(n) if bits >> (n + x) & 1}
        pairs = list(P.strict_pairs()) + [(x, n) for x in below] + [(n, x) for x in above]
        try:
            Y = FinitePoset.from_relation(n + 1, pairs)
        except Exception:
            continue
        if Y.restrict(range(n)) == P and {x for x in range(n) if Y.lt(x, n)} == below and {
            x for x in range(n) if Y.lt(n, x)
        } == above:
            out.append(Y)
    return out


def test_extensions_are_distinct_and_contain_the_base():
    P = FinitePoset.antichain(2)
    exts = extensions(P, DIM2, 2)
    assert exts[0] == P
    assert all(Y.restrict(range(2)) == P for Y in exts)


def test_merge_sequences():
    assert merge_sequences([0, 5, 1, 2], [0, 7, 1, 8], {0, 1}) == [0, 5, 7, 1, 2, 8]
    with pytest.raises(ValueError):
        merge_sequences([0, 1], [1, 0], {0, 1})


def test_wap_one_point():
    w = wap_witness(FinitePoset.chain(1), DIM2, (16, 1))
    assert w.abar.n == 1 and tuple(w.e) == (0,) and w.certificate.passed


def test_wap_antichain_abar_is_the_diamond():
    w = wap_witness(FinitePoset.antichain(2), DIM2, (16, 1))
    assert w.abar.n == 4
    assert [w.abar.coords(x) for x in w.e] == [(0, 1), (1, 0)]
    assert w.certificate.regime == "exhaustive" and w.certificate.passed


def test_wap_sampled_regime_is_seeded():
    a = wap_witness(FinitePoset.antichain(2), DIM2, (16, 2), budget=300, seed=3)
    b = wap_witness(FinitePoset.antichain(2), DIM2, (16, 2), budget=300, seed=3)
    assert a.certificate.regime == "sampled" and a.certificate.passed
    assert a.certificate == b.certificate


def test_wap_three_antichain():
    w = wap_witness(FinitePoset.antichain(3), DIM2, (16, 1))
    assert w.abar.n == 9 and w.certificate.passed


def test_wap_generic_search_for_all_posets():
    w = wap_witness(FinitePoset.chain(2), ALL, (4, 1))
    assert w is not None and w.certificate.passed


def test_wap_requires_membership():
    with pytest.raises(NotInClass):
        wap_witness(crown(3), DIM2, (64, 1))


def test_weak_amalgam_commutes_pointwise():
    from orderforge.amalg import weak_amalgamate_two_dim
    from orderforge.products import product_poset

    A = FinitePoset.antichain(2)
    w = wap_witness(A, DIM2, (16, 0))
    exts = extensions(w.abar.poset, DIM2, 1)
    ident = EmbeddingMap.identity(4)
    for B in exts[:6]:
        for C in exts[:6]:
            wa = weak_amalgamate_two_dim(product_poset(2, 2), w.e, B, ident, C, ident)
            assert all(wa.completion.f_prime[w.e[a]] == wa.completion.g_prime[w.e[a]] for a in range(2))
            assert is_realizer(wa.completion.D, wa.orders)
            assert is_embedding(wa.completion.g_prime, C, wa.completion.D)
