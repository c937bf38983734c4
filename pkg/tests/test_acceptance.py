"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` or ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import time

import pytest

from oracles import all_posets_naive

from orderforge.amalg import ap_counterexample, complete_span, crown_span, extensions
from orderforge.decomp import (
    growth_classify,
    koenig_branch,
    koenig_tree,
    marked_chain_corpus,
    minimal_interval_decomposition,
    profile,
)
from orderforge.dimension import crown, dimension, dimension_at_most
from orderforge.errors import EmptyLevel, UnclassifiableEmbedding
from orderforge.generic import age_at, build_generic_permutation, reduct_to_poset, weak_injectivity_witness
from orderforge.products import alex_order, classify_product_embedding, lex_order, product_poset, realizer_pair_set
from orderforge.relcore import (
    ClassSpec,
    EmbeddingMap,
    canonical_form,
    enumerate_upto_iso,
    find_embeddings,
    iter_embeddings,
)

ALL = ClassSpec.parse("all-posets")
DIM2 = ClassSpec.parse("posets-dim-le(2)")


@pytest.fixture
def report(capsys):
    """Print ``PASS``/``FAIL`` for the criterion, bypassing output capture."""

    def emit(number: int, ok: bool, detail: str, started: float) -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number}: {detail} ({time.perf_counter() - started:.1f}s)")
        assert ok, detail

    return emit


def test_criterion_1_realizer_uniqueness(report):
    t0 = time.perf_counter()
    sizes = [(a, b) for a in (1, 2, 3) for b in (1, 2, 3)] + [(4, 2), (2, 4)]
    bad = []
    for a, b in sizes:
        p = product_poset(a, b)
        if realizer_pair_set(p, max_n=9) != frozenset({frozenset((lex_order(p), alex_order(p)))}):
            bad.append((a, b))
    elapsed = time.perf_counter() - t0
    report(1, not bad and elapsed < 60, f"{len(sizes)} products, mismatches {bad}", t0)


def _shapes(max_points: int):
    return [(a, b) for a in range(1, max_points + 1) for b in range(1, max_points + 1) if a * b <= max_points]


def test_criterion_2_embedding_classification(report):
    t0 = time.perf_counter()
    total = unclassified = 0
    for src in _shapes(6):
        ps = product_poset(*src)
        for dst in _shapes(9):
            if src[0] * src[1] > dst[0] * dst[1]:
                continue
            pd = product_poset(*dst)
            for f in iter_embeddings(ps.poset, pd.poset):
                total += 1
                try:
                    classify_product_embedding(f, ps, pd)
                except UnclassifiableEmbedding:
                    unclassified += 1
    elapsed = time.perf_counter() - t0
    report(2, unclassified == 0 and total > 0 and elapsed < 300, f"{total} embeddings, {unclassified} unclassified", t0)


def test_criterion_3_crown_dimension(report):
    t0 = time.perf_counter()
    C = crown(3)
    full = dimension(C) == 3
    minus = [dimension(C.restrict([x for x in range(6) if x != p])) for p in range(6)]
    five = enumerate_upto_iso(ALL, 5)
    small = len(five) == 63 and all(dimension_at_most(P, 2) for P in five)
    ok = full and minus == [2] * 6 and small
    detail = f"dim crown(3) = {dimension(C)}, minus a point {minus}, 63 five-point posets <= 2: {small}"
    report(3, ok, detail, t0)


def test_criterion_4_ap_counterexample(report):
    t0 = time.perf_counter()
    span = crown_span()
    within_all = complete_span(span, ALL, 0, collect_all=True)
    one = len(within_all.amalgams) == 1 and canonical_form(within_all.amalgams[0].D) == canonical_form(crown(3))
    _, within_dim2 = ap_counterexample()
    none = within_dim2.completion is None and within_dim2.amalgams == () and within_dim2.exhaustive
    detail = f"all-posets amalgams {len(within_all.amalgams)} (crown(3): {one}); dim<=2 none: {none}"
    report(4, one and none, detail, t0)


def test_criterion_5_generic_stage(report):
    t0 = time.perf_counter()
    p3, log3 = build_generic_permutation(3, 500, seed=0)
    age3 = age_at(reduct_to_poset(p3), 3) == frozenset(canonical_form(P) for P in enumerate_upto_iso(ALL, 3))
    p4, log4 = build_generic_permutation(4, 5000, seed=0)
    all4 = frozenset(canonical_form(P) for P in enumerate_upto_iso(ALL, 4))
    age4 = age_at(reduct_to_poset(p4), 4) == all4 and len(all4) == 16
    ok = log3.ep_level == 3 and age3 and log4.ep_level == 4 and age4
    detail = f"EP(3) stage {p3.n} points, age(3) = 5 posets: {age3}; EP(4) stage {p4.n} points, age(4) = 16: {age4}"
    elapsed = time.perf_counter() - t0
    report(5, ok and elapsed < 300, detail, t0)


def test_criterion_6_weak_injectivity(report):
    t0 = time.perf_counter()
    stage, _ = build_generic_permutation(3, 500, seed=0)
    R = reduct_to_poset(stage)
    cases = failures = 0
    for k in (1, 2, 3):
        for A in enumerate_upto_iso(DIM2, k):
            embs = find_embeddings(A, R, limit=40)
            for f in (embs[0], embs[len(embs) // 2], embs[-1]):
                w = weak_injectivity_witness(A, f, stage)
                incl = EmbeddingMap.identity(w.abar.n)
                for B in extensions(w.abar.poset, DIM2, 1):
                    cases += 1
                    h = w.extend(B, incl).h
                    if any(h[incl[w.e[a]]] != f[a] for a in range(A.n)):
                        failures += 1
    report(6, failures == 0 and cases > 0, f"{cases} (A, f, B) cases, {failures} failures", t0)


def test_criterion_7_profiles(report):
    t0 = time.perf_counter()
    posets = profile(ALL, 5).values
    naive = tuple(len(all_posets_naive(n)) for n in range(5))
    chains = profile(ClassSpec.parse("linear-orders"), 8)
    tag = str(growth_classify(chains))
    ok = posets == (1, 1, 2, 5, 16, 63) and posets[:5] == naive and chains.values == (1,) * 9
    ok = ok and tag == "eventually-polynomial(0)"
    report(7, ok, f"all-posets {posets}, naive {naive}, linear-orders {chains.values} -> {tag}", t0)


def test_criterion_8_koenig(report):
    t0 = time.perf_counter()
    corpus = marked_chain_corpus(8)
    tree = koenig_tree(corpus, 2)
    edges_ok = all(
        d.restrict(corpus[i][1]) == tree.levels[i - 1][tree.parents[i][j]]
        for i in range(1, len(tree.levels))
        for j, d in enumerate(tree.levels[i])
    )
    branch = koenig_branch(corpus, 2)
    branch_ok = len(branch) == len(corpus) and all(
        branch[i].restrict(corpus[i][1]) == branch[i - 1] for i in range(1, len(branch))
    )
    # the first stage with no interval decomposition into at most 2 blocks
    expected = next(i for i, (S, _) in enumerate(corpus) if minimal_interval_decomposition(S, 1) is None)
    try:
        koenig_branch(corpus, 1)
        reported = None
    except EmptyLevel as exc:
        reported = exc.stage
    ok = edges_ok and branch_ok and reported == expected
    detail = f"tree edges coherent: {edges_ok}; branch coherent: {branch_ok}; k=1 fails at stage {reported} (expected {expected})"
    report(8, ok, detail, t0)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
