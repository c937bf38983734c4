"""``orderforge`` command line.

Every subcommand prints one report (JSON by default) and exits with

    0  ok / PASS
    1  FAIL verdict
    2  usage error
    3  malformed or invalid input
    4  size bound exceeded (raise it with ORDERFORGE_MAX_N)
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import bounds
from .amalg import CROWN_SPAN_NOTE, Span, ap_counterexample, has_AP_upto, wap_witness
from .decomp import (
    growth_classify,
    koenig_branch,
    marked_chain_corpus,
    minimal_interval_decomposition,
    profile,
)
from .dimension import crown, dimension, minimum_realizer
from .errors import BoundExceeded, EmptyLevel, InvalidStructure, OrderForgeError, StageExhausted
from .generic import PermutationStructure, age_at, build_generic_permutation, reduct_to_poset
from .io import dumps, hasse_dot, load_json, poset_from_json, structure_from_json, structure_to_json
from .products import realizer_uniqueness_report, embedding_classification_report
from .relcore.canon import canonical_form
from .relcore.classes import ClassSpec
from .relcore.structures import EmbeddingMap, FinitePoset

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INPUT, EXIT_BOUND = 0, 1, 2, 3, 4


@dataclass
class Result:
    payload: dict
    verdict: str | None = None
    poset: FinitePoset | None = None  # what --format dot draws
    provenance: dict = field(default_factory=dict)


def _span_json(span: Span) -> dict:
    return {
        "A": structure_to_json(span.A),
        "B": structure_to_json(span.B),
        "C": structure_to_json(span.C),
        "f": list(span.f),
        "g": list(span.g),
    }


def _unwrap(data):
    """Accept the ``structure`` field of another command's JSON output."""
    if isinstance(data, dict) and "structure" in data and "n" not in data:
        return data["structure"]
    return data


def _load_poset(path: str) -> FinitePoset:
    return poset_from_json(_unwrap(load_json(path)))


def _load_any(path: str):
    """A stage (``ord1``/``ord2``), a poset or a general structure."""
    data = _unwrap(load_json(path))
    if isinstance(data, dict) and "stage" in data and "ord1" not in data:
        data = data["stage"]
    if isinstance(data, dict) and "ord1" in data:
        return PermutationStructure.from_json(data)
    s = structure_from_json(data)
    if s.is_poset():
        return FinitePoset.from_structure(s)
    return s


def _class(text: str) -> ClassSpec:
    try:
        return ClassSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


# --------------------------------------------------------------------------
# subcommands


def cmd_dim(args) -> Result:
    P = _load_poset(args.poset)
    R = minimum_realizer(P)
    payload = {"n": P.n, "dimension": len(R), "realizer": [list(L.sequence) for L in R.orders]}
    return Result(payload, poset=P, provenance={"bounds": {"dimension": bounds.bound("dimension")}, "exhaustive": True})


def cmd_crown(args) -> Result:
    P = crown(args.k)
    payload = {"k": args.k, "structure": structure_to_json(P)}
    if P.n <= bounds.bound("dimension"):
        payload["dimension"] = dimension(P)
    return Result(payload, poset=P, provenance={"exhaustive": True})


def cmd_realizer_uniqueness(args) -> Result:
    rep = realizer_uniqueness_report(args.a, args.b, args.max_n)
    limit = args.max_n if args.max_n is not None else bounds.bound("realizer_pairs")
    return Result(rep, rep["verdict"], provenance={"bounds": {"realizer_pairs": limit}, "exhaustive": True})


def cmd_embedding_classification(args) -> Result:
    rep = embedding_classification_report(tuple(args.src), tuple(args.dst))
    return Result(rep, rep["verdict"], provenance={"exhaustive": True})


def cmd_ap_check(args) -> Result:
    cls = args.cls
    bases = None
    if args.base:
        bases = [_load_poset(p) if cls.is_poset_class else structure_from_json(load_json(p)) for p in args.base]
    failures = has_AP_upto(cls, args.max_size, bases=bases, max_extra=args.max_extra, limit=args.limit)
    payload = {
        "class": str(cls),
        "max_size": args.max_size,
        "failing_spans": [_span_json(s) for s in failures],
        "failures": len(failures),
    }
    verdict = "PASS" if not failures else "FAIL"
    prov = {
        "bounds": {"span": args.limit or bounds.bound("span"), "max_extra": args.max_extra},
        "exhaustive": True,
    }
    return Result(payload, verdict, provenance=prov)


def cmd_crown_counterexample(args) -> Result:
    span, report = ap_counterexample()
    amalgams = [c.D for c in report.rejected]
    crown_code = canonical_form(crown(3))
    payload = {
        "span": _span_json(span),
        "note": CROWN_SPAN_NOTE,
        "amalgams_among_all_posets": [
            {
                "structure": structure_to_json(c.D),
                "g_prime": list(c.g_prime),
                "dimension": dimension(c.D),
                "is_crown_3": canonical_form(c.D) == crown_code,
            }
            for c in report.rejected
        ],
        "completions_within": str(report.searched_within),
        "completions": len(report.amalgams),
    }
    ok = report.completion is None and len(amalgams) == 1 and canonical_form(amalgams[0]) == crown_code
    prov = {"bounds": {"max_extra": report.max_extra}, "exhaustive": report.exhaustive}
    return Result(payload, "PASS" if ok else "FAIL", poset=amalgams[0] if amalgams else None, provenance=prov)


def cmd_wap(args) -> Result:
    cls = args.cls
    A = _load_poset(args.structure) if cls.is_poset_class else structure_from_json(load_json(args.structure))
    w = wap_witness(A, cls, (args.max_abar, args.extra), budget=args.budget, seed=args.seed)
    prov = {"bounds": {"max_abar": args.max_abar, "extra": args.extra, "budget": args.budget}, "seed": args.seed}
    if w is None:
        prov["exhaustive"] = True
        return Result({"class": str(cls), "witness": None}, "FAIL", provenance=prov)
    abar = w.abar.poset if hasattr(w.abar, "poset") else w.abar
    cert = w.certificate
    payload = {
        "class": str(cls),
        "abar": structure_to_json(abar),
        "e": list(w.e),
        "certificate": {
            "regime": cert.regime,
            "extensions": cert.extensions,
            "pairs_total": cert.pairs_total,
            "pairs_checked": cert.pairs_checked,
            "failures": [list(p) for p in cert.failures],
        },
    }
    prov["exhaustive"] = cert.regime == "exhaustive"
    return Result(payload, "PASS" if cert.passed else "FAIL", provenance=prov)


def _strict_pairs(order) -> list[list[int]]:
    seq = order.sequence
    return [[seq[i], seq[j]] for i in range(len(seq)) for j in range(i + 1, len(seq))]


def cmd_generic(args) -> Result:
    prov = {"bounds": {"max_points": args.max}, "seed": args.seed, "exhaustive": True}
    try:
        stage, log = build_generic_permutation(args.ep, args.max, args.seed)
    except StageExhausted as exc:
        payload = {"error": str(exc), "log": exc.log.to_json() if exc.log else None}
        raise _Reported(Result(payload, "FAIL", provenance=prov), EXIT_BOUND) from exc
    payload = {"stage": stage.to_json(), "n": stage.n, "log": log.to_json()}
    if args.strict:
        payload["strict"] = {"lt1": _strict_pairs(stage.ord1), "lt2": _strict_pairs(stage.ord2)}
    R = reduct_to_poset(stage)
    if args.emit_reduct:
        payload["reduct"] = structure_to_json(R)
    verdict = "PASS" if log.ep_level >= args.ep else "FAIL"
    return Result(payload, verdict, poset=R, provenance=prov)


def cmd_reduct(args) -> Result:
    stage = PermutationStructure.from_json(load_json(args.stage))
    R = reduct_to_poset(stage)
    return Result({"reduct": structure_to_json(R), "n": R.n}, poset=R)


def cmd_age(args) -> Result:
    S = _load_any(args.structure)
    if isinstance(S, PermutationStructure):
        S = reduct_to_poset(S) if args.reduct else S.to_structure()
    if args.m > S.n:
        raise InvalidStructure(f"m = {args.m} exceeds the structure size {S.n}")
    by_size = {}
    for k in range(1, args.m + 1):
        codes = sorted(age_at(S, k, seed=args.seed))
        by_size[str(k)] = [json.loads(c.decode()) for c in codes]
    payload = {
        "n": S.n,
        "m": args.m,
        "counts": {k: len(v) for k, v in by_size.items()},
        "codes": by_size,
    }
    return Result(payload, provenance={"bounds": {"age": bounds.bound("age")}, "seed": args.seed, "exhaustive": True})


def cmd_profile(args) -> Result:
    table = profile(args.cls, args.N)
    payload = table.to_json()
    if args.window <= len(table.values):
        payload["growth"] = growth_classify(table, args.window, args.c).to_json()
    if args.plot:
        _plot_profile(table, args.plot)
        payload["plot"] = str(args.plot)
    prov = {"bounds": {"enumerate": bounds.bound("enumerate"), "window": args.window, "c": args.c}, "exhaustive": True}
    return Result(payload, provenance=prov)


def _plot_profile(table, path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "orderforge"
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = list(range(len(table.values)))
    ax.plot(xs, table.values, marker="o")
    ax.set_yscale("log")
    ax.set_xlabel("n")
    ax.set_ylabel("members up to isomorphism")
    ax.set_title(str(table.cls))
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


def cmd_decomp(args) -> Result:
    S = structure_from_json(load_json(args.structure))
    d = minimal_interval_decomposition(S, args.k)
    payload = {"n": S.n, "k": args.k, "decomposition": d.to_json() if d else None, "blocks": len(d) if d else None}
    prov = {"bounds": {"monomorphic": bounds.bound("monomorphic")}, "exhaustive": True}
    return Result(payload, provenance=prov)


def _load_manifest(path: str):
    data = load_json(path)
    try:
        structures = [structure_from_json(s) for s in data["structures"]]
        incl = data.get("inclusions") or [None] * len(structures)
        maps = [None if m is None else EmbeddingMap(tuple(m)) for m in incl]
    except (KeyError, TypeError) as exc:
        raise InvalidStructure(f"malformed chain manifest: {exc}") from exc
    if len(maps) != len(structures):
        raise InvalidStructure("one inclusion entry per structure is required")
    return list(zip(structures, maps))


def cmd_koenig(args) -> Result:
    if args.manifest:
        chain = _load_manifest(args.manifest)
    else:
        chain = marked_chain_corpus(args.max_n)
    prov = {"bounds": {"monomorphic": bounds.bound("monomorphic")}, "exhaustive": True}
    try:
        branch = koenig_branch(chain, args.k)
    except EmptyLevel as exc:
        return Result({"k": args.k, "failing_stage": exc.stage, "error": str(exc)}, "FAIL", provenance=prov)
    payload = {"k": args.k, "stages": len(chain), "branch": [d.to_json() for d in branch]}
    return Result(payload, "PASS", provenance=prov)


class _Reported(Exception):
    def __init__(self, result: Result, code: int):
        super().__init__()
        self.result = result
        self.code = code


# --------------------------------------------------------------------------
# parser and entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orderforge", description="Finite order theory workbench.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text", "dot"), default="json")
    common.add_argument("--dot", metavar="PATH", help="also write the Hasse diagram of the result poset")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dim", parents=[common], help="exact dimension and a minimum realizer")
    p.add_argument("poset")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("crown", parents=[common], help="the crown on 2k points")
    p.add_argument("--k", type=int, default=3)
    p.set_defaults(func=cmd_crown)

    p = sub.add_parser("lemma-a", parents=[common], help="realizer pairs of a product of two chains")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--max-n", type=int, default=None)
    p.set_defaults(func=cmd_realizer_uniqueness)

    p = sub.add_parser("lemma-b", parents=[common], help="classify embeddings between two products")
    p.add_argument("--src", type=int, nargs=2, required=True, metavar=("A", "B"))
    p.add_argument("--dst", type=int, nargs=2, required=True, metavar=("C", "D"))
    p.set_defaults(func=cmd_embedding_classification)

    p = sub.add_parser("ap-check", parents=[common], help="bounded amalgamation check")
    p.add_argument("--class", dest="cls", type=_class, required=True)
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--max-extra", type=int, default=0)
    p.add_argument("--base", action="append", help="restrict to spans over this structure (repeatable)")
    p.add_argument("--limit", type=int, default=None, help="override the span size bound")
    p.set_defaults(func=cmd_ap_check)

    p = sub.add_parser("crown-counterexample", parents=[common], help="the span with no 2-dimensional amalgam")
    p.set_defaults(func=cmd_crown_counterexample)

    p = sub.add_parser("wap", parents=[common], help="bounded weak amalgamation witness")
    p.add_argument("--class", dest="cls", type=_class, default=ClassSpec("posets-dim-le", k=2))
    p.add_argument("--structure", required=True)
    p.add_argument("--max-abar", type=int, default=16)
    p.add_argument("--extra", type=int, default=1)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_wap)

    p = sub.add_parser("generic", parents=[common], help="grow a generic permutation stage")
    p.add_argument("--ep", type=int, required=True)
    p.add_argument("--max", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-reduct", action="store_true")
    p.add_argument("--strict", action="store_true", help="also list the strict order pairs")
    p.set_defaults(func=cmd_generic)

    p = sub.add_parser("reduct", parents=[common], help="poset reduct of a stage")
    p.add_argument("stage")
    p.set_defaults(func=cmd_reduct)

    p = sub.add_parser("age", parents=[common], help="induced substructures up to size m")
    p.add_argument("structure")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reduct", action="store_true", help="for a stage, take the age of its poset reduct")
    p.set_defaults(func=cmd_age)

    p = sub.add_parser("profile", parents=[common], help="class profile and growth heuristic")
    p.add_argument("--class", dest="cls", type=_class, required=True)
    p.add_argument("-N", type=int, required=True)
    p.add_argument("--window", type=int, default=4)
    p.add_argument("--c", type=float, default=1.4)
    p.add_argument("--plot", metavar="SVG")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("decomp", parents=[common], help="fewest-block interval decomposition")
    p.add_argument("structure")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_decomp)

    p = sub.add_parser("koenig", parents=[common], help="branch of compatible interval decompositions")
    p.add_argument("manifest", nargs="?")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--max-n", type=int, default=8, help="size of the built-in marked-chain corpus")
    p.set_defaults(func=cmd_koenig)
    return parser


def _render_text(report: dict) -> str:
    lines = []
    if "verdict" in report:
        lines.append(f"verdict: {report['verdict']}")
    for key in sorted(report):
        if key == "verdict":
            continue
        value = report[key]
        if isinstance(value, (str, int, float, bool)) or value is None:
            lines.append(f"{key}: {value}")
        else:
            lines.append(f"{key}: {json.dumps(value, sort_keys=True, separators=(',', ':'))}")
    if "dimension" in report:
        lines.append(f"dimension {report['dimension']}")
    for item in report.get("amalgams_among_all_posets", []):
        lines.append(f"amalgam dimension {item['dimension']}")
    return "\n".join(lines) + "\n"


def _emit(result: Result, args, out) -> None:
    report = dict(result.payload)
    if result.verdict is not None:
        report["verdict"] = result.verdict
    report["provenance"] = {"command": args.command, **result.provenance}
    if args.dot and result.poset is not None:
        Path(args.dot).write_text(hasse_dot(result.poset))
    if args.format == "dot":
        if result.poset is None:
            raise _Usage(f"{args.command} has no poset to draw")
        out.write(hasse_dot(result.poset))
    elif args.format == "text":
        out.write(_render_text(report))
    else:
        out.write(dumps(report) + "\n")


class _Usage(Exception):
    pass


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
        _emit(result, args, out)
    except _Reported as rep:
        _emit(rep.result, args, out)
        return rep.code
    except _Usage as exc:
        print(f"orderforge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BoundExceeded as exc:
        print(f"orderforge: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except (InvalidStructure, OSError, ValueError, OrderForgeError) as exc:
        print(f"orderforge: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_FAIL if result.verdict == "FAIL" else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
