"""JSON interchange and Graphviz export.

Structure JSON::

    {"n": 3, "signature": [{"name": "leq", "arity": 2}],
     "relations": {"leq": [[0, 0], [0, 1], ...]}, "order": null}

Posets use the single binary relation ``leq`` (reflexive). A bare
``{"leq": [[1, 1], [0, 1]]}`` boolean matrix is accepted as poset shorthand.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Sequence

from .errors import InvalidStructure
from .relcore.structures import FinitePoset, LinearOrder, RelationalStructure, as_structure


def structure_to_json(obj) -> dict:
    s = as_structure(obj)
    return {
        "n": s.n,
        "signature": [{"name": name, "arity": arity} for name, arity in s.signature],
        "relations": {name: sorted(list(t) for t in tuples) for (name, _), tuples in zip(s.signature, s.relations)},
        "order": s.order,
    }


def structure_from_json(data) -> RelationalStructure:
    if not isinstance(data, dict):
        raise InvalidStructure("structure JSON must be an object")
    if "signature" not in data and "leq" in data:
        return poset_from_json(data).to_structure()
    try:
        n = int(data["n"])
        signature = tuple((d["name"], int(d["arity"])) for d in data["signature"])
        rels_in = data.get("relations", {})
        relations = tuple(frozenset(tuple(t) for t in rels_in.get(name, [])) for name, _ in signature)
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidStructure(f"malformed structure JSON: {exc}") from exc
    return RelationalStructure(n, signature, relations, data.get("order"))


def poset_from_json(data) -> FinitePoset:
    if isinstance(data, dict) and "signature" not in data and "leq" in data:
        matrix = data["leq"]
        if not isinstance(matrix, list) or any(not isinstance(row, list) for row in matrix):
            raise InvalidStructure("leq must be a matrix")
        return FinitePoset(tuple(tuple(bool(v) for v in row) for row in matrix))
    return FinitePoset.from_structure(structure_from_json(data))


def load_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidStructure(f"{path}: not valid JSON ({exc})") from exc


def dumps(payload) -> str:
    """Byte-stable JSON rendering used for every emitted report."""
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False)


def order_to_json(order: LinearOrder) -> list[int]:
    return list(order.sequence)


def hasse_dot(P: FinitePoset, labels: Sequence[str] | None = None, name: str = "P") -> str:
    """Hasse diagram in Graphviz dot syntax, minimal elements at the bottom."""
    labels = list(labels) if labels is not None else [str(x) for x in range(P.n)]
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=circle];"]
    for x in range(P.n):
        lines.append(f'  {x} [label="{labels[x]}"];')
    for a, b in sorted(P.covers()):
        lines.append(f"  {a} -> {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
