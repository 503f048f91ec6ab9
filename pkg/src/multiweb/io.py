"""JSON (de)serialization for graphs, connections, multiwebs and polynomials.

All documents carry a top-level ``"schema": 1``.  Rational numbers travel as
strings like ``"-3/2"`` (``str`` of a reduced Fraction), which keeps output
byte-stable across platforms.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .graph import DISK, PLANE, TORUS, Edge, PlanarGraph, Vertex
from .laurent import LaurentPoly2

SCHEMA = 1


class FormatError(ValueError):
    """Malformed input document."""


def fmt_q(x) -> str:
    return str(Fraction(x))


def parse_q(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise FormatError(f"bad rational {s!r}: {exc}") from None


def _require(doc: dict, key: str):
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    return doc[key]


# ---------------------------------------------------------------- graphs


def graph_to_json(g: PlanarGraph) -> dict:
    doc: dict[str, Any] = {
        "schema": SCHEMA,
        "surface": g.surface,
        "vertices": [
            {
                "id": v.id,
                "color": v.color,
                "n": v.n,
                "rotation": list(v.rotation),
                "cilium": v.cilium,
            }
            for v in g.vertices
        ],
        "edges": [
            {"id": e.id, "black": e.black, "white": e.white, "homology": list(e.homology)}
            for e in g.edges
        ],
    }
    if g.boundary:
        doc["boundary"] = [{"v": v, "d": d} for v, d in sorted(g.boundary.items())]
    return doc


def graph_from_json(doc: dict) -> PlanarGraph:
    surface = _require(doc, "surface")
    if surface not in (DISK, PLANE, TORUS):
        raise FormatError(f"unknown surface {surface!r}")
    try:
        vertices = [
            Vertex(
                id=int(v["id"]),
                color=str(v["color"]),
                n=int(v["n"]),
                rotation=tuple(int(e) for e in v["rotation"]),
                cilium=None if v.get("cilium") is None else int(v["cilium"]),
            )
            for v in _require(doc, "vertices")
        ]
        edges = [
            Edge(
                id=int(e["id"]),
                black=int(e["black"]),
                white=int(e["white"]),
                homology=tuple(int(x) for x in e.get("homology", (0, 0))),  # type: ignore[arg-type]
            )
            for e in _require(doc, "edges")
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad graph document: {exc}") from None
    boundary = {int(b["v"]): int(b["d"]) for b in doc.get("boundary", [])}
    return PlanarGraph(vertices, edges, surface, boundary)


# ---------------------------------------------------------------- connections


def connection_to_json(matrices: dict[int, tuple[tuple[Fraction, ...], ...]]) -> dict:
    return {
        "schema": SCHEMA,
        "matrices": {
            str(eid): [[fmt_q(x) for x in row] for row in m] for eid, m in sorted(matrices.items())
        },
    }


def connection_from_json(doc: dict) -> dict[int, tuple[tuple[Fraction, ...], ...]]:
    out = {}
    for eid, rows in _require(doc, "matrices").items():
        out[int(eid)] = tuple(tuple(parse_q(x) for x in row) for row in rows)
    return out


# ---------------------------------------------------------------- multiwebs


def multiweb_to_json(m: dict[int, int]) -> list[dict]:
    return [{"edge": e, "m": k} for e, k in sorted(m.items()) if k]


def multiweb_from_json(doc) -> dict[int, int]:
    try:
        return {int(item["edge"]): int(item["m"]) for item in doc}
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad multiweb document: {exc}") from None


# ---------------------------------------------------------------- networks


def network_to_json(net) -> dict:
    doc = graph_to_json(net.graph)
    doc["weights"] = {str(e): fmt_q(w) for e, w in sorted(net.weights.items())}
    doc["boundary_order"] = list(net.boundary_order)
    if net.positions:
        doc["positions"] = {
            str(v): [fmt_q(x), fmt_q(y)] for v, (x, y) in sorted(net.positions.items())
        }
    return doc


def network_from_json(doc: dict):
    from .grassmann import PlabicNetwork  # local import to avoid a cycle

    g = graph_from_json(doc)
    weights = {int(e): parse_q(w) for e, w in _require(doc, "weights").items()}
    order = tuple(int(v) for v in _require(doc, "boundary_order"))
    positions = {
        int(v): (parse_q(xy[0]), parse_q(xy[1])) for v, xy in doc.get("positions", {}).items()
    }
    return PlabicNetwork(g, weights, order, positions)


# ---------------------------------------------------------------- polynomials


def poly_to_json(p: LaurentPoly2) -> dict:
    """Newton layout: lexicographically sorted (i, j, coefficient) triples."""
    return {"schema": SCHEMA, "terms": [[i, j, fmt_q(c)] for i, j, c in p.terms()]}


def poly_from_json(doc: dict) -> LaurentPoly2:
    try:
        return LaurentPoly2({(int(i), int(j)): parse_q(c) for i, j, c in _require(doc, "terms")})
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad polynomial document: {exc}") from None


# ---------------------------------------------------------------- files


def load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from None


def dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)
