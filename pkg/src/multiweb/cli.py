"""Command-line entry point.

Subcommands cover the whole library: multiweb enumeration and traces,
Kasteleyn determinants and the determinant-equals-trace-sum check, plabic
network measurements, gadget scalarization, vertex-model characteristic
polynomials, free energy, amoebas and positivity reports.

Exit codes: 0 success (or identity verified), 1 verified failure (an identity
that was checked does not hold, or a computation could not reach the requested
accuracy), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .connection import Connection, trace_multiweb
from .grassmann import boundary_measurement, find_perfect_orientation
from .honeycomb import hexagon_patch
from .io import (
    SCHEMA,
    FormatError,
    dump_json,
    fmt_q,
    graph_from_json,
    connection_from_json,
    load_json,
    multiweb_from_json,
    multiweb_to_json,
    network_from_json,
    parse_q,
    poly_from_json,
    poly_to_json,
)
from .kasteleyn import assign_signs, build_block_kasteleyn, det_expanded, verify_main_theorem
from .laurent import LaurentPoly2
from .models import (
    ConvergenceError,
    HoneycombSpec,
    QuadraticNumber,
    amoeba_cloud,
    brute_force_2web_positivity,
    free_energy,
    gas_phase_detect,
    honeycomb_charpoly,
    positivity_test,
    sixv_charpoly,
    sixv_weights,
    twentyv_afamily,
    twentyv_charpoly,
    twentyv_weights,
)
from .samples import random_connection
from .scalar import scalarize, verify_measure_preservation
from .webs import EnumerationCapExceeded, enumerate_multiwebs, from_dict
import random as _random_mod


FORMATS = ("json", "csv", "text")


@dataclass(frozen=True)
class RunConfig:
    """Everything a single CLI invocation needs."""

    subcommand: str
    graph: str | None = None
    connection: str | None = None
    multiweb: str | None = None
    poly: str | None = None
    tol: float = 1e-4
    cap: int | None = None
    seed: int = 0
    threads: int = 1
    fmt: str = "json"
    plot: str | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.cap is not None and self.cap <= 0:
            raise ValueError("cap must be positive")
        if self.threads < 1:
            raise ValueError("threads must be >= 1")
        if self.fmt not in FORMATS:
            raise ValueError(f"format must be one of {FORMATS}")


# ------------------------------------------------------------- input helpers


def parse_matrix(text: str):
    """An inline matrix like ``[[1,0],["-1/2",1]]`` with rational entries."""
    import json as _json

    try:
        rows = _json.loads(text)
    except _json.JSONDecodeError as exc:
        raise FormatError(f"bad matrix {text!r}: {exc}") from None
    if (not isinstance(rows, list) or not rows
            or not all(isinstance(r, list) and r for r in rows)):
        raise FormatError(f"bad matrix {text!r}: expected a list of rows")
    return [[parse_q(x) for x in row] for row in rows]


def _load_graph(cfg: RunConfig):
    if not cfg.graph:
        raise FormatError("this subcommand needs --graph")
    return graph_from_json(load_json(cfg.graph))


def _load_connection(cfg: RunConfig, g):
    if not cfg.connection:
        raise FormatError("this subcommand needs --connection (a file or 'random')")
    if cfg.connection == "random":
        return random_connection(g, _random_mod.Random(cfg.seed))
    return Connection(connection_from_json(load_json(cfg.connection)))


def _load_poly(cfg: RunConfig) -> LaurentPoly2:
    if not cfg.poly:
        raise FormatError("this subcommand needs --poly")
    return poly_from_json(load_json(cfg.poly))


def _parse_cells(text: str) -> list[tuple[int, int]]:
    """Hexagon cells like ``0,0;1,0``."""
    cells = []
    for chunk in text.split(";"):
        try:
            i, j = chunk.split(",")
            cells.append((int(i), int(j)))
        except ValueError:
            raise FormatError(f"bad patch cell {chunk!r}: expected i,j") from None
    return cells


# ------------------------------------------------------------ output helpers


def _jsonify(obj):
    """Recursively convert report values to JSON-safe types; rationals become
    "p/q" strings, exact algebraic numbers their readable string form."""
    if isinstance(obj, Fraction):
        return fmt_q(obj)
    if isinstance(obj, QuadraticNumber):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, float):
        return obj
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    return str(obj)


def _emit(doc: dict, cfg: RunConfig, csv_rows, text_lines) -> None:
    if cfg.fmt == "json":
        print(dump_json(doc))
    elif cfg.fmt == "csv":
        for row in csv_rows:
            print(",".join(str(x) for x in row))
    else:
        for line in text_lines:
            print(line)


def _emit_poly(P, cfg: RunConfig) -> None:
    if not isinstance(P, LaurentPoly2):  # plane-graph determinants are scalars
        P = LaurentPoly2({(0, 0): Fraction(P)})
    doc = poly_to_json(P)
    csv_rows = [("i", "j", "coeff")] + [(i, j, fmt_q(c)) for i, j, c in P.terms()]
    _emit(doc, cfg, csv_rows, [str(P)])


# ---------------------------------------------------------------- subcommands


def _cmd_enumerate(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    webs = enumerate_multiwebs(g, cap=cfg.cap)
    doc = {
        "schema": SCHEMA,
        "count": len(webs),
        "multiwebs": [multiweb_to_json(w.as_dict()) for w in webs],
    }
    csv_rows = [("web", "edge", "m")]
    for idx, w in enumerate(webs):
        for e, k in sorted(w.as_dict().items()):
            if k:
                csv_rows.append((idx, e, k))
    text = [f"{len(webs)} multiwebs"] + [
        " ".join(f"{e}:{k}" for e, k in sorted(w.as_dict().items()) if k) or "(empty)"
        for w in webs
    ]
    _emit(doc, cfg, csv_rows, text)
    return 0


def _cmd_trace(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    conn = _load_connection(cfg, g)
    if cfg.multiweb:
        m = from_dict(g, multiweb_from_json(load_json(cfg.multiweb)))
        t = trace_multiweb(m, conn)
        _emit({"schema": SCHEMA, "trace": fmt_q(t)}, cfg,
              [("trace",), (fmt_q(t),)], [fmt_q(t)])
        return 0
    webs = enumerate_multiwebs(g, cap=cfg.cap)
    traces = [trace_multiweb(w, conn) for w in webs]
    total = sum(traces, Fraction(0))
    doc = {
        "schema": SCHEMA,
        "traces": [
            {"multiweb": multiweb_to_json(w.as_dict()), "trace": fmt_q(t)}
            for w, t in zip(webs, traces)
        ],
        "total": fmt_q(total),
    }
    csv_rows = [("web", "trace")] + [(i, fmt_q(t)) for i, t in enumerate(traces)]
    text = [f"web {i}: {fmt_q(t)}" for i, t in enumerate(traces)] + [f"total: {fmt_q(total)}"]
    _emit(doc, cfg, csv_rows, text)
    return 0


def _cmd_det(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    conn = _load_connection(cfg, g)
    K = build_block_kasteleyn(g, conn, assign_signs(g))
    _emit_poly(det_expanded(K), cfg)
    return 0


def _cmd_verify_main(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    conn = _load_connection(cfg, g)
    rep = verify_main_theorem(g, conn, cap=cfg.cap)
    doc = {"schema": SCHEMA} | _jsonify(rep)
    csv_rows = [("key", "value")] + [(k, _jsonify(v)) for k, v in rep.items()]
    text = [f"lhs = {fmt_q(rep['lhs'])}", f"rhs = {fmt_q(rep['rhs'])}",
            f"sign = {fmt_q(rep['sign'])}", f"webs = {rep['webs']}",
            f"ok = {str(rep['ok']).lower()}"]
    _emit(doc, cfg, csv_rows, text)
    return 0 if rep["ok"] else 1


def _cmd_pluckers(cfg: RunConfig) -> int:
    if not cfg.graph:
        raise FormatError("this subcommand needs --graph (a network document)")
    net = network_from_json(load_json(cfg.graph))
    po = find_perfect_orientation(net)
    pt = boundary_measurement(net, po)
    minors = {",".join(map(str, k)): fmt_q(v) for k, v in sorted(pt.plucker.items())}
    doc = {
        "schema": SCHEMA,
        "matrix": [[fmt_q(x) for x in row] for row in pt.matrix],
        "pluckers": minors,
    }
    csv_rows = [("minor", "value")] + [(k.replace(",", " "), v) for k, v in minors.items()]
    text = [f"D[{k}] = {v}" for k, v in minors.items()]
    _emit(doc, cfg, csv_rows, text)
    return 0


def _cmd_scalarize(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    conn = _load_connection(cfg, g)
    s = scalarize(g, conn)
    doc = {
        "schema": SCHEMA,
        "weights": {str(e): fmt_q(wt) for e, wt in sorted(s.weights.items())},
        "gauges": {str(b): [[fmt_q(x) for x in row] for row in m]
                   for b, m in sorted(s.gauges.items())},
        "slots": {str(b): {str(e): slot for e, slot in sorted(sl.items())}
                  for b, sl in sorted(s.slots.items())},
    }
    csv_rows = [("edge", "weight")] + [(e, fmt_q(wt)) for e, wt in sorted(s.weights.items())]
    text = [f"{len(s.weights)} scalar edge weights"] + [
        f"edge {e}: {fmt_q(wt)}" for e, wt in sorted(s.weights.items())
    ]
    _emit(doc, cfg, csv_rows, text)
    return 0


def _cmd_verify_scalar(cfg: RunConfig) -> int:
    g = _load_graph(cfg)
    conn = _load_connection(cfg, g)
    s = scalarize(g, conn)
    rep = verify_measure_preservation(s, cap=cfg.cap)
    doc = {
        "schema": SCHEMA,
        "webs": len(rep["webs"]),
        "all_equal": rep["all_equal"],
        "fiber_total": fmt_q(rep["fiber_total"]),
        "trace_total": fmt_q(rep["trace_total"]),
    }
    csv_rows = [("key", "value")] + [(k, v) for k, v in doc.items() if k != "schema"]
    text = [f"webs = {doc['webs']}", f"fiber_total = {doc['fiber_total']}",
            f"trace_total = {doc['trace_total']}",
            f"all_equal = {str(doc['all_equal']).lower()}"]
    _emit(doc, cfg, csv_rows, text)
    return 0 if rep["all_equal"] else 1


def _cmd_charpoly(cfg: RunConfig) -> int:
    model = cfg.extras["model"]
    if model == "6v":
        if cfg.extras.get("matrix") is None:
            raise FormatError("charpoly 6v needs --matrix (2x4)")
        P = sixv_charpoly(sixv_weights(parse_matrix(cfg.extras["matrix"])))
    elif model == "20v":
        if cfg.extras.get("a") is not None:
            _, P = twentyv_afamily(parse_q(cfg.extras["a"]))
        elif cfg.extras.get("matrix") is not None:
            P = twentyv_charpoly(twentyv_weights(parse_matrix(cfg.extras["matrix"])))
        else:
            raise FormatError("charpoly 20v needs --matrix (3x6) or --a")
    else:
        if cfg.extras.get("A") is None or cfg.extras.get("B") is None:
            raise FormatError("charpoly honeycomb needs --A and --B (2x2)")
        P = honeycomb_charpoly(
            HoneycombSpec(parse_matrix(cfg.extras["A"]), parse_matrix(cfg.extras["B"])))
    _emit_poly(P, cfg)
    return 0


def _cmd_free_energy(cfg: RunConfig) -> int:
    P = _load_poly(cfg)
    fe = free_energy(P, tol=cfg.tol)
    if cfg.plot:
        from .plotting import plot_torus_integrand

        plot_torus_integrand(P, cfg.plot)
    doc = {"schema": SCHEMA, "value": fe.value, "error": fe.error}
    csv_rows = [("value", "error"), (repr(fe.value), repr(fe.error))]
    _emit(doc, cfg, csv_rows, [f"{fe.value!r} ± {fe.error!r}"])
    return 0


def _cmd_amoeba(cfg: RunConfig) -> int:
    P = _load_poly(cfg)
    cloud = amoeba_cloud(P)
    gas = gas_phase_detect(P, cloud)
    if cfg.plot:
        from .plotting import plot_amoeba

        plot_amoeba(cloud, cfg.plot, witness=gas["witness"])
    doc = {
        "schema": SCHEMA,
        "points": [[x, y] for x, y in cloud.points.tolist()],
        "skipped_slices": cloud.skipped_slices,
        "gas": _jsonify(gas),
    }
    csv_rows = [("x", "y")] + [(repr(x), repr(y)) for x, y in cloud.points.tolist()]
    text = [
        f"{len(cloud.points)} amoeba points ({cloud.skipped_slices} slices skipped)",
        f"bounded complement component: {str(gas['has_bounded_hole']).lower()}"
        + (f" (witness {gas['witness']}, area {gas['hole_area']:.4f})"
           if gas["has_bounded_hole"] else ""),
    ]
    _emit(doc, cfg, csv_rows, text)
    return 0


def _cmd_positivity(cfg: RunConfig) -> int:
    if cfg.extras.get("A") is None or cfg.extras.get("B") is None:
        raise FormatError("positivity needs --A and --B (2x2)")
    h = HoneycombSpec(parse_matrix(cfg.extras["A"]), parse_matrix(cfg.extras["B"]))
    rep = positivity_test(h)
    doc = {
        "schema": SCHEMA,
        "verdict": rep["verdict"],
        "conjectural": rep["conjectural"],
        "eigenvalues": _jsonify(rep["eigenvalues"]),
        "witness": _jsonify(rep["witness"]),
    }
    status = 0
    brute = None
    if cfg.extras.get("patch"):
        patch = hexagon_patch(_parse_cells(cfg.extras["patch"]))
        brute = brute_force_2web_positivity(h, patch, cap=cfg.cap)
        doc["brute_force"] = {
            "all_positive": brute["all_positive"],
            "min_trace": fmt_q(brute["min_trace"]),
            "witness": None if brute["witness"] is None else multiweb_to_json(brute["witness"]),
            "webs_checked": brute["webs_checked"],
        }
        if not brute["all_positive"]:
            status = 1
    csv_rows = [("key", "value"), ("verdict", rep["verdict"]),
                ("conjectural", rep["conjectural"])]
    for name, e in rep["eigenvalues"].items():
        csv_rows.append((f"eigenvalues_{name}", f"{e['approx'][0]!r};{e['approx'][1]!r}"))
    text = [f"verdict = {rep['verdict']}"
            + (" (conjectural)" if rep["conjectural"] else "")]
    for name, e in rep["eigenvalues"].items():
        shown = (", ".join(str(v) for v in e["exact"]) if e["exact"] is not None
                 else ", ".join(repr(v) for v in e["approx"]))
        text.append(f"{name}: {e['pattern']} ({shown})")
    if brute is not None:
        csv_rows.append(("brute_all_positive", brute["all_positive"]))
        csv_rows.append(("brute_min_trace", fmt_q(brute["min_trace"])))
        text.append(
            f"brute force: {brute['webs_checked']} webs, min trace "
            f"{fmt_q(brute['min_trace'])}, all_positive = "
            f"{str(brute['all_positive']).lower()}")
    _emit(doc, cfg, csv_rows, text)
    return status


_DISPATCH = {
    "enumerate": _cmd_enumerate,
    "trace": _cmd_trace,
    "det": _cmd_det,
    "verify-main": _cmd_verify_main,
    "pluckers": _cmd_pluckers,
    "scalarize": _cmd_scalarize,
    "verify-scalar": _cmd_verify_scalar,
    "charpoly": _cmd_charpoly,
    "free-energy": _cmd_free_energy,
    "amoeba": _cmd_amoeba,
    "positivity": _cmd_positivity,
}


def run(cfg: RunConfig) -> int:
    """Execute one configured invocation; returns the process exit status."""
    try:
        return _DISPATCH[cfg.subcommand](cfg)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EnumerationCapExceeded, ConvergenceError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


# -------------------------------------------------------------------- parser


def _add_common(sub, *, graph=False, conn=False, poly=False, cap=False,
                tol=False, plot=False, default_fmt="json"):
    if graph:
        sub.add_argument("--graph", required=True, help="input JSON document")
    if conn:
        sub.add_argument("--connection", required=True,
                         help="connection JSON file, or 'random'")
        sub.add_argument("--seed", type=int, default=0,
                         help="seed for random connections (default 0)")
    if poly:
        sub.add_argument("--poly", required=True, help="Laurent polynomial JSON file")
    if cap:
        sub.add_argument("--cap", type=int, default=None,
                         help="enumeration cap (default: MULTIWEB_CAP or built-in)")
    if tol:
        sub.add_argument("--tol", type=float, default=1e-4, help="numeric tolerance")
    if plot:
        sub.add_argument("--plot", metavar="FILE",
                         help="also render a figure (png/pdf) to FILE")
    sub.add_argument("--threads", type=int, default=1,
                     help="worker threads for vectorized kernels; results are "
                          "independent of this value")
    sub.add_argument("--format", dest="fmt", choices=FORMATS, default=default_fmt)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="multiweb",
        description="Multiwebs, Kasteleyn determinants and free-fermionic vertex models.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    s = subs.add_parser("enumerate", help="list all multiwebs of a graph")
    _add_common(s, graph=True, cap=True)

    s = subs.add_parser("trace", help="traces of one or all multiwebs")
    _add_common(s, graph=True, conn=True, cap=True)
    s.add_argument("--multiweb", help="JSON file with one multiweb (else all)")

    s = subs.add_parser("det", help="expanded block Kasteleyn determinant")
    _add_common(s, graph=True, conn=True)

    s = subs.add_parser("verify-main", help="check det K = sign * sum of traces")
    _add_common(s, graph=True, conn=True, cap=True)

    s = subs.add_parser("pluckers", help="boundary measurement minors of a network")
    _add_common(s, graph=True)

    s = subs.add_parser("scalarize", help="scalar dimer model matching a rank-2 connection")
    _add_common(s, graph=True, conn=True)

    s = subs.add_parser("verify-scalar", help="check fiber weights equal traces")
    _add_common(s, graph=True, conn=True, cap=True)

    s = subs.add_parser("charpoly", help="vertex-model characteristic polynomial")
    s.add_argument("model", choices=("6v", "20v", "honeycomb"))
    s.add_argument("--matrix", help="inline weight matrix (2x4 for 6v, 3x6 for 20v)")
    s.add_argument("--A", help="inline 2x2 matrix (honeycomb)")
    s.add_argument("--B", help="inline 2x2 matrix (honeycomb)")
    s.add_argument("--a", help="deformation parameter for the 20v family")
    _add_common(s)

    s = subs.add_parser("free-energy", help="normalized free energy of a spectral curve")
    _add_common(s, poly=True, tol=True, plot=True, default_fmt="text")

    s = subs.add_parser("amoeba", help="amoeba point cloud and gas-phase report")
    _add_common(s, poly=True, plot=True, default_fmt="csv")

    s = subs.add_parser("positivity", help="trace-positivity report for a honeycomb pair")
    s.add_argument("--A", required=True, help="inline 2x2 matrix")
    s.add_argument("--B", required=True, help="inline 2x2 matrix")
    s.add_argument("--patch", help="hexagon cells 'i,j;i,j' for a brute-force check")
    _add_common(s, cap=True)

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    known = {"subcommand", "graph", "connection", "multiweb", "poly", "tol",
             "cap", "seed", "threads", "fmt", "plot"}
    base = {k: v for k, v in vars(args).items() if k in known}
    extras = {k: v for k, v in vars(args).items() if k not in known and k != "func"}
    return RunConfig(extras=extras, **base)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return run(cfg)
    except BrokenPipeError:  # e.g. piped into head
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0


if __name__ == "__main__":
    sys.exit(main())
