"""Batch command line front end.

Every command reads JSON files (or inline JSON flags), writes one JSON payload
to stdout and diagnostics to stderr.  Exit codes: 0 success, 1 domain failure
(disconnected union, off-graph point, impossible request), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .errors import LgvarError
from .fixtures import FIXTURE_KINDS, companion_function, emit_fixture
from .formats import (
    canonical_dumps,
    function_dict,
    graph_dict,
    line_dict,
    loads_exact,
    parse_function,
    parse_point_list,
    parse_segments,
)
from .functions import PiecewiseLinear
from .geometry import as_fraction
from .graphs import LinearGraph, graph_homeomorphic, properize
from .transport import build_homeo, transport, verify_isometry
from .variation import (
    PointList,
    SearchBudget,
    check_decomposition,
    cvar,
    divergence_demo,
    lg_norm,
    var_lower,
    var_upper,
    variation_factor,
)


class _ParseFailure(Exception):
    """Input could not be read: malformed JSON, rationals, or structure."""


def _read_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _ParseFailure(f"cannot read {path}: {exc}") from exc
    try:
        return loads_exact(text)
    except (json.JSONDecodeError, ValueError) as exc:
        raise _ParseFailure(f"{path}: {exc}") from exc


def _load_graph(path: str, do_properize: bool) -> LinearGraph:
    payload = _read_json(path)
    try:
        raw = parse_segments(payload)
    except (ValueError, TypeError, KeyError) as exc:
        raise _ParseFailure(f"{path}: {exc}") from exc
    return properize(raw) if do_properize else LinearGraph(raw)


def _load_function(path: str, graph: LinearGraph):
    payload = _read_json(path)
    try:
        return parse_function(payload, graph)
    except (TypeError, KeyError) as exc:
        raise _ParseFailure(f"{path}: {exc}") from exc


def _parse_inline_points(text: str):
    try:
        payload = loads_exact(text)
        return parse_point_list(payload)
    except (json.JSONDecodeError, ValueError, TypeError) as exc:
        raise _ParseFailure(f"--list: {exc}") from exc


def _parse_budget(text: str) -> SearchBudget:
    try:
        parts = [int(x) for x in text.split(",")]
        if len(parts) == 2:
            return SearchBudget(parts[0], parts[1])
        if len(parts) == 3:
            return SearchBudget(parts[0], parts[1], parts[2])
    except ValueError:
        pass
    raise _ParseFailure(f'--budget expects "restarts,moves[,max_points]", got {text!r}')


def _cmd_properize(args) -> dict:
    g = _load_graph(args.graph, do_properize=True)
    payload = graph_dict(g)
    if args.out:
        Path(args.out).write_text(canonical_dumps(payload), encoding="utf-8")
    return {"graph": payload, "segment_count": len(g.segments), "vertex_count": len(g.vertices)}


def _cmd_vf(args) -> dict:
    points = _parse_inline_points(args.list)
    report = variation_factor(PointList(tuple(points)))
    return {
        "vf": report.value,
        "n": report.n,
        "witness_line": line_dict(report.witness),
        "class_counts": report.class_counts,
    }


def _cmd_cvar(args) -> dict:
    g = _load_graph(args.graph, not args.no_properize)
    f = _load_function(args.function, g)
    points = _parse_inline_points(args.list)
    lst = PointList.on_graph(points, g)
    return {"cvar": cvar(f, lst), "n": lst.n}


def _cmd_lgnorm(args) -> dict:
    g = _load_graph(args.graph, not args.no_properize)
    f = _load_function(args.function, g)
    report = lg_norm(f, g, budget=_parse_budget(args.budget), seed=args.seed)
    out = report.as_dict()
    out["seed"] = args.seed
    return out


def _cmd_varbounds(args) -> dict:
    g = _load_graph(args.graph, not args.no_properize)
    f = _load_function(args.function, g)
    lower, witness = var_lower(f, g, budget=_parse_budget(args.budget), seed=args.seed)
    return {
        "var_lower": lower,
        "var_upper": var_upper(f, g),
        "witness": [[str(p.x), str(p.y)] for p in witness.points],
        "seed": args.seed,
    }


def _cmd_decomp(args) -> dict:
    g = _load_graph(args.graph, not args.no_properize)
    f = _load_function(args.function, g)
    try:
        part = [int(x) for x in args.split.split(",")]
    except ValueError as exc:
        raise _ParseFailure(f"--split: {exc}") from exc
    return check_decomposition(f, g, part).as_dict()


def _cmd_homeo(args) -> dict:
    g1 = _load_graph(args.graph1, not args.no_properize)
    g2 = _load_graph(args.graph2, not args.no_properize)
    cert = graph_homeomorphic(g1, g2)
    if cert is None:
        return {"homeomorphic": False}
    return {
        "homeomorphic": True,
        "refined_source": graph_dict(cert.source),
        "refined_target": graph_dict(cert.target),
        "refined_edges": len(cert.source.segments),
        "vertex_bijection": [[i, j] for i, j in enumerate(cert.vertex_map)],
        "edge_bijection": [[k, t] for k, t in enumerate(cert.edge_map)],
    }


def _cmd_transport(args) -> dict:
    g1 = _load_graph(args.graph1, not args.no_properize)
    g2 = _load_graph(args.graph2, not args.no_properize)
    f = _load_function(args.function, g1)
    cert = graph_homeomorphic(g1, g2)
    if cert is None:
        raise LgvarError("the two unions are not homeomorphic; nothing to transport")
    phi = build_homeo(cert)
    g = transport(f, phi)
    if not isinstance(g, PiecewiseLinear):
        raise LgvarError(
            "only piecewise-linear models have a file form after transport; "
            "use `verify` for polynomial models"
        )
    payload = {"function": function_dict(g), "target_graph": graph_dict(phi.target)}
    if args.out:
        Path(args.out).write_text(canonical_dumps(payload["function"]), encoding="utf-8")
    return payload


def _cmd_verify(args) -> dict:
    g1 = _load_graph(args.graph1, not args.no_properize)
    g2 = _load_graph(args.graph2, not args.no_properize)
    f = _load_function(args.function, g1)
    cert = graph_homeomorphic(g1, g2)
    if cert is None:
        raise LgvarError("the two unions are not homeomorphic")
    phi = build_homeo(cert)
    report = verify_isometry(f, phi, samples=args.samples, seed=args.seed, var_tol=args.tolerance)
    out = report.as_dict()
    out["homeomorphic"] = True
    out["seed"] = args.seed
    return out


def _cmd_demo_divergence(args) -> dict:
    return divergence_demo(args.n).as_dict()


def _cmd_emit_fixture(args) -> dict:
    graphs = emit_fixture(args.kind, arm=as_fraction(args.arm), n=args.n)
    written = []
    for suffix, g in graphs.items():
        if suffix:
            base = Path(args.out)
            path = base.with_name(base.stem + suffix + (base.suffix or ".json"))
        else:
            path = Path(args.out)
        path.write_text(canonical_dumps(graph_dict(g)), encoding="utf-8")
        written.append(str(path))
    if args.func_out:
        f = companion_function(args.kind, next(iter(graphs.values())))
        if f is None:
            raise LgvarError(f"fixture kind {args.kind!r} has no companion function")
        Path(args.func_out).write_text(canonical_dumps(function_dict(f)), encoding="utf-8")
        written.append(args.func_out)
    return {"written": written}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgvar",
        description="Variation norms, homeomorphism and transport for unions of plane segments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, graph2=False, function=False):
        p.add_argument("graph" if not graph2 else "graph1")
        if graph2:
            p.add_argument("graph2")
        if function:
            p.add_argument("function")
        p.add_argument("--no-properize", action="store_true", help="trust the file's segmentation")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--budget", default="64,512", help="restarts,moves[,max_points]")
        p.add_argument("--tolerance", type=float, default=1e-9)

    p = sub.add_parser("properize", help="rebuild a segment list as a proper representation")
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_properize)

    p = sub.add_parser("vf", help="variation factor of an ordered point list")
    p.add_argument("--list", required=True, help="JSON array of [x, y] pairs")
    p.set_defaults(handler=_cmd_vf)

    p = sub.add_parser("cvar", help="curve variation of a function over a point list")
    add_common(p, function=True)
    p.add_argument("--list", required=True)
    p.set_defaults(handler=_cmd_cvar)

    p = sub.add_parser("lgnorm", help="norm report: sup, variations, lg, variation bracket")
    add_common(p, function=True)
    p.set_defaults(handler=_cmd_lgnorm)

    p = sub.add_parser("varbounds", help="two-sided variation bracket only")
    add_common(p, function=True)
    p.set_defaults(handler=_cmd_varbounds)

    p = sub.add_parser("decomp", help="norm sandwich for a two-part split")
    add_common(p, function=True)
    p.add_argument("--split", required=True, help="comma-separated edge indices of part one")
    p.set_defaults(handler=_cmd_decomp)

    p = sub.add_parser("homeo", help="decide homeomorphism; emit matched refinements")
    add_common(p, graph2=True)
    p.set_defaults(handler=_cmd_homeo)

    p = sub.add_parser("transport", help="carry a function across the homeomorphism")
    add_common(p, graph2=True, function=True)
    p.add_argument("--out")
    p.set_defaults(handler=_cmd_transport)

    p = sub.add_parser("verify", help="isometry and morphism checks for the transport")
    add_common(p, graph2=True, function=True)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("demo-divergence", help="partial sums of the unbounded-variation example")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=_cmd_demo_divergence)

    p = sub.add_parser("emit-fixture", help="write canonical graph fixtures")
    p.add_argument("kind", choices=FIXTURE_KINDS)
    p.add_argument("--out", required=True)
    p.add_argument("--arm", default="1", help="cross arm length (rational)")
    p.add_argument("--n", type=int, default=50, help="sample count for sincurve-samples")
    p.add_argument("--func-out", help="also write the fixture's companion function")
    p.set_defaults(handler=_cmd_emit_fixture)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        payload = args.handler(args)
    except _ParseFailure as exc:
        sys.stdout.write(canonical_dumps({"error": {"kind": "parse", "message": str(exc)}}))
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (LgvarError, ValueError) as exc:
        diag = {"kind": "domain", "message": str(exc)}
        components = getattr(exc, "components", None)
        if components:
            diag["components"] = components
        sys.stdout.write(canonical_dumps({"error": diag}))
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(canonical_dumps(payload))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
