"""Canonical JSON forms for graphs, functions, and reports.

Graph files carry coordinates as exact strings ("p/q" or a decimal literal);
numeric literals in the JSON are also converted exactly.  Serialization is
canonical (sorted keys, lowest-terms rationals, trailing newline) so that
parse followed by re-emit is byte-identical.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import List, Sequence, Tuple

from .functions import FuncModel, KDelta, PiecewiseLinear, PolyXY
from .geometry import Point2, Segment, as_fraction
from .graphs import LinearGraph


def canonical_dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def loads_exact(text: str):
    """JSON parse with numeric literals converted to exact rationals."""
    return json.loads(text, parse_float=Fraction)


def _coord(value) -> Fraction:
    return as_fraction(value)


def parse_segments(payload) -> List[Segment]:
    if not isinstance(payload, dict) or "segments" not in payload:
        raise ValueError('graph file must be an object with a "segments" key')
    segments = []
    for entry in payload["segments"]:
        (ax, ay), (bx, by) = entry
        segments.append(Segment(Point2(_coord(ax), _coord(ay)), Point2(_coord(bx), _coord(by))))
    return segments


def graph_dict(g: LinearGraph) -> dict:
    return {
        "segments": [
            [[str(seg.a.x), str(seg.a.y)], [str(seg.b.x), str(seg.b.y)]] for seg in g.segments
        ]
    }


def parse_point_list(payload) -> List[Point2]:
    return [Point2(_coord(x), _coord(y)) for x, y in payload]


def parse_function(payload, graph: LinearGraph) -> FuncModel:
    if not isinstance(payload, dict) or "type" not in payload:
        raise ValueError('function file must be an object with a "type" key')
    kind = payload["type"]
    if kind == "polyxy":
        coeffs = {}
        for n, m, re, im in payload["coeffs"]:
            coeffs[(int(n), int(m))] = complex(float(re), float(im))
        return PolyXY(coeffs, graph)
    if kind == "pwl":
        data = [
            [(as_fraction(t), complex(float(re), float(im))) for t, re, im in row]
            for row in payload["segments"]
        ]
        return PiecewiseLinear(graph, data)
    if kind == "kdelta":
        return KDelta(graph, int(payload["carrier"]), as_fraction(payload["delta"]))
    raise ValueError(f"unknown function type {kind!r}")


def function_dict(f: FuncModel) -> dict:
    return f.to_json_dict()


def line_dict(line) -> dict:
    return {
        "anchor": [str(line.anchor.x), str(line.anchor.y)],
        "direction": [str(line.direction.x), str(line.direction.y)],
    }
