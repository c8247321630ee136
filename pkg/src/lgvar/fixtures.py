"""Canonical graph and function fixtures used by the CLI and the test suite."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .functions import FuncModel, KDelta, PiecewiseLinear, PolyXY
from .geometry import Point2, Segment, as_fraction, pt
from .graphs import LinearGraph, properize


def fixture_cross(arm: Fraction = Fraction(1)) -> LinearGraph:
    """Two axis segments of half-length ``arm`` crossing at the origin.

    Coordinates are rational, so the arm length is a parameter rather than
    the transcendental value a spectral example would suggest; every derived
    quantity scales linearly with it.
    """
    arm = as_fraction(arm)
    if arm <= 0:
        raise ValueError("arm length must be positive")
    return properize(
        [
            Segment(pt(-arm, 0), pt(arm, 0)),
            Segment(pt(0, -arm), pt(0, arm)),
        ]
    )


def fixture_lshape() -> LinearGraph:
    return LinearGraph([Segment(pt(0, 0), pt(1, 0)), Segment(pt(0, 0), pt(0, 1))])


def fixture_square() -> LinearGraph:
    corners = [pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)]
    return LinearGraph([Segment(corners[i], corners[(i + 1) % 4]) for i in range(4)])


def fixture_paper41() -> Tuple[LinearGraph, LinearGraph]:
    """A square with a chord to an inner leaf vs. a triangle with a pendant path.

    Both smooth to one loop plus one pendant edge, so they are homeomorphic
    with a six-vertex common refinement.
    """
    g1 = LinearGraph(
        [
            Segment(pt(-2, -2), pt(-2, 0)),
            Segment(pt(-2, 0), pt(2, 0)),
            Segment(pt(2, 0), pt(2, -2)),
            Segment(pt(2, -2), pt(-2, -2)),
            Segment(pt(2, 0), pt(0, -1)),
        ]
    )
    g2 = LinearGraph(
        [
            Segment(pt(-2, 0), pt(-2, -2)),
            Segment(pt(-2, 0), pt(2, -1)),
            Segment(pt(-2, -2), pt(2, -1)),
            Segment(pt(2, -1), pt(4, -1)),
            Segment(pt(4, -1), pt(4, Fraction(-5, 2))),
        ]
    )
    return g1, g2


def fixture_sincurve_samples(n: int = 50) -> LinearGraph:
    """Polyline through rational approximations of (t_j, t_j sin(1/t_j)).

    t_j = 2/((2j-1) pi) makes the second coordinate alternate between +t_j
    and -t_j.  The exact abscissae are transcendental; each is replaced by a
    nearby rational, which keeps the zigzag shape and the strict ordering.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    points = []
    for j in range(1, n + 1):
        t = Fraction(2 / ((2 * j - 1) * math.pi)).limit_denominator(10**9)
        y = t if j % 2 == 1 else -t
        points.append(Point2(t, y))
    return LinearGraph([Segment(points[i], points[i + 1]) for i in range(n - 1)])


def companion_function(kind: str, graph: LinearGraph) -> Optional[FuncModel]:
    """A deterministic function fixture matching a graph fixture, if any."""
    if kind == "cross":
        return PolyXY({(0, 1): 1.0}, graph)
    if kind == "lshape":
        return KDelta(graph, 0, Fraction(2, 5))
    if kind == "square":
        zigzag = [
            (Fraction(0), 0j),
            (Fraction(1, 2), 1 + 1j),
            (Fraction(1), 0j),
        ]
        flat = [(Fraction(0), 0j), (Fraction(1), 0j)]
        return PiecewiseLinear(graph, [zigzag] + [flat] * (len(graph.segments) - 1))
    return None


FIXTURE_KINDS = ("cross", "lshape", "square", "paper41", "sincurve-samples")


def emit_fixture(kind: str, arm: Fraction = Fraction(1), n: int = 50) -> Dict[str, LinearGraph]:
    """Named graphs for a fixture kind (two of them for the homeomorphic pair)."""
    if kind == "cross":
        return {"": fixture_cross(arm)}
    if kind == "lshape":
        return {"": fixture_lshape()}
    if kind == "square":
        return {"": fixture_square()}
    if kind == "paper41":
        g1, g2 = fixture_paper41()
        return {"_g1": g1, "_g2": g2}
    if kind == "sincurve-samples":
        return {"": fixture_sincurve_samples(n)}
    raise ValueError(f"unknown fixture kind {kind!r}")
