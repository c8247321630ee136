"""Complex-valued function models on a segment union.

Three constructors: bivariate polynomials, per-segment piecewise-linear
profiles, and the near-indicator bump of one segment.  Values are complex
doubles while all parameters stay rational.

Exactness discipline for the piecewise-linear family: the chord magnitude of
every breakpoint interval is a float, but totals accumulate those floats as
exact rationals (`Fraction(d)` is exact) and convert once at the end.  This
makes variation totals independent of how the union is re-cut into segments,
bit for bit, which is what the representation-independence guarantees need.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import OffGraphError
from .geometry import Point2, Segment, param_point, tile_segment
from .graphs import LinearGraph


def exact_sum(values) -> float:
    """Sum floats without intermediate rounding; one final conversion."""
    return float(sum(map(Fraction, values), Fraction(0)))


def _adaptive_variation(sample, tol: float, min_depth: int = 4, max_depth: int = 26):
    """Chord-sum variation of t -> sample(t) on [0,1] by interval refinement.

    Returns (cuts, value): the partition reached and the exact-accumulated
    chord total over it.  The total is nondecreasing under refinement, so the
    stopping rule compares the local gain of one extra bisection against a
    budget that halves with depth.
    """
    chords: List[float] = []
    cuts: List[Fraction] = [Fraction(0)]

    def rec(a: Fraction, fa: complex, b: Fraction, fb: complex, budget: float, depth: int):
        m = (a + b) / 2
        fm = sample(m)
        s1 = abs(fm - fa)
        s2 = abs(fb - fm)
        if depth >= max_depth or (depth >= min_depth and (s1 + s2) - abs(fb - fa) <= budget):
            chords.append(s1)
            chords.append(s2)
            cuts.append(m)
            cuts.append(b)
            return
        rec(a, fa, m, fm, budget / 2, depth + 1)
        rec(m, fm, b, fb, budget / 2, depth + 1)

    f0 = sample(Fraction(0))
    f1 = sample(Fraction(1))
    rec(Fraction(0), f0, Fraction(1), f1, tol, 0)
    return cuts, exact_sum(chords)


def _refine_sup(sample_abs, iterations: int = 12) -> float:
    """Grid maximum of |f| on [0,1] with shrinking local refinement."""
    grid = 64
    best = -1.0
    best_t = Fraction(0)
    for k in range(grid + 1):
        t = Fraction(k, grid)
        v = sample_abs(t)
        if v > best:
            best, best_t = v, t
    h = Fraction(1, grid)
    for _ in range(iterations):
        lo = max(Fraction(0), best_t - h)
        hi = min(Fraction(1), best_t + h)
        step = (hi - lo) / 16
        for k in range(17):
            t = lo + k * step
            v = sample_abs(t)
            if v > best:
                best, best_t = v, t
        h = h / 8
    return best


class FuncModel:
    """Shared surface of the function models."""

    graph: LinearGraph

    def evaluate(self, p: Point2) -> complex:
        raise NotImplementedError

    def sup_on(self, seg: Segment) -> float:
        raise NotImplementedError

    def variation_exact(self, seg: Segment) -> Optional[Fraction]:
        """Exact rational variation total when the model supports it."""
        return None

    def variation_partition(self, seg: Segment, tol: float = 1e-9):
        """(cut parameters, chord-total) of the variation along ``seg``."""
        return _adaptive_variation(lambda t: self.evaluate(param_point(seg, t)), tol)

    def seed_params(self, edge_index: int) -> List[Fraction]:
        return [Fraction(k, 32) for k in range(33)]

    def to_json_dict(self) -> dict:
        raise NotImplementedError


class PiecewiseLinear(FuncModel):
    """Continuous, per-segment piecewise-linear values.

    ``data[j]`` lists (t, value) breakpoints of segment j of the carrier
    graph, with t covering [0,1] and values agreeing wherever segments share a
    vertex.  Evaluation works at any point of the union, independently of how
    the union is later re-segmented.
    """

    def __init__(self, graph: LinearGraph, data: Sequence[Sequence[Tuple[Fraction, complex]]]):
        if len(data) != len(graph.segments):
            raise ValueError("need one breakpoint row per segment")
        self.graph = graph
        rows: List[Tuple[Tuple[Fraction, ...], Tuple[complex, ...]]] = []
        for j, row in enumerate(data):
            pairs = sorted(((Fraction(t), complex(v)) for t, v in row), key=lambda p: p[0])
            ts = tuple(p[0] for p in pairs)
            vs = tuple(p[1] for p in pairs)
            if len(ts) < 2 or ts[0] != 0 or ts[-1] != 1:
                raise ValueError(f"segment {j}: breakpoints must run from t=0 to t=1")
            if any(ts[i] == ts[i + 1] for i in range(len(ts) - 1)):
                raise ValueError(f"segment {j}: repeated breakpoint parameter")
            rows.append((ts, vs))
        self._rows = rows
        self._check_vertex_agreement()
        # per-interval chord magnitudes, float and exact
        self._d: List[Tuple[float, ...]] = []
        self._d_frac: List[Tuple[Fraction, ...]] = []
        self._v_frac: List[Tuple[Tuple[Fraction, Fraction], ...]] = []
        for ts, vs in rows:
            d = tuple(abs(vs[k + 1] - vs[k]) for k in range(len(vs) - 1))
            self._d.append(d)
            self._d_frac.append(tuple(Fraction(x) for x in d))
            self._v_frac.append(tuple((Fraction(v.real), Fraction(v.imag)) for v in vs))

    def _check_vertex_agreement(self):
        at_vertex: Dict[int, complex] = {}
        for j, (u, v) in enumerate(self.graph.edges):
            ts, vs = self._rows[j]
            for vidx, value in ((u, vs[0]), (v, vs[-1])):
                if vidx in at_vertex:
                    if at_vertex[vidx] != value:
                        raise ValueError(
                            f"values disagree at shared vertex {self.graph.vertices[vidx]}"
                        )
                else:
                    at_vertex[vidx] = value

    def breakpoints(self, j: int) -> Tuple[Tuple[Fraction, ...], Tuple[complex, ...]]:
        return self._rows[j]

    def _bracket(self, j: int, t: Fraction) -> int:
        ts, _ = self._rows[j]
        k = bisect_right(ts, t) - 1
        return min(max(k, 0), len(ts) - 2)

    def _interp_float(self, j: int, t: Fraction) -> complex:
        ts, vs = self._rows[j]
        k = self._bracket(j, t)
        if t == ts[k]:
            return vs[k]
        if t == ts[k + 1]:
            return vs[k + 1]
        lam = float((t - ts[k]) / (ts[k + 1] - ts[k]))
        return vs[k] + lam * (vs[k + 1] - vs[k])

    def _interp_sq_exact(self, j: int, t: Fraction) -> Fraction:
        """Exact |value|^2 at parameter t; convexity keeps it below breakpoint peaks."""
        ts, _ = self._rows[j]
        k = self._bracket(j, t)
        (re0, im0) = self._v_frac[j][k]
        (re1, im1) = self._v_frac[j][k + 1]
        if ts[k + 1] == ts[k]:
            lam = Fraction(0)
        else:
            lam = (t - ts[k]) / (ts[k + 1] - ts[k])
        re = re0 + lam * (re1 - re0)
        im = im0 + lam * (im1 - im0)
        return re * re + im * im

    def evaluate(self, p: Point2) -> complex:
        for j, seg in enumerate(self.graph.segments):
            if seg.contains(p):
                return self._interp_float(j, seg.param_of(p))
        raise OffGraphError(f"{p} is not on the carrier union")

    def _pieces(self, seg: Segment):
        """Carrier decomposition of ``seg`` as (carrier index, lo, hi) params."""
        out = []
        for idx, piece in tile_segment(seg, self.graph.segments):
            carrier = self.graph.segments[idx]
            ta = carrier.param_of(piece.a)
            tb = carrier.param_of(piece.b)
            out.append((idx, min(ta, tb), max(ta, tb)))
        return out

    def variation_exact(self, seg: Segment) -> Fraction:
        total = Fraction(0)
        for idx, lo, hi in self._pieces(seg):
            ts, _ = self._rows[idx]
            dfr = self._d_frac[idx]
            for k in range(len(ts) - 1):
                left = max(lo, ts[k])
                right = min(hi, ts[k + 1])
                if left >= right:
                    continue
                if left == ts[k] and right == ts[k + 1]:
                    total += dfr[k]
                else:
                    total += dfr[k] * (right - left) / (ts[k + 1] - ts[k])
        return total

    def sup_sq_on(self, seg: Segment) -> Fraction:
        best = Fraction(-1)
        for idx, lo, hi in self._pieces(seg):
            ts, _ = self._rows[idx]
            for t in (lo, hi):
                best = max(best, self._interp_sq_exact(idx, t))
            for k, t in enumerate(ts):
                if lo < t < hi:
                    (re, im) = self._v_frac[idx][k]
                    best = max(best, re * re + im * im)
        return best

    def sup_on(self, seg: Segment) -> float:
        return math.sqrt(float(self.sup_sq_on(seg)))

    def profile_on(self, seg: Segment) -> List[Tuple[Fraction, complex]]:
        """Restriction to ``seg`` as breakpoints in seg's own parameter."""
        d = seg.direction
        l2 = seg.length_squared()
        out: List[Tuple[Fraction, complex]] = []
        seen = set()
        for idx, lo, hi in self._pieces(seg):
            carrier = self.graph.segments[idx]
            ts, _ = self._rows[idx]
            params = [lo] + [t for t in ts if lo < t < hi] + [hi]
            for t in params:
                point = param_point(carrier, t)
                u = (d.x * (point.x - seg.a.x) + d.y * (point.y - seg.a.y)) / l2
                if u not in seen:
                    seen.add(u)
                    out.append((u, self._interp_float(idx, t)))
        out.sort(key=lambda item: item[0])
        return out

    def variation_partition(self, seg: Segment, tol: float = 1e-9):
        profile = self.profile_on(seg)
        cuts = [u for u, _ in profile]
        chords = [abs(profile[k + 1][1] - profile[k][1]) for k in range(len(profile) - 1)]
        return cuts, exact_sum(chords)

    def seed_params(self, edge_index: int) -> List[Fraction]:
        return list(self._rows[edge_index][0])

    def to_json_dict(self) -> dict:
        return {
            "type": "pwl",
            "segments": [
                [[str(t), v.real, v.imag] for t, v in zip(ts, vs)] for ts, vs in self._rows
            ],
        }


class KDelta(PiecewiseLinear):
    """Near-indicator bump of one segment.

    In the carrier's parameter: 0 on [0, d/2] and [1-d/2, 1], 1 on [d, 1-d],
    linear in between; identically 0 on every other segment.  Continuous on
    the union because it vanishes at the carrier's endpoints.
    """

    def __init__(self, graph: LinearGraph, carrier: int, delta: Fraction):
        delta = Fraction(delta)
        if not 0 < delta < Fraction(1, 2):
            raise ValueError(f"delta must lie in (0, 1/2), got {delta}")
        if not 0 <= carrier < len(graph.segments):
            raise ValueError(f"carrier index {carrier} out of range")
        half = delta / 2
        bump = [
            (Fraction(0), 0j),
            (half, 0j),
            (delta, 1 + 0j),
            (1 - delta, 1 + 0j),
            (1 - half, 0j),
            (Fraction(1), 0j),
        ]
        flat = [(Fraction(0), 0j), (Fraction(1), 0j)]
        data = [bump if j == carrier else flat for j in range(len(graph.segments))]
        super().__init__(graph, data)
        self.carrier = carrier
        self.delta = delta

    def to_json_dict(self) -> dict:
        return {"type": "kdelta", "carrier": self.carrier, "delta": str(self.delta)}


def make_k_delta(graph: LinearGraph, carrier: int, delta: Fraction) -> KDelta:
    return KDelta(graph, carrier, delta)


class PolyXY(FuncModel):
    """Complex polynomial in the two real coordinates, restricted to the union."""

    def __init__(self, coeffs: Dict[Tuple[int, int], complex], graph: LinearGraph):
        self.coeffs = {
            (int(n), int(m)): complex(c) for (n, m), c in sorted(coeffs.items()) if complex(c) != 0
        }
        self.graph = graph
        self._seed_cache: Dict[int, List[Fraction]] = {}

    def _eval_xy(self, p: Point2) -> complex:
        x, y = float(p.x), float(p.y)
        return sum(c * x**n * y**m for (n, m), c in self.coeffs.items()) + 0j

    def evaluate(self, p: Point2) -> complex:
        if not self.graph.contains_point(p):
            raise OffGraphError(f"{p} is not on the segment union")
        return self._eval_xy(p)

    def sup_on(self, seg: Segment) -> float:
        return _refine_sup(lambda t: abs(self._eval_xy(param_point(seg, t))))

    def variation_partition(self, seg: Segment, tol: float = 1e-9):
        return _adaptive_variation(lambda t: self._eval_xy(param_point(seg, t)), tol)

    def seed_params(self, edge_index: int) -> List[Fraction]:
        # the refinement's own partition, so a search seeded with it matches
        # segment_variation chord for chord
        if edge_index not in self._seed_cache:
            seg = self.graph.segments[edge_index]
            self._seed_cache[edge_index] = self.variation_partition(seg)[0]
        return self._seed_cache[edge_index]

    def to_json_dict(self) -> dict:
        return {
            "type": "polyxy",
            "coeffs": [[n, m, c.real, c.imag] for (n, m), c in self.coeffs.items()],
        }


def evaluate(f: FuncModel, p: Point2) -> complex:
    return f.evaluate(p)


def sup_norm(f: FuncModel, graph: LinearGraph) -> float:
    """Largest |f| over the union, segment by segment."""
    return max(f.sup_on(seg) for seg in graph.segments)


def segment_variation(f: FuncModel, seg: Segment, tol: float = 1e-9) -> float:
    """Classical variation of f along one segment.

    Exact (up to one final rounding) for the piecewise-linear family; chord
    refinement with gain threshold ``tol`` otherwise.
    """
    ex = f.variation_exact(seg)
    if ex is not None:
        return float(ex)
    return f.variation_partition(seg, tol)[1]


def variation_numeric(f: FuncModel, seg: Segment, tol: float = 1e-9) -> float:
    """Chord-refinement variation that ignores any exact shortcut the model has."""
    return _adaptive_variation(lambda t: f.evaluate(param_point(seg, t)), tol)[1]
