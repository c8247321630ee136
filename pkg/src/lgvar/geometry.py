"""Exact rational planar primitives.

Coordinates are `fractions.Fraction`, so every predicate below is decided by
the sign of an exactly computed cross product.  Nothing in this module touches
floating point: the side-of-line classification drives a case analysis that is
discontinuous in the line, and a misclassified sign would silently corrupt
every quantity built on top of it.

Sign convention: for a line through ``anchor`` with direction ``d``, a point
``p`` is LEFT when ``d x (p - anchor) > 0``, RIGHT when negative, ON when zero.
Reversing the direction swaps LEFT and RIGHT but yields an equal `Line`.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Optional, Union

RationalLike = Union[int, str, Fraction, float]


def as_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions, 'p/q' / decimal strings and floats exactly.

    Floats are interpreted through their shortest decimal repr, so a literal
    written as ``0.1`` becomes exactly 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a coordinate")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(decimal.Decimal(repr(value)))
    raise TypeError(f"cannot interpret {value!r} as a rational")


class Side(Enum):
    LEFT = 1
    ON = 0
    RIGHT = -1


class Orientation(Enum):
    FORWARD = "forward"
    REVERSED = "reversed"


@dataclass(frozen=True)
class Point2:
    """Exact point of the plane."""

    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", as_fraction(self.x))
        object.__setattr__(self, "y", as_fraction(self.y))

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scaled(self, k: Fraction) -> "Point2":
        return Point2(self.x * k, self.y * k)

    def sort_key(self):
        return (self.x, self.y)

    def __repr__(self):
        return f"({self.x}, {self.y})"


def pt(x: RationalLike, y: RationalLike) -> Point2:
    return Point2(as_fraction(x), as_fraction(y))


def cross(u: Point2, v: Point2) -> Fraction:
    return u.x * v.y - u.y * v.x


def dot(u: Point2, v: Point2) -> Fraction:
    return u.x * v.x + u.y * v.y


@dataclass(frozen=True)
class Segment:
    """Closed line segment with distinct endpoints."""

    a: Point2
    b: Point2

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError(f"degenerate segment at {self.a}")

    @property
    def direction(self) -> Point2:
        return self.b - self.a

    def length_squared(self) -> Fraction:
        d = self.direction
        return dot(d, d)

    def contains(self, p: Point2) -> bool:
        """Exact membership test (collinear and between the endpoints)."""
        d = self.direction
        if cross(d, p - self.a) != 0:
            return False
        t = dot(d, p - self.a)
        return 0 <= t <= self.length_squared()

    def param_of(self, p: Point2) -> Fraction:
        """Parameter t in [0,1] with p = (1-t)a + tb; p must lie on the segment."""
        if not self.contains(p):
            raise ValueError(f"{p} is not on segment [{self.a}, {self.b}]")
        return dot(self.direction, p - self.a) / self.length_squared()

    def endpoints(self) -> frozenset:
        return frozenset((self.a, self.b))

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)


def param_point(s: Segment, t: RationalLike) -> Point2:
    """Exact point (1-t)a + tb for t in [0,1]."""
    t = as_fraction(t)
    if not 0 <= t <= 1:
        raise ValueError(f"parameter {t} outside [0, 1]")
    return Point2(s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y))


@dataclass(frozen=True)
class Line:
    """The line {anchor + t * direction}.

    Equality and hashing are semantic: two values describing the same point
    set compare equal even when anchors or direction orientations differ.
    Side classification *does* depend on the direction's orientation.
    """

    anchor: Point2
    direction: Point2

    def __post_init__(self):
        if self.direction == Point2(Fraction(0), Fraction(0)):
            raise ValueError("line direction must be nonzero")

    def canonical_triple(self):
        """Integer (a, b, c) with the line = {ax + by = c}, gcd 1, fixed sign."""
        a = -self.direction.y
        b = self.direction.x
        c = a * self.anchor.x + b * self.anchor.y
        scale = a.denominator * b.denominator * c.denominator
        ai, bi, ci = (
            int(a * scale),
            int(b * scale),
            int(c * scale),
        )
        g = gcd(gcd(abs(ai), abs(bi)), abs(ci))
        if g:
            ai, bi, ci = ai // g, bi // g, ci // g
        if ai < 0 or (ai == 0 and bi < 0):
            ai, bi, ci = -ai, -bi, -ci
        return (ai, bi, ci)

    def __eq__(self, other):
        if not isinstance(other, Line):
            return NotImplemented
        return self.canonical_triple() == other.canonical_triple()

    def __hash__(self):
        return hash(self.canonical_triple())


def line_through(p: Point2, q: Point2) -> Line:
    if p == q:
        raise ValueError("two distinct points are needed to span a line")
    return Line(p, q - p)


def side_of_line(p: Point2, line: Line) -> Side:
    s = cross(line.direction, p - line.anchor)
    if s > 0:
        return Side.LEFT
    if s < 0:
        return Side.RIGHT
    return Side.ON


def segment_intersection(s1: Segment, s2: Segment) -> Union[None, Point2, Segment]:
    """Exact intersection: None, a single Point2, or the shared subsegment.

    The overlap case returns endpoints in (x, y)-sorted order so the result is
    symmetric in the arguments.
    """
    d1, d2 = s1.direction, s2.direction
    denom = cross(d1, d2)
    offset = s2.a - s1.a
    if denom != 0:
        t = cross(offset, d2) / denom
        u = cross(offset, d1) / denom
        if 0 <= t <= 1 and 0 <= u <= 1:
            return param_point(s1, t)
        return None
    # parallel
    if cross(d1, offset) != 0:
        return None
    # collinear: compare parameters along s1
    l2 = s1.length_squared()
    ta = dot(d1, s2.a - s1.a) / l2
    tb = dot(d1, s2.b - s1.a) / l2
    lo, hi = min(ta, tb), max(ta, tb)
    lo, hi = max(lo, Fraction(0)), min(hi, Fraction(1))
    if lo > hi:
        return None
    if lo == hi:
        return param_point(s1, lo)
    p, q = param_point(s1, lo), param_point(s1, hi)
    if q.sort_key() < p.sort_key():
        p, q = q, p
    return Segment(p, q)


@dataclass(frozen=True)
class AffineSegMap:
    """The affine bijection of one segment onto another.

    FORWARD sends source.a to target.a; REVERSED sends source.a to target.b.
    """

    source: Segment
    target: Segment
    orientation: Orientation

    def apply(self, p: Point2) -> Point2:
        t = self.source.param_of(p)
        if self.orientation is Orientation.REVERSED:
            t = 1 - t
        return param_point(self.target, t)

    def apply_param(self, t: Fraction) -> Fraction:
        """Image of a source parameter as a target parameter."""
        return 1 - t if self.orientation is Orientation.REVERSED else t

    def inverse(self) -> "AffineSegMap":
        return AffineSegMap(self.target, self.source, self.orientation)


def affine_map(m: AffineSegMap, p: Point2) -> Point2:
    return m.apply(p)


def tile_segment(seg: Segment, carriers) -> list:
    """Decompose ``seg`` into pieces lying on the given carrier segments.

    Returns [(carrier_index, piece)] ordered along ``seg`` from a to b, with
    the pieces tiling ``seg`` exactly.  Raises OffGraphError when some part of
    ``seg`` is not covered.
    """
    from .errors import OffGraphError

    l2 = seg.length_squared()
    d = seg.direction
    pieces = []
    for idx, c in enumerate(carriers):
        inter = segment_intersection(seg, c)
        if isinstance(inter, Segment):
            ta = dot(d, inter.a - seg.a) / l2
            tb = dot(d, inter.b - seg.a) / l2
            lo, hi = min(ta, tb), max(ta, tb)
            pieces.append((lo, hi, idx))
    pieces.sort(key=lambda item: (item[0], item[1]))
    cursor = Fraction(0)
    out = []
    for lo, hi, idx in pieces:
        if hi <= cursor:
            continue  # fully inside an earlier piece (duplicate coverage)
        if lo > cursor:
            raise OffGraphError(f"segment [{seg.a}, {seg.b}] leaves the carrier set")
        lo = max(lo, cursor)
        out.append((idx, Segment(param_point(seg, lo), param_point(seg, hi))))
        cursor = hi
    if cursor != 1:
        raise OffGraphError(f"segment [{seg.a}, {seg.b}] leaves the carrier set")
    return out
