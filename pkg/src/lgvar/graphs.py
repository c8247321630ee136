"""Proper representations of segment unions and their graph structure.

A connected compact union of segments is handled through a *proper*
representation: segments pairwise intersect only at shared endpoints.  The
derived vertex/edge graph supports subdivision, smoothing of degree-2
vertices, homeomorphism testing and edge-by-edge orderings.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import DisconnectedError, ImproperRepresentationError, OffGraphError
from .geometry import (
    Point2,
    Segment,
    cross,
    dot,
    param_point,
    segment_intersection,
)


class LinearGraph:
    """A proper representation together with its derived graph.

    ``segments`` keeps construction order; ``vertices`` are the deduplicated
    endpoints; ``edges[j]`` gives the vertex-index pair of segment j.
    """

    def __init__(self, segments: Sequence[Segment]):
        if not segments:
            raise ValueError("a linear graph needs at least one segment")
        self.segments: Tuple[Segment, ...] = tuple(segments)
        self._validate_proper()
        index: Dict[Point2, int] = {}
        vertices: List[Point2] = []
        edges: List[Tuple[int, int]] = []
        for seg in self.segments:
            pair = []
            for p in (seg.a, seg.b):
                if p not in index:
                    index[p] = len(vertices)
                    vertices.append(p)
                pair.append(index[p])
            edges.append((pair[0], pair[1]))
        self.vertices: Tuple[Point2, ...] = tuple(vertices)
        self.edges: Tuple[Tuple[int, int], ...] = tuple(edges)
        self._vertex_index = index
        self._validate_connected()

    def _validate_proper(self):
        seen = set()
        for seg in self.segments:
            key = frozenset((seg.a, seg.b))
            if key in seen:
                raise ImproperRepresentationError(f"duplicate segment [{seg.a}, {seg.b}]")
            seen.add(key)
        for i in range(len(self.segments)):
            si = self.segments[i]
            for j in range(i + 1, len(self.segments)):
                sj = self.segments[j]
                inter = segment_intersection(si, sj)
                if inter is None:
                    continue
                if isinstance(inter, Segment):
                    raise ImproperRepresentationError(
                        f"segments {i} and {j} overlap along [{inter.a}, {inter.b}]"
                    )
                if inter not in (si.a, si.b) or inter not in (sj.a, sj.b):
                    raise ImproperRepresentationError(
                        f"segments {i} and {j} cross at {inter}, not at shared endpoints"
                    )

    def _validate_connected(self):
        comps = self.components()
        if len(comps) > 1:
            raise DisconnectedError(
                f"segment union has {len(comps)} connected components", components=comps
            )

    def components(self) -> List[List[int]]:
        """Connected components as lists of segment indices."""
        parent = list(range(len(self.vertices)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            parent[find(u)] = find(v)
        groups: Dict[int, List[int]] = defaultdict(list)
        for j, (u, _) in enumerate(self.edges):
            groups[find(u)].append(j)
        return list(groups.values())

    def vertex_index(self, p: Point2) -> int:
        return self._vertex_index[p]

    def degree(self, vidx: int) -> int:
        return sum((u == vidx) + (v == vidx) for u, v in self.edges)

    def degrees(self) -> List[int]:
        deg = [0] * len(self.vertices)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def incident_edges(self, vidx: int) -> List[int]:
        return [j for j, (u, v) in enumerate(self.edges) if vidx in (u, v)]

    def contains_point(self, p: Point2) -> bool:
        return any(seg.contains(p) for seg in self.segments)

    def segment_with(self, p: Point2) -> int:
        """Index of the first segment containing p."""
        for j, seg in enumerate(self.segments):
            if seg.contains(p):
                return j
        raise OffGraphError(f"{p} is not on the segment union")

    def __len__(self):
        return len(self.segments)

    def __repr__(self):
        return f"LinearGraph({len(self.segments)} segments, {len(self.vertices)} vertices)"


def _canonical_line_key(p: Point2, q: Point2):
    a = q.y - p.y
    b = p.x - q.x
    c = a * p.x + b * p.y
    scale = a.denominator * b.denominator * c.denominator
    ai, bi, ci = int(a * scale), int(b * scale), int(c * scale)
    from math import gcd

    g = gcd(gcd(abs(ai), abs(bi)), abs(ci))
    if g:
        ai, bi, ci = ai // g, bi // g, ci // g
    if ai < 0 or (ai == 0 and bi < 0):
        ai, bi, ci = -ai, -bi, -ci
    return (ai, bi, ci)


def properize(raw: Sequence[Segment]) -> LinearGraph:
    """Rebuild an arbitrary segment list as a proper representation.

    Collinear overlaps are merged and re-split at every original endpoint;
    transversal crossings and T-junctions become shared endpoints.  The point
    set union is preserved exactly.  Raises DisconnectedError when the union
    is not connected.
    """
    if not raw:
        raise ValueError("properize needs at least one segment")

    # group segments by supporting line; parameters are measured along the
    # first segment's direction so all comparisons within a group are exact
    groups: Dict[tuple, dict] = {}
    for seg in raw:
        key = _canonical_line_key(seg.a, seg.b)
        g = groups.get(key)
        if g is None:
            g = {"anchor": seg.a, "dir": seg.direction, "intervals": [], "cuts": set()}
            groups[key] = g
        d, anchor = g["dir"], g["anchor"]
        l2 = dot(d, d)
        ta = dot(d, seg.a - anchor) / l2
        tb = dot(d, seg.b - anchor) / l2
        lo, hi = min(ta, tb), max(ta, tb)
        g["intervals"].append((lo, hi))
        g["cuts"].update((lo, hi))

    for g in groups.values():
        merged: List[List[Fraction]] = []
        for lo, hi in sorted(g["intervals"]):
            if merged and lo <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        g["merged"] = [(lo, hi) for lo, hi in merged]

    def covered(g, t: Fraction) -> bool:
        return any(lo <= t <= hi for lo, hi in g["merged"])

    keys = list(groups)
    for i in range(len(keys)):
        gi = groups[keys[i]]
        for j in range(i + 1, len(keys)):
            gj = groups[keys[j]]
            di, dj = gi["dir"], gj["dir"]
            denom = cross(di, dj)
            if denom == 0:
                continue  # parallel distinct lines
            offset = gj["anchor"] - gi["anchor"]
            t = cross(offset, dj) / denom
            u = cross(offset, di) / denom
            if covered(gi, t) and covered(gj, u):
                gi["cuts"].add(t)
                gj["cuts"].add(u)

    segments: List[Segment] = []
    for key in keys:
        g = groups[key]
        anchor, d = g["anchor"], g["dir"]

        def at(t: Fraction) -> Point2:
            return Point2(anchor.x + t * d.x, anchor.y + t * d.y)

        for lo, hi in g["merged"]:
            cuts = sorted({lo, hi} | {t for t in g["cuts"] if lo < t < hi})
            for a, b in zip(cuts, cuts[1:]):
                segments.append(Segment(at(a), at(b)))
    return LinearGraph(segments)


def subdivide_edge(g: LinearGraph, edge: int, t: Fraction) -> LinearGraph:
    """Split segment ``edge`` at parameter t in (0,1); the point set is unchanged."""
    t = Fraction(t)
    if not 0 < t < 1:
        raise ValueError(f"subdivision parameter must lie strictly inside (0,1), got {t}")
    if not 0 <= edge < len(g.segments):
        raise ValueError(f"edge index {edge} out of range")
    seg = g.segments[edge]
    w = param_point(seg, t)
    new_segments = list(g.segments)
    new_segments[edge : edge + 1] = [Segment(seg.a, w), Segment(w, seg.b)]
    return LinearGraph(new_segments)


@dataclass(frozen=True)
class Multigraph:
    """Abstract multigraph: loops and parallel edges carry multiplicities.

    A connected graph in which every vertex has degree 2 smooths to a bare
    closed curve; that degenerate case is encoded by ``is_cycle`` with a
    single canonical loop edge.
    """

    num_vertices: int
    edges: Tuple[Tuple[int, int], ...]
    is_cycle: bool = False

    def degrees(self) -> List[int]:
        deg = [0] * self.num_vertices
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def loop_counts(self) -> List[int]:
        loops = [0] * self.num_vertices
        for u, v in self.edges:
            if u == v:
                loops[u] += 1
        return loops


CYCLE_TOKEN = Multigraph(num_vertices=1, edges=((0, 0),), is_cycle=True)


@dataclass(frozen=True)
class _ChainPath:
    """A maximal chain through degree-2 vertices, as traversed."""

    vertices: Tuple[int, ...]  # vertex indices along the walk, ends at keep vertices
    edge_indices: Tuple[int, ...]

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]

    def reversed(self) -> "_ChainPath":
        return _ChainPath(tuple(reversed(self.vertices)), tuple(reversed(self.edge_indices)))


def _smooth_with_paths(g: LinearGraph):
    deg = g.degrees()
    adj: List[List[Tuple[int, int]]] = [[] for _ in g.vertices]
    for j, (u, v) in enumerate(g.edges):
        adj[u].append((v, j))
        adj[v].append((u, j))
    for entries in adj:
        entries.sort(key=lambda item: item[1])

    if all(d == 2 for d in deg):
        # single closed polygon: walk it once, starting at vertex 0
        verts = [0]
        edges: List[int] = []
        prev_edge = -1
        cur = 0
        while True:
            nxt = next((v, e) for v, e in adj[cur] if e != prev_edge)
            edges.append(nxt[1])
            cur = nxt[0]
            prev_edge = nxt[1]
            verts.append(cur)
            if cur == 0:
                break
        path = _ChainPath(tuple(verts), tuple(edges))
        return CYCLE_TOKEN, [path], {0: 0}

    keep = [i for i, d in enumerate(deg) if d != 2]
    keep_id = {v: k for k, v in enumerate(keep)}
    used = set()
    paths: List[_ChainPath] = []
    medges: List[Tuple[int, int]] = []
    for u in keep:
        for v, e in adj[u]:
            if e in used:
                continue
            used.add(e)
            verts = [u]
            edges = [e]
            cur, prev_edge = v, e
            while deg[cur] == 2:
                verts.append(cur)
                nxt = next((w, e2) for w, e2 in adj[cur] if e2 != prev_edge)
                used.add(nxt[1])
                edges.append(nxt[1])
                cur, prev_edge = nxt
            verts.append(cur)
            paths.append(_ChainPath(tuple(verts), tuple(edges)))
            medges.append(tuple(sorted((keep_id[u], keep_id[cur]))))
    return Multigraph(len(keep), tuple(medges)), paths, keep_id


def smooth(g: LinearGraph) -> Multigraph:
    """Suppress every degree-2 vertex; a pure polygon becomes the cycle token."""
    m, _, _ = _smooth_with_paths(g)
    return m


def multigraph_isomorphic(m1: Multigraph, m2: Multigraph) -> Optional[Dict[int, int]]:
    """First isomorphism found by degree-pruned backtracking, or None.

    Deterministic for a fixed vertex/edge input order.
    """
    if m1.is_cycle or m2.is_cycle:
        return {0: 0} if (m1.is_cycle and m2.is_cycle) else None
    if m1.num_vertices != m2.num_vertices or len(m1.edges) != len(m2.edges):
        return None
    deg1, deg2 = m1.degrees(), m2.degrees()
    if sorted(deg1) != sorted(deg2):
        return None
    loops1, loops2 = m1.loop_counts(), m2.loop_counts()
    if sorted(loops1) != sorted(loops2):
        return None

    mult1: List[Counter] = [Counter() for _ in range(m1.num_vertices)]
    mult2: List[Counter] = [Counter() for _ in range(m2.num_vertices)]
    for u, v in m1.edges:
        mult1[u][v] += 1
        if u != v:
            mult1[v][u] += 1
    for u, v in m2.edges:
        mult2[u][v] += 1
        if u != v:
            mult2[v][u] += 1

    order = sorted(range(m1.num_vertices), key=lambda v: (-deg1[v], v))
    mapping: Dict[int, int] = {}
    used = [False] * m2.num_vertices

    def backtrack(pos: int) -> bool:
        if pos == len(order):
            return True
        u = order[pos]
        for cand in range(m2.num_vertices):
            if used[cand] or deg1[u] != deg2[cand] or loops1[u] != loops2[cand]:
                continue
            ok = True
            for w, k in mult1[u].items():
                if w == u:
                    continue
                if w in mapping and mult2[cand][mapping[w]] != k:
                    ok = False
                    break
            if not ok:
                continue
            mapping[u] = cand
            used[cand] = True
            if backtrack(pos + 1):
                return True
            del mapping[u]
            used[cand] = False
        return False

    if not backtrack(0):
        return None
    # final multiplicity audit
    img = Counter(tuple(sorted((mapping[u], mapping[v]))) for u, v in m1.edges)
    if img != Counter(tuple(sorted(e)) for e in m2.edges):
        return None
    return dict(mapping)


@dataclass(frozen=True)
class HomeoCertificate:
    """Matched subdivisions witnessing that two segment unions are homeomorphic.

    ``vertex_map[i]`` is the target vertex index matching source vertex i;
    ``edge_map[k]`` the target edge index matching source edge k.
    """

    source: LinearGraph
    target: LinearGraph
    vertex_map: Tuple[int, ...]
    edge_map: Tuple[int, ...]

    def __post_init__(self):
        assert sorted(self.vertex_map) == list(range(len(self.target.vertices)))
        assert sorted(self.edge_map) == list(range(len(self.target.segments)))
        for k, (u, v) in enumerate(self.source.edges):
            tu, tv = self.target.edges[self.edge_map[k]]
            assert {self.vertex_map[u], self.vertex_map[v]} == {tu, tv}, (
                "certificate bijections do not form a graph isomorphism"
            )


def _refine_path_points(g: LinearGraph, path: _ChainPath, total: int) -> List[Point2]:
    """Points along the chain after refining it to ``total`` segments.

    Extra cuts are spread over the chain's segments at equal parameter
    fractions, front-loaded deterministically.
    """
    p = len(path.edge_indices)
    counts = [total // p + (1 if i < total % p else 0) for i in range(p)]
    pts = [g.vertices[path.vertices[0]]]
    for i, e in enumerate(path.edge_indices):
        seg = g.segments[e]
        start = g.vertices[path.vertices[i]]
        forward = seg.a == start
        for j in range(1, counts[i] + 1):
            t = Fraction(j, counts[i])
            pts.append(param_point(seg, t if forward else 1 - t))
    return pts


def graph_homeomorphic(src: LinearGraph, tgt: LinearGraph) -> Optional[HomeoCertificate]:
    """Decide topological homeomorphism; on success return matched refinements.

    The decision happens on the smoothed multigraphs (cycles only match
    cycles).  Matched chains are refined to a common segment count, giving
    two subdivided graphs that are isomorphic edge for edge.
    """
    m1, paths1, keep1 = _smooth_with_paths(src)
    m2, paths2, keep2 = _smooth_with_paths(tgt)
    if m1.is_cycle != m2.is_cycle:
        return None
    if m1.is_cycle:
        matches = [(paths1[0], paths2[0])]
    else:
        iso = multigraph_isomorphic(m1, m2)
        if iso is None:
            return None
        keep2_vertex = {k: v for v, k in keep2.items()}
        bundles: Dict[Tuple[int, int], List[_ChainPath]] = defaultdict(list)
        for path in paths2:
            key = tuple(sorted((keep2[path.start], keep2[path.end])))
            bundles[key].append(path)
        matches = []
        for path in paths1:
            a = iso[keep1[path.start]]
            b = iso[keep1[path.end]]
            partner = bundles[tuple(sorted((a, b)))].pop(0)
            if partner.start != keep2_vertex[a]:
                partner = partner.reversed()
            matches.append((path, partner))

    src_segments: List[Segment] = []
    tgt_segments: List[Segment] = []
    point_pairs: List[Tuple[Point2, Point2]] = []
    for path1, path2 in matches:
        total = max(len(path1.edge_indices), len(path2.edge_indices))
        pts1 = _refine_path_points(src, path1, total)
        pts2 = _refine_path_points(tgt, path2, total)
        for j in range(total):
            src_segments.append(Segment(pts1[j], pts1[j + 1]))
            tgt_segments.append(Segment(pts2[j], pts2[j + 1]))
        point_pairs.extend(zip(pts1, pts2))

    refined_src = LinearGraph(src_segments)
    refined_tgt = LinearGraph(tgt_segments)
    vmap: List[Optional[int]] = [None] * len(refined_src.vertices)
    for ps, ptgt in point_pairs:
        i = refined_src.vertex_index(ps)
        j = refined_tgt.vertex_index(ptgt)
        assert vmap[i] in (None, j), "inconsistent vertex matching"
        vmap[i] = j
    assert all(v is not None for v in vmap)
    return HomeoCertificate(
        refined_src,
        refined_tgt,
        tuple(vmap),  # type: ignore[arg-type]
        tuple(range(len(src_segments))),
    )


@dataclass(frozen=True)
class EdgeOrdering:
    """Edge permutation whose every prefix induces a connected subgraph."""

    graph: LinearGraph
    indices: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.indices) != list(range(len(self.graph.segments))):
            raise ValueError("ordering must be a permutation of the edge indices")
        seen: set = set()
        for k, e in enumerate(self.indices):
            u, v = self.graph.edges[e]
            if k > 0 and u not in seen and v not in seen:
                raise ValueError(f"prefix of length {k + 1} is disconnected at edge {e}")
            seen.update((u, v))


def edge_by_edge(g: LinearGraph) -> EdgeOrdering:
    """Grow the graph one edge at a time, lowest eligible index first."""
    remaining = set(range(len(g.segments)))
    order: List[int] = []
    seen_vertices: set = set()
    first = 0
    order.append(first)
    remaining.discard(first)
    seen_vertices.update(g.edges[first])
    while remaining:
        e = min(
            j for j in remaining if g.edges[j][0] in seen_vertices or g.edges[j][1] in seen_vertices
        )
        order.append(e)
        remaining.discard(e)
        seen_vertices.update(g.edges[e])
    return EdgeOrdering(g, tuple(order))


def matched_decompositions(cert: HomeoCertificate) -> Tuple[EdgeOrdering, EdgeOrdering]:
    """Edge-by-edge ordering of the refined source and its image ordering."""
    src_order = edge_by_edge(cert.source)
    tgt_indices = tuple(cert.edge_map[e] for e in src_order.indices)
    tgt_order = EdgeOrdering(cert.target, tgt_indices)
    return src_order, tgt_order
