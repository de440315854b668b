"""Metric graphs: the ambient length space, points on it, curves, and the
intrinsic (shortest-path) metric.

Conventions used throughout the package:

* every edge carries an arc-length coordinate ``s`` in ``[0, L]`` measured
  from the edge's ``src`` endpoint;
* points with ``s == 0`` or ``s == L`` are canonicalized to ``Vertex`` so that
  point equality is decidable;
* a ``Germ`` is a direction of departure from a point — on a graph every way
  of approaching a point is eventually a walk along one incident edge germ,
  which is what makes one-sided directional calculus exact here.
"""
from __future__ import annotations

import heapq
import math
import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import InputError, PreconditionError, UnreachableError


@dataclass(frozen=True)
class VertexRec:
    """Static vertex record: identifier plus the Dirichlet-boundary flag."""

    id: str
    boundary: bool = False


@dataclass(frozen=True)
class EdgeRec:
    """Static edge record. ``length`` is the arc length, strictly positive."""

    id: str
    src: str
    dst: str
    length: float


@dataclass(frozen=True)
class Vertex:
    """A point sitting exactly on a graph vertex."""

    id: str


@dataclass(frozen=True)
class EdgeInterior:
    """A point strictly inside an edge at arc-length offset ``s`` from ``src``."""

    edge: str
    s: float


GraphPoint = Union[Vertex, EdgeInterior]


@dataclass(frozen=True)
class Germ:
    """A departure direction: from offset ``base`` on ``edge``, offsets move in
    direction ``sign`` (+1 toward ``dst``, -1 toward ``src``)."""

    edge: str
    base: float
    sign: int


class MetricGraph:
    """A finite connected multigraph with positive edge lengths.

    Self-loops and parallel edges are permitted.  Immutable after
    construction; all validation (positive finite lengths, endpoint ids,
    connectivity) happens here so queries can assume a well-formed space.
    """

    def __init__(self, vertices: Iterable, edges: Iterable):
        self.vertices: Dict[str, VertexRec] = {}
        self.edges: Dict[str, EdgeRec] = {}
        for v in vertices:
            rec = v if isinstance(v, VertexRec) else VertexRec(*v)
            if rec.id in self.vertices:
                raise InputError("duplicate vertex id %r" % rec.id)
            self.vertices[rec.id] = rec
        if not self.vertices:
            raise InputError("graph needs at least one vertex")
        for e in edges:
            rec = e if isinstance(e, EdgeRec) else EdgeRec(*e)
            if rec.id in self.edges:
                raise InputError("duplicate edge id %r" % rec.id)
            if rec.src not in self.vertices:
                raise InputError("edge %r references unknown vertex %r" % (rec.id, rec.src))
            if rec.dst not in self.vertices:
                raise InputError("edge %r references unknown vertex %r" % (rec.id, rec.dst))
            if not (isinstance(rec.length, (int, float)) and math.isfinite(rec.length) and rec.length > 0):
                raise InputError("edge %r must have a positive finite length (got %r)" % (rec.id, rec.length))
            self.edges[rec.id] = EdgeRec(rec.id, rec.src, rec.dst, float(rec.length))

        # adjacency: vertex id -> [(edge id, end)] with end 0 = src side, 1 = dst side.
        self._adj: Dict[str, List[Tuple[str, int]]] = {vid: [] for vid in self.vertices}
        for rec in self.edges.values():
            self._adj[rec.src].append((rec.id, 0))
            self._adj[rec.dst].append((rec.id, 1))

        self._check_connected()

    def _check_connected(self):
        seen = set()
        start = next(iter(self.vertices))
        stack = [start]
        while stack:
            vid = stack.pop()
            if vid in seen:
                continue
            seen.add(vid)
            for eid, end in self._adj[vid]:
                rec = self.edges[eid]
                other = rec.dst if end == 0 else rec.src
                if other not in seen:
                    stack.append(other)
        if len(seen) != len(self.vertices):
            missing = sorted(set(self.vertices) - seen)
            raise InputError("graph is not connected; unreachable vertices: %s" % ", ".join(missing))

    # ------------------------------------------------------------------
    # basic accessors
    # ------------------------------------------------------------------

    @property
    def boundary_ids(self) -> List[str]:
        return [vid for vid, rec in self.vertices.items() if rec.boundary]

    def edge(self, eid: str) -> EdgeRec:
        try:
            return self.edges[eid]
        except KeyError:
            raise InputError("unknown edge id %r" % eid) from None

    def adjacency(self, vid: str) -> List[Tuple[str, int]]:
        try:
            return self._adj[vid]
        except KeyError:
            raise InputError("unknown vertex id %r" % vid) from None

    def point(self, edge_id: str, s: float) -> GraphPoint:
        """Canonical point at offset ``s`` on ``edge_id`` (endpoints become Vertex)."""
        rec = self.edge(edge_id)
        if not (0.0 <= s <= rec.length):
            raise InputError("offset %r outside [0, %r] on edge %r" % (s, rec.length, edge_id))
        if s == 0.0:
            return Vertex(rec.src)
        if s == rec.length:
            return Vertex(rec.dst)
        return EdgeInterior(edge_id, float(s))

    def vertex_point(self, vid: str) -> Vertex:
        if vid not in self.vertices:
            raise InputError("unknown vertex id %r" % vid)
        return Vertex(vid)

    def is_boundary(self, p: GraphPoint) -> bool:
        return isinstance(p, Vertex) and self.vertices[p.id].boundary

    def validate_point(self, p: GraphPoint):
        if isinstance(p, Vertex):
            if p.id not in self.vertices:
                raise InputError("unknown vertex id %r" % p.id)
        elif isinstance(p, EdgeInterior):
            rec = self.edge(p.edge)
            if not (0.0 < p.s < rec.length):
                raise InputError("interior offset %r outside (0, %r) on edge %r" % (p.s, rec.length, p.edge))
        else:
            raise InputError("not a graph point: %r" % (p,))

    # ------------------------------------------------------------------
    # germs
    # ------------------------------------------------------------------

    def germs(self, p: GraphPoint) -> List[Germ]:
        """All departure directions from ``p``, one per incident edge end."""
        self.validate_point(p)
        if isinstance(p, EdgeInterior):
            return [Germ(p.edge, p.s, +1), Germ(p.edge, p.s, -1)]
        out = []
        for eid, end in self._adj[p.id]:
            rec = self.edges[eid]
            if end == 0:
                out.append(Germ(eid, 0.0, +1))
            else:
                out.append(Germ(eid, rec.length, -1))
        if not out:
            raise InputError("vertex %r is isolated; no direction to move in" % p.id)
        return out

    def germ_available(self, germ: Germ) -> float:
        rec = self.edge(germ.edge)
        return rec.length - germ.base if germ.sign > 0 else germ.base

    def germ_point(self, germ: Germ, t: float) -> GraphPoint:
        """The point at arc distance ``t`` along ``germ`` (t within the edge)."""
        if t < 0 or t > self.germ_available(germ) * (1 + 1e-15):
            raise InputError("walk of %r exceeds the germ's edge" % t)
        t = min(t, self.germ_available(germ))
        return self.point(germ.edge, germ.base + germ.sign * t)

    def half_min_incident(self, p: GraphPoint) -> float:
        """Half the shortest incident edge length; the default slope/DPP radius."""
        lengths = [self.edge(g.edge).length for g in self.germs(p)]
        return 0.5 * min(lengths)

    # ------------------------------------------------------------------
    # shortest-path kernel
    # ------------------------------------------------------------------

    def shortest_from_seeds(self, seeds: Dict[str, float],
                            edge_weight: Callable[[str], float]) -> Dict[str, float]:
        """Multi-seed Dijkstra over vertices.

        ``seeds`` maps vertex id -> initial cost; ``edge_weight`` gives the
        (nonnegative) traversal cost of a whole edge.  Ties are broken by
        (cost, vertex id), which makes relaxation order — and therefore any
        downstream report — deterministic.
        """
        for vid in seeds:
            if vid not in self.vertices:
                raise InputError("seed at unknown vertex %r" % vid)
        if not seeds:
            raise InputError("empty seed set")
        done: Dict[str, float] = {}
        heap = sorted((c, vid) for vid, c in seeds.items())
        while heap:
            cost, vid = heapq.heappop(heap)
            if vid in done:
                continue
            done[vid] = cost
            for eid, _end in self._adj[vid]:
                rec = self.edges[eid]
                other = rec.dst if rec.src == vid else rec.src
                if rec.src == rec.dst:
                    other = vid
                if other not in done:
                    heapq.heappush(heap, (cost + edge_weight(eid), other))
        if len(done) != len(self.vertices):
            missing = sorted(set(self.vertices) - set(done))
            raise UnreachableError("vertices unreachable from seeds: %s" % ", ".join(missing))
        return done

    def _seed_costs(self, p: GraphPoint, base: float,
                    segcost: Callable[[str, float, float], float]) -> Dict[str, float]:
        """Project a point onto vertex seeds via its own edge."""
        if isinstance(p, Vertex):
            return {p.id: base}
        rec = self.edge(p.edge)
        out: Dict[str, float] = {}
        for vid, c in ((rec.src, segcost(p.edge, 0.0, p.s)),
                       (rec.dst, segcost(p.edge, p.s, rec.length))):
            cc = base + c
            if vid not in out or cc < out[vid]:
                out[vid] = cc
        return out

    def point_cost(self, x: GraphPoint, y: GraphPoint,
                   segcost: Callable[[str, float, float], float],
                   edge_weight: Callable[[str], float]) -> float:
        """Generic shortest cost between two points for any additive edge cost.

        ``segcost(eid, s0, s1)`` must be the cost of the monotone within-edge
        segment; ``edge_weight(eid)`` the full-edge cost.  Used with unit
        costs this is the intrinsic metric, with cumulative-profile costs the
        optical length.
        """
        self.validate_point(x)
        self.validate_point(y)
        dv = self.shortest_from_seeds(self._seed_costs(x, 0.0, segcost), edge_weight)
        if isinstance(y, Vertex):
            best = dv[y.id]
        else:
            rec = self.edge(y.edge)
            best = min(dv[rec.src] + segcost(y.edge, 0.0, y.s),
                       dv[rec.dst] + segcost(y.edge, y.s, rec.length))
        if isinstance(x, EdgeInterior) and isinstance(y, EdgeInterior) and x.edge == y.edge:
            best = min(best, segcost(x.edge, min(x.s, y.s), max(x.s, y.s)))
        return best

    def distance(self, x: GraphPoint, y: GraphPoint) -> float:
        """The intrinsic metric: length of a shortest path between x and y."""
        return self.point_cost(x, y,
                               lambda eid, s0, s1: abs(s1 - s0),
                               lambda eid: self.edges[eid].length)


def graph_distance(graph: MetricGraph, x: GraphPoint, y: GraphPoint) -> float:
    return graph.distance(x, y)


class DistanceField:
    """d(., x0): exact evaluation everywhere plus exact one-sided germ
    derivatives, which are what distance-type test functions need."""

    def __init__(self, graph: MetricGraph, x0: GraphPoint):
        graph.validate_point(x0)
        self.graph = graph
        self.x0 = x0
        seg = lambda eid, s0, s1: abs(s1 - s0)
        self.vertex_values = graph.shortest_from_seeds(
            graph._seed_costs(x0, 0.0, seg), lambda eid: graph.edges[eid].length)

    def _branches(self, eid: str, s: float) -> List[Tuple[float, float]]:
        """(value, d value/d s) pairs whose pointwise min is d(., x0) on the edge."""
        rec = self.graph.edge(eid)
        out = [(self.vertex_values[rec.src] + s, 1.0),
               (self.vertex_values[rec.dst] + rec.length - s, -1.0)]
        if isinstance(self.x0, EdgeInterior) and self.x0.edge == eid:
            s0 = self.x0.s
            slope = 1.0 if s >= s0 else -1.0
            out.append((abs(s - s0), slope))
        return out

    def evaluate(self, p: GraphPoint) -> float:
        self.graph.validate_point(p)
        if isinstance(p, Vertex):
            return self.vertex_values[p.id]
        return min(v for v, _ in self._branches(p.edge, p.s))

    __call__ = evaluate

    def germ_derivative(self, p: GraphPoint, germ: Germ) -> float:
        """Exact one-sided derivative of d(., x0) along ``germ`` at ``p``."""
        branches = self._branches(germ.edge, germ.base)
        m = min(v for v, _ in branches)
        tol = 1e-12 * (1.0 + abs(m))
        derivs = []
        for v, dvds in branches:
            if v <= m + tol:
                d = germ.sign * dvds
                # the direct branch kinks at x0 itself: moving away always ascends
                if isinstance(self.x0, EdgeInterior) and self.x0.edge == germ.edge \
                        and germ.base == self.x0.s and len(branches) == 3 and (v, dvds) == branches[2]:
                    d = 1.0
                derivs.append(d)
        return min(derivs)


# ----------------------------------------------------------------------
# curves
# ----------------------------------------------------------------------

def _point_offsets_on_edge(graph: MetricGraph, p: GraphPoint, eid: str) -> List[float]:
    rec = graph.edge(eid)
    if isinstance(p, EdgeInterior):
        return [p.s] if p.edge == eid else []
    out = []
    if rec.src == p.id:
        out.append(0.0)
    if rec.dst == p.id:
        out.append(rec.length)
    return out


def _resolve_step(graph: MetricGraph, p: GraphPoint, q: GraphPoint,
                  hint: Optional[str]) -> Tuple[str, float, float]:
    """Pick the (edge, s0, s1) realization of one polyline step."""
    if hint is not None:
        offs_p = _point_offsets_on_edge(graph, p, hint)
        offs_q = _point_offsets_on_edge(graph, q, hint)
        if not offs_p or not offs_q:
            raise InputError("curve step does not lie on the annotated edge %r" % hint)
        if p == q and isinstance(p, Vertex) and len(offs_p) == 2:
            # full traversal of a self-loop
            return hint, 0.0, graph.edge(hint).length
        s0 = min(offs_p, key=lambda s: min(abs(s - t) for t in offs_q))
        s1 = min(offs_q, key=lambda t: abs(t - s0))
        return hint, s0, s1
    candidates: List[Tuple[float, str, float, float]] = []
    edge_pool = set()
    for point in (p, q):
        if isinstance(point, EdgeInterior):
            edge_pool.add(point.edge)
        else:
            edge_pool.update(eid for eid, _ in graph.adjacency(point.id))
    for eid in sorted(edge_pool):
        for s0 in _point_offsets_on_edge(graph, p, eid):
            for s1 in _point_offsets_on_edge(graph, q, eid):
                candidates.append((abs(s1 - s0), eid, s0, s1))
    if not candidates:
        raise InputError("consecutive curve points %r and %r share no edge" % (p, q))
    candidates.sort(key=lambda c: (c[0], c[1], c[2]))
    return candidates[0][1], candidates[0][2], candidates[0][3]


class Curve:
    """A polyline path: an ordered sequence of points, consecutive points on a
    common edge.  ``edges`` may annotate each step explicitly, which is the
    only unambiguous way to traverse a specific parallel edge."""

    def __init__(self, graph: MetricGraph, points: Sequence[GraphPoint],
                 edges: Optional[Sequence[str]] = None):
        if not points:
            raise InputError("a curve needs at least one point")
        for p in points:
            graph.validate_point(p)
        if edges is not None and len(edges) != len(points) - 1:
            raise InputError("curve edge annotations must have one entry per step")
        self.graph = graph
        self.points: Tuple[GraphPoint, ...] = tuple(points)
        segs: List[Tuple[str, float, float]] = []
        for i in range(len(points) - 1):
            hint = edges[i] if edges is not None else None
            segs.append(_resolve_step(graph, points[i], points[i + 1], hint))
        self.segments: Tuple[Tuple[str, float, float], ...] = tuple(segs)
        self._cum = [0.0]
        for _eid, s0, s1 in segs:
            self._cum.append(self._cum[-1] + abs(s1 - s0))

    @property
    def length(self) -> float:
        return self._cum[-1]

    @property
    def start(self) -> GraphPoint:
        return self.points[0]

    @property
    def end(self) -> GraphPoint:
        return self.points[-1]

    def point_at(self, t: float) -> GraphPoint:
        """Arc-length parametrization: the point at curve time t in [0, length]."""
        if t < -1e-12 or t > self.length + 1e-12:
            raise InputError("curve time %r outside [0, %r]" % (t, self.length))
        t = min(max(t, 0.0), self.length)
        if not self.segments:
            return self.points[0]
        # walk to the segment containing t (segments may have zero length)
        for i, (eid, s0, s1) in enumerate(self.segments):
            if t <= self._cum[i + 1] or i == len(self.segments) - 1:
                local = t - self._cum[i]
                seg_len = abs(s1 - s0)
                if seg_len == 0.0:
                    return self.points[i + 1]
                s = s0 + math.copysign(1.0, s1 - s0) * min(local, seg_len)
                return self.graph.point(eid, min(max(s, 0.0), self.graph.edge(eid).length))
        return self.points[-1]

    def prefix(self, t: float) -> "Curve":
        """The subcurve traced on [0, t], as a Curve (used to check that the
        arc-length parametrization really has unit speed)."""
        if t < 0 or t > self.length + 1e-12:
            raise InputError("curve time %r outside [0, %r]" % (t, self.length))
        pts: List[GraphPoint] = [self.points[0]]
        eids: List[str] = []
        for i, (eid, s0, s1) in enumerate(self.segments):
            if t >= self._cum[i + 1] and i < len(self.segments) - 1:
                pts.append(self.points[i + 1])
                eids.append(eid)
                continue
            local = min(t, self._cum[i + 1]) - self._cum[i]
            seg_len = abs(s1 - s0)
            if seg_len > 0.0:
                s = s0 + math.copysign(1.0, s1 - s0) * max(0.0, min(local, seg_len))
                pts.append(self.graph.point(eid, s))
                eids.append(eid)
            break
        return Curve(self.graph, pts, eids)

    def times(self) -> List[float]:
        """Curve times of the polyline breakpoints."""
        return list(self._cum)


def curve_length(curve: Curve) -> float:
    return curve.length


def arc_length_parametrize(curve: Curve) -> Curve:
    """The unit-speed representative of ``curve``.

    On a graph a polyline already is its own arc-length parametrization once
    time is measured by accumulated length, so this validates the curve is
    nondegenerate and returns an evaluator-capable Curve (``point_at``).
    """
    if curve.length <= 0.0:
        raise PreconditionError("cannot arc-length parametrize a zero-length curve")
    return curve


def random_curve(graph: MetricGraph, rng: random.Random, steps: int = 6,
                 avoid_boundary: bool = True) -> Curve:
    """A random wandering polyline, avoiding boundary vertices entirely when
    ``avoid_boundary`` (so it stays inside the open domain)."""
    eids = sorted(graph.edges)
    for _attempt in range(64):
        eid = eids[rng.randrange(len(eids))]
        rec = graph.edges[eid]
        s = rng.uniform(0.2, 0.8) * rec.length
        pts: List[GraphPoint] = [EdgeInterior(eid, s)]
        hints: List[str] = []
        cur_eid, cur_s = eid, s
        for _ in range(steps):
            rec = graph.edges[cur_eid]
            go_up = rng.random() < 0.5
            if go_up:
                target_vid, vertex_s = rec.dst, rec.length
            else:
                target_vid, vertex_s = rec.src, 0.0
            if graph.vertices[target_vid].boundary and avoid_boundary:
                # stop short of the boundary vertex
                ns = cur_s + (vertex_s - cur_s) * rng.uniform(0.3, 0.9)
                if 0.0 < ns < rec.length and ns != cur_s:
                    pts.append(EdgeInterior(cur_eid, ns))
                    hints.append(cur_eid)
                    cur_s = ns
                continue
            if rng.random() < 0.35:
                # wander within the current edge
                ns = cur_s + (vertex_s - cur_s) * rng.uniform(0.2, 0.8)
                if 0.0 < ns < rec.length and ns != cur_s:
                    pts.append(EdgeInterior(cur_eid, ns))
                    hints.append(cur_eid)
                    cur_s = ns
                continue
            # pass through the vertex into a random incident edge
            pts.append(Vertex(target_vid))
            hints.append(cur_eid)
            nxt = graph.adjacency(target_vid)
            neid, nend = nxt[rng.randrange(len(nxt))]
            nrec = graph.edges[neid]
            base = 0.0 if nend == 0 else nrec.length
            direction = 1.0 if nend == 0 else -1.0
            ns = base + direction * rng.uniform(0.2, 0.8) * nrec.length
            pts.append(EdgeInterior(neid, ns))
            hints.append(neid)
            cur_eid, cur_s = neid, ns
        if len(pts) >= 2:
            ok = all(not graph.is_boundary(p) for p in (pts if avoid_boundary else pts[1:-1]))
            if ok:
                return Curve(graph, pts, hints)
    raise InputError("could not sample a curve avoiding the boundary; is every vertex a boundary vertex?")
