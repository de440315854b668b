"""The Dirichlet solver and its verification battery.

The solver itself is one formula: with boundary data g on the boundary
vertices and optical length L_f,

    u(x) = min over boundary y of ( g(y) + L_f(x, y) ).

Everything else in this module is about *checking* a candidate: the exact
dynamic-programming principle on small balls, the sub-optimality inequality
along arbitrary curves, attainment of the boundary data with an explicit
modulus, and the compatibility condition on g that separates the two.
"""
from __future__ import annotations

import bisect
import math
import random
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .cost import CostField, path_integral
from .errors import InputError, PreconditionError
from .graph import Curve, EdgeInterior, GraphPoint, MetricGraph, Vertex, random_curve
from .optical import OpticalMap, optical_length


class BoundaryData:
    """Dirichlet data: finite values on exactly the boundary vertices."""

    def __init__(self, graph: MetricGraph, values: Dict[str, float]):
        bids = set(graph.boundary_ids)
        if not bids:
            raise InputError("graph has no boundary vertices")
        given = set(values)
        if given != bids:
            missing = sorted(bids - given)
            extra = sorted(given - bids)
            parts = []
            if missing:
                parts.append("missing data at boundary vertices: %s" % ", ".join(missing))
            if extra:
                parts.append("data given at non-boundary vertices: %s" % ", ".join(extra))
            raise InputError("; ".join(parts))
        for vid, g in values.items():
            if not (isinstance(g, (int, float)) and math.isfinite(g)):
                raise InputError("boundary value at %r must be finite (got %r)" % (vid, g))
        self.graph = graph
        self.values = {vid: float(g) for vid, g in values.items()}

    def __getitem__(self, vid: str) -> float:
        return self.values[vid]

    def items(self):
        return self.values.items()


class ValueFunction(OpticalMap):
    """The optimal-control value of the Dirichlet problem, as an OpticalMap
    seeded at the boundary with g."""

    def __init__(self, field: CostField, data: BoundaryData):
        if data.graph is not field.graph:
            raise InputError("boundary data and cost field refer to different graphs")
        seeds = {Vertex(vid): g for vid, g in data.items()}
        super().__init__(field, seeds)
        self.data = data

    def boundary_value(self, vid: str) -> float:
        return self.data[vid]


def solve(field: CostField, data: BoundaryData) -> ValueFunction:
    """Solve the Dirichlet problem |∇u| = f, u = g on the boundary, by the
    optimal-control value formula.  The formula itself never fails; whether
    the result attains g is exactly the compatibility question."""
    return ValueFunction(field, data)


@dataclass
class CompatibilityReport:
    ok: bool
    worst_violation: float
    witness: Optional[Tuple[str, str]]  # (x, y) with g(x) > g(y) + L_f(x, y)

    def to_dict(self) -> dict:
        return {"ok": self.ok,
                "worst_violation": self.worst_violation,
                "witness": list(self.witness) if self.witness else None}


def check_compatibility(field: CostField, data: BoundaryData, tol: float = 1e-12) -> CompatibilityReport:
    """g is compatible iff g(x) <= g(y) + L_f(x, y) for all boundary x, y.

    Equivalent statement: the value formula reproduces g at every boundary
    vertex, which is what is checked (the map already holds every pairwise
    minimum)."""
    u = ValueFunction(field, data)
    worst = 0.0
    witness = None
    for vid, g in data.items():
        gap = g - u.vertex_values[vid]  # >= 0 always; > 0 means violated at vid
        if gap > worst:
            worst = gap
            # find the y achieving the undercut, for the report
            best_y, best_val = None, math.inf
            for wid, gy in data.items():
                if wid == vid:
                    continue
                val = gy + optical_length(field, Vertex(vid), Vertex(wid))
                if val < best_val:
                    best_val, best_y = val, wid
            witness = (vid, best_y if best_y is not None else vid)
    return CompatibilityReport(ok=(worst <= tol), worst_violation=worst, witness=witness)


# ----------------------------------------------------------------------
# dynamic programming principle
# ----------------------------------------------------------------------

@dataclass
class DPPSample:
    point: GraphPoint
    tau: float
    residual: float          # min over germ candidates minus u(point); >= 0 and ~0 for the value
    skipped: bool = False
    reason: str = ""

    def to_dict(self) -> dict:
        return {"point": _point_to_obj(self.point), "tau": self.tau,
                "residual": self.residual, "skipped": self.skipped, "reason": self.reason}


@dataclass
class DPPReport:
    ok: bool
    tol: float
    max_defect: float        # max over samples of max(0, -residual) and residual magnitude
    samples: List[DPPSample] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "tol": self.tol, "max_defect": self.max_defect,
                "samples": [s.to_dict() for s in self.samples]}


def _point_to_obj(p: GraphPoint):
    if isinstance(p, Vertex):
        return {"vertex": p.id}
    return {"edge": p.edge, "s": p.s}


def _default_samples(graph: MetricGraph, n_per_edge: int = 3) -> List[GraphPoint]:
    pts: List[GraphPoint] = []
    for vid, rec in graph.vertices.items():
        if not rec.boundary:
            pts.append(Vertex(vid))
    for eid, rec in graph.edges.items():
        for k in range(1, n_per_edge + 1):
            pts.append(EdgeInterior(eid, rec.length * k / (n_per_edge + 1)))
    return pts


def _distance_to_boundary(graph: MetricGraph, p: GraphPoint) -> float:
    bids = graph.boundary_ids
    if not bids:
        return math.inf
    if isinstance(p, Vertex) and graph.vertices[p.id].boundary:
        return 0.0
    dv = graph.shortest_from_seeds(
        graph._seed_costs(p, 0.0, lambda eid, s0, s1: abs(s1 - s0)),
        lambda eid: graph.edges[eid].length)
    return min(dv[vid] for vid in bids)


def verify_dpp(u: OpticalMap, points: Optional[Sequence[GraphPoint]] = None,
               tau: Optional[float] = None, tol: Optional[float] = None) -> DPPReport:
    """Check the exact dynamic programming principle

        u(x) = min over unit-speed departures of ( cost to y + u(y) ),

    with the minimum taken over walks of arc length min(tau_x, germ length
    available) along every germ at x.  For the optimal-control value this
    holds with equality; for a strict supersolution-side failure the residual
    goes negative.  Interior points whose chosen radius reaches the boundary
    region are recorded as skipped, not silently passed.
    """
    graph = u.graph
    field = u.field
    if tol is None:
        tol = field.default_tol()
    if points is None:
        points = _default_samples(graph)
    samples: List[DPPSample] = []
    max_defect = 0.0
    ok = True
    for p in points:
        graph.validate_point(p)
        if graph.is_boundary(p):
            samples.append(DPPSample(p, 0.0, 0.0, skipped=True, reason="boundary point"))
            continue
        tau_x = tau if tau is not None else graph.half_min_incident(p)
        dist_b = _distance_to_boundary(graph, p)
        if tau_x > dist_b:
            samples.append(DPPSample(p, tau_x, 0.0, skipped=True,
                                     reason="radius %g exceeds distance %g to the boundary" % (tau_x, dist_b)))
            continue
        ux = u.evaluate(p)
        best = math.inf
        for germ in graph.germs(p):
            t = min(tau_x, graph.germ_available(germ))
            if t <= 0.0:
                continue
            y = graph.germ_point(germ, t)
            if germ.sign > 0:
                run = field.edge_cost(germ.edge, germ.base, germ.base + t)
            else:
                run = field.edge_cost(germ.edge, germ.base - t, germ.base)
            best = min(best, run + u.evaluate(y))
        residual = best - ux
        defect = abs(residual)
        samples.append(DPPSample(p, tau_x, residual))
        max_defect = max(max_defect, defect)
        if defect > tol:
            ok = False
    return DPPReport(ok=ok, tol=tol, max_defect=max_defect, samples=samples)


# ----------------------------------------------------------------------
# sub-optimality along curves
# ----------------------------------------------------------------------

@dataclass
class SuboptimalityReport:
    ok: bool
    tol: float
    max_defect: float
    n_curves: int
    n_pairs: int

    def to_dict(self) -> dict:
        return {"ok": self.ok, "tol": self.tol, "max_defect": self.max_defect,
                "n_curves": self.n_curves, "n_pairs": self.n_pairs}


def verify_suboptimality(u: OpticalMap, curves: Optional[Sequence[Curve]] = None,
                         rng: Optional[random.Random] = None, n_random: int = 12,
                         times_per_curve: int = 6, tol: Optional[float] = None) -> SuboptimalityReport:
    """Check  u(γ(t1)) - u(γ(t0)) <= ∫_{t0}^{t1} f(γ) ds  for curves γ and
    time pairs t0 <= t1.  The value function satisfies this along *every*
    curve (it is 1-Lipschitz for the optical metric), so random wandering
    curves are a fair test set."""
    field = u.field
    graph = u.graph
    if tol is None:
        tol = field.default_tol()
    if curves is None:
        rng = rng or random.Random(0)
        curves = []
        for _ in range(n_random):
            try:
                curves.append(random_curve(graph, rng, steps=rng.randrange(3, 9)))
            except InputError:
                break
    max_defect = 0.0
    n_pairs = 0
    local_rng = rng or random.Random(1)
    for curve in curves:
        ts = sorted(set(curve.times()) | {curve.length * local_rng.random() for _ in range(times_per_curve)})
        bkpts = curve.times()
        # Cumulative running cost at the curve's breakpoints, computed once;
        # each query time then needs a single partial-edge integral, and the
        # pair loop below is plain arithmetic on cached arrays.
        csum = [0.0]
        for eid, s0, s1 in curve.segments:
            csum.append(csum[-1] + field.edge_cost(eid, s0, s1))
        fvals = []
        uvals = []
        last = len(curve.segments) - 1
        for t in ts:
            k = min(max(bisect.bisect_right(bkpts, t) - 1, 0), last)
            eid, s0, s1 = curve.segments[k]
            step = t - bkpts[k]
            s = s0 + (step if s1 >= s0 else -step)
            s = min(max(s, min(s0, s1)), max(s0, s1))
            fvals.append(csum[k] + field.edge_cost(eid, s0, s))
            uvals.append(u.evaluate(curve.point_at(t)))
        for i in range(len(ts)):
            for j in range(i + 1, len(ts)):
                max_defect = max(max_defect, (uvals[j] - uvals[i]) - (fvals[j] - fvals[i]))
                n_pairs += 1
    return SuboptimalityReport(ok=(max_defect <= tol), tol=tol, max_defect=max_defect,
                               n_curves=len(list(curves)), n_pairs=n_pairs)


# ----------------------------------------------------------------------
# boundary attainment
# ----------------------------------------------------------------------

@dataclass
class BoundaryModulusReport:
    ok: bool
    upper_constant: float      # u(x) - g(y) <= C d(x,y) with this C (unconditional)
    modulus_constant: float    # |u(x) - g(y)| <= modulus(d(x,y)) under compatibility
    compatible: bool
    max_upper_defect: float
    max_abs_defect: float      # only meaningful when compatible
    n_checked: int

    def to_dict(self) -> dict:
        return {"ok": self.ok, "upper_constant": self.upper_constant,
                "modulus_constant": self.modulus_constant, "compatible": self.compatible,
                "max_upper_defect": self.max_upper_defect, "max_abs_defect": self.max_abs_defect,
                "n_checked": self.n_checked}


def _lipschitz_of_g(graph: MetricGraph, data: BoundaryData) -> float:
    """Least L with |g(x) - g(y)| <= L d(x, y) over boundary pairs."""
    bids = graph.boundary_ids
    best = 0.0
    for i, a in enumerate(bids):
        dv = graph.shortest_from_seeds({a: 0.0}, lambda eid: graph.edges[eid].length)
        for b in bids[i + 1:]:
            d = dv[b]
            if d > 0:
                best = max(best, abs(data[a] - data[b]) / d)
    return best


def boundary_modulus(u: ValueFunction, points: Optional[Sequence[GraphPoint]] = None,
                     tol: float = 1e-9) -> BoundaryModulusReport:
    """How u meets its boundary data.

    Unconditionally  u(x) - g(y) <= max(sup f, Lip g) · d(x, y)  for every
    point x and boundary vertex y.  When g is compatible the two-sided bound
    |u(x) - g(y)| <= (2 sup f) d(x, y) + ω_g(2 d(x, y))  holds with
    ω_g(r) = (Lip g) r; incompatible data genuinely loses the lower side at
    the violated vertices, so then only the one-sided bound is asserted.
    """
    graph = u.graph
    field = u.field
    data = u.data
    supf = field.sup_value()
    lipg = _lipschitz_of_g(graph, data)
    upper_c = max(supf, lipg)
    comp = check_compatibility(field, data).ok
    if points is None:
        points = _default_samples(graph)
        points += [Vertex(vid) for vid in graph.boundary_ids]
    max_upper = -math.inf
    max_abs = -math.inf
    n = 0
    for p in points:
        for vid in graph.boundary_ids:
            d = graph.distance(p, Vertex(vid))
            ux = u.evaluate(p)
            g = data[vid]
            max_upper = max(max_upper, (ux - g) - upper_c * d)
            if comp:
                bound = 2.0 * supf * d + lipg * 2.0 * d
                max_abs = max(max_abs, abs(ux - g) - bound)
            n += 1
    ok = max_upper <= tol and (not comp or max_abs <= tol)
    return BoundaryModulusReport(ok=ok, upper_constant=upper_c,
                                 modulus_constant=2.0 * supf + 2.0 * lipg,
                                 compatible=comp,
                                 max_upper_defect=max_upper,
                                 max_abs_defect=(max_abs if comp else math.nan),
                                 n_checked=n)


# ----------------------------------------------------------------------
# sampling helpers for output
# ----------------------------------------------------------------------

def edge_samples(u: OpticalMap, n_per_edge: int = 33) -> List[Tuple[str, float, float]]:
    """(edge id, offset, u) rows on a uniform grid of every edge, in edge-id
    then offset order — the deterministic tabular form of the solution."""
    rows: List[Tuple[str, float, float]] = []
    for eid in sorted(u.graph.edges):
        L = u.graph.edges[eid].length
        for k in range(n_per_edge):
            s = L * k / (n_per_edge - 1)
            p = u.graph.point(eid, s)
            rows.append((eid, s, u.evaluate(p)))
    return rows
