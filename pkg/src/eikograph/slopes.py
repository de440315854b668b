"""Local slopes on metric graphs and the steepest-descent characterization
of solutions.

Three quantities at a point x, all defined through difference quotients
|u(y) - u(x)| / d(x, y) as y → x:

* the slope |∇u|   — absolute quotients,
* the ascending part |∇⁺u| — positive part of u(y) - u(x),
* the descending part |∇⁻u| — positive part of u(x) - u(y).

On a graph every approach to x funnels along finitely many edge germs, so for
piecewise-closed-form functions the limsups collapse to exact one-sided
directional derivatives; for black-box functions a shrinking-radius sampler
stands in for the limit.  A function solves |∇u| = f in the steepest-descent
sense when |∇⁻u| = f away from the boundary.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, List, Optional, Sequence, Tuple

from .cost import CostField
from .errors import InputError, PreconditionError, VerificationError
from .graph import (DistanceField, EdgeInterior, Germ, GraphPoint, MetricGraph,
                    Vertex)

#: radius schedule for the sampling estimator: r0 * 2^-k for k = 0..12,
#: with the reported value the max over the tail k >= TAIL_START.
N_RADII = 13
TAIL_START = 8

EXACT_TOL = 1e-8
SAMPLED_TOL = 1e-4


@dataclass(frozen=True)
class SlopeEstimate:
    point: GraphPoint
    total: float      # |∇u|
    up: float         # |∇⁺u|
    down: float       # |∇⁻u|
    method: str       # "exact-directional" | "shrinking-radius"
    radii: Tuple[float, ...] = ()

    def __post_init__(self):
        if min(self.total, self.up, self.down) < 0:
            raise VerificationError("negative slope in %r" % (self,))
        if self.total != max(self.up, self.down):
            raise VerificationError(
                "slope identity |∇u| = max(|∇⁺u|, |∇⁻u|) broken: %r" % (self,))

    @property
    def tol(self) -> float:
        return EXACT_TOL if self.method == "exact-directional" else SAMPLED_TOL


def _evaluate(u, p: GraphPoint) -> float:
    return u.evaluate(p) if hasattr(u, "evaluate") else u(p)


def _resolve_graph(u, graph: Optional[MetricGraph]) -> MetricGraph:
    g = getattr(u, "graph", None) or graph
    if g is None:
        raise PreconditionError("no graph: pass graph= or use a graph-aware function")
    return g


def slopes(u, x: GraphPoint, graph: Optional[MetricGraph] = None,
           method: str = "auto", n_radii: int = N_RADII) -> SlopeEstimate:
    """Slope triple of ``u`` at ``x``.

    ``method`` is "exact" (one-sided germ derivatives; requires the function
    to expose ``germ_derivative``), "sampled" (shrinking-radius quotients
    needing only point evaluation), or "auto" to prefer exact when available.
    ``n_radii`` sizes the sampled schedule; the reported values come from its
    last five radii.
    """
    g = _resolve_graph(u, graph)
    g.validate_point(x)
    if method == "auto":
        method = "exact" if hasattr(u, "germ_derivative") else "sampled"
    if method == "exact":
        if not hasattr(u, "germ_derivative"):
            raise PreconditionError("function has no germ_derivative; use method='sampled'")
        up = down = 0.0
        for germ in g.germs(x):
            d = u.germ_derivative(x, germ)
            up = max(up, d)
            down = max(down, -d)
        return SlopeEstimate(x, max(up, down), up, down, "exact-directional")
    if method != "sampled":
        raise InputError("unknown slope method %r" % method)
    if n_radii < 1:
        raise InputError("n_radii must be >= 1 (got %r)" % n_radii)
    r0 = g.half_min_incident(x)
    radii = tuple(r0 * 2.0 ** (-k) for k in range(n_radii))
    tail_start = max(0, n_radii - (N_RADII - TAIL_START))
    ux = _evaluate(u, x)
    germs = g.germs(x)
    up = down = 0.0
    for k in range(tail_start, n_radii):
        for germ in germs:
            t = min(radii[k], g.germ_available(germ))
            if t <= 0.0:
                continue
            # within this radius the germ parametrizes by arc length, so the
            # metric distance to the sampled point is exactly t
            q = (_evaluate(u, g.germ_point(germ, t)) - ux) / t
            up = max(up, q)
            down = max(down, -q)
    return SlopeEstimate(x, max(up, down), up, down, "shrinking-radius", radii)


# ----------------------------------------------------------------------
# steepest-descent (Monge-type) verification
# ----------------------------------------------------------------------

@dataclass
class MongeSample:
    point: GraphPoint
    kind: str            # "edge" | "edge-kink" | "vertex" | "skipped"
    down: float
    f_lo: float          # required f (min over incident germs at a vertex)
    f_hi: float
    residual: float      # down - f_lo
    sub_ok: bool
    super_ok: bool
    reason: str = ""

    def to_dict(self) -> dict:
        p = {"vertex": self.point.id} if isinstance(self.point, Vertex) \
            else {"edge": self.point.edge, "s": self.point.s}
        return {"point": p, "kind": self.kind, "down": self.down,
                "f_lo": self.f_lo, "f_hi": self.f_hi, "residual": self.residual,
                "sub_ok": self.sub_ok, "super_ok": self.super_ok, "reason": self.reason}


@dataclass
class MongeReport:
    ok: bool
    subsolution_ok: bool
    supersolution_ok: bool
    tol: float
    worst_violation: float
    worst_point: Optional[GraphPoint]
    samples: List[MongeSample] = dc_field(default_factory=list)

    def to_dict(self) -> dict:
        wp = None
        if self.worst_point is not None:
            wp = {"vertex": self.worst_point.id} if isinstance(self.worst_point, Vertex) \
                else {"edge": self.worst_point.edge, "s": self.worst_point.s}
        return {"ok": self.ok, "subsolution_ok": self.subsolution_ok,
                "supersolution_ok": self.supersolution_ok, "tol": self.tol,
                "worst_violation": self.worst_violation, "worst_point": wp,
                "samples": [s.to_dict() for s in self.samples]}


def _monge_default_samples(graph: MetricGraph, n_per_edge: int = 5) -> List[GraphPoint]:
    pts: List[GraphPoint] = []
    for vid, rec in graph.vertices.items():
        if not rec.boundary:
            pts.append(Vertex(vid))
    for eid in sorted(graph.edges):
        L = graph.edges[eid].length
        for k in range(1, n_per_edge + 1):
            pts.append(EdgeInterior(eid, L * k / (n_per_edge + 1)))
    return pts


def verify_monge(u, field: CostField, points: Optional[Sequence[GraphPoint]] = None,
                 tol: Optional[float] = None, method: str = "auto",
                 n_radii: int = N_RADII) -> MongeReport:
    """Check |∇⁻u| = f where u should solve, inequality-style where it can't.

    At an interior point strictly inside an edge where the two one-sided
    behaviours agree (|∇⁺u| = |∇⁻u|), equality with f is required.  At kinks
    of u inside an edge and at interior vertices — where several germs with
    possibly different f-values meet — the descending slope is only pinned to
    the interval [min, max] of the incident f-values: below it the
    supersolution half fails, above it the subsolution half fails.  Boundary
    vertices are outside the equation's jurisdiction and get skipped.
    """
    graph = field.graph
    if points is None:
        points = _monge_default_samples(graph)
    if tol is None:
        use_exact = (method == "exact") or (method == "auto" and hasattr(u, "germ_derivative"))
        tol = EXACT_TOL if use_exact else SAMPLED_TOL
    samples: List[MongeSample] = []
    sub_ok = super_ok = True
    worst = 0.0
    worst_point: Optional[GraphPoint] = None
    for p in points:
        graph.validate_point(p)
        if graph.is_boundary(p):
            samples.append(MongeSample(p, "skipped", math.nan, math.nan, math.nan,
                                       math.nan, True, True, reason="boundary vertex"))
            continue
        est = slopes(u, p, graph=graph, method=method, n_radii=n_radii)
        if isinstance(p, Vertex):
            fvals = [field.germ_value(germ) for germ in graph.germs(p)]
            f_lo, f_hi = min(fvals), max(fvals)
            kind = "vertex"
        else:
            f_lo = f_hi = field.value_at(p)
            kind = "edge" if abs(est.up - est.down) <= tol else "edge-kink"
        s_ok = est.down <= f_hi + tol
        p_ok = est.down >= f_lo - tol
        viol = max(est.down - f_hi, f_lo - est.down, 0.0)
        if viol > worst:
            worst, worst_point = viol, p
        sub_ok &= s_ok
        super_ok &= p_ok
        samples.append(MongeSample(p, kind, est.down, f_lo, f_hi, est.down - f_lo, s_ok, p_ok))
    return MongeReport(ok=(sub_ok and super_ok), subsolution_ok=sub_ok,
                       supersolution_ok=super_ok, tol=tol, worst_violation=worst,
                       worst_point=worst_point, samples=samples)


def monge_samples_csv(report: MongeReport) -> str:
    """CSV rows (point, |∇⁻u|, required f, residual) for a MongeReport."""
    lines = ["point,down,f,residual"]
    for s in report.samples:
        if s.kind == "skipped":
            continue
        if isinstance(s.point, Vertex):
            loc = "vertex:%s" % s.point.id
        else:
            loc = "edge:%s@%.12g" % (s.point.edge, s.point.s)
        lines.append("%s,%.12g,%.12g,%.12g" % (loc, s.down, s.f_lo, s.residual))
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# distance-type test functions
# ----------------------------------------------------------------------

class DistanceTestFunction:
    """φ(x) = h(d(x, x₀)) with one-sided derivatives by the chain rule.

    The germ derivative of d(·, x₀) is ±1 exactly on a graph, so
    ∂φ = h'(d) · ∂d germ-wise; ``h`` itself is only needed for evaluation
    (the sampled slope path), not for the exact derivatives.
    """

    def __init__(self, graph: MetricGraph, x0: GraphPoint,
                 hprime: Callable[[float], float],
                 h: Optional[Callable[[float], float]] = None):
        self.graph = graph
        self.x0 = x0
        self.hprime = hprime
        self.h = h
        self.dist = DistanceField(graph, x0)

    def evaluate(self, p: GraphPoint) -> float:
        if self.h is None:
            raise PreconditionError("no h supplied; only derivatives are available")
        return self.h(self.dist.evaluate(p))

    __call__ = evaluate

    def germ_derivative(self, p: GraphPoint, germ: Germ) -> float:
        r = self.dist.evaluate(p)
        return self.hprime(r) * self.dist.germ_derivative(p, germ)


def distance_test_slope(graph: MetricGraph, x0: GraphPoint,
                        hprime: Callable[[float], float], x: GraphPoint,
                        tol: float = EXACT_TOL) -> float:
    """Slope of φ = h(d(·, x₀)) at x, which for nondecreasing h with
    h'(0) = 0 is h'(d(x, x₀)) — both the full slope and the descending part.

    Returns that value after checking it against the slope engine run on the
    composed function; a disagreement is a genuine defect in the slope
    machinery and raises.
    """
    h0 = hprime(0.0)
    if h0 != 0.0:
        raise PreconditionError("h'(0) must vanish, got %r" % h0)
    phi = DistanceTestFunction(graph, x0, hprime)
    r = phi.dist.evaluate(x)
    value = hprime(r)
    if value < 0.0:
        raise PreconditionError("h' must be nonnegative; h'(%r) = %r" % (r, value))
    est = slopes(phi, x, graph=graph, method="exact")
    if r == 0.0:
        agreed = est.total <= tol
    else:
        agreed = abs(est.total - value) <= tol and abs(est.down - value) <= tol
    if not agreed:
        raise VerificationError(
            "slope engine disagrees with h'(d): expected %r, got %r" % (value, est))
    return value


# ----------------------------------------------------------------------
# one-dimensional semiconcavity identity
# ----------------------------------------------------------------------

@dataclass
class SemiconcaveReport:
    ok: bool
    K: float
    max_gap: float        # max over interior points of |∇u| - |∇⁻u| (>= 0)
    gap_bound: float      # 2 K h_max, the kink convexity a K-semiconcave u allows
    points: List[Tuple[float, float, float]] = dc_field(default_factory=list)  # (x, total, down)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "K": self.K, "max_gap": self.max_gap,
                "gap_bound": self.gap_bound,
                "points": [list(t) for t in self.points]}


def semiconcave_slope_check(xs: Sequence[float], ys: Sequence[float], K: float,
                            tol: float = 1e-12) -> SemiconcaveReport:
    """For K-semiconcave u (u - Kx² concave), the slope has no ascending
    excess: |∇u| = |∇⁻u|.  Checked on the piecewise-linear interpolant of the
    samples, whose one-sided derivatives at grid points are the chord slopes.

    The concavity precondition is verified first from second differences of
    u - Kx² and a violation names the offending triple.
    """
    if len(xs) != len(ys) or len(xs) < 3:
        raise InputError("need matching xs/ys with at least 3 samples")
    if any(xs[i] >= xs[i + 1] for i in range(len(xs) - 1)):
        raise InputError("xs must be strictly increasing")
    zs = [y - K * x * x for x, y in zip(xs, ys)]
    for i in range(1, len(xs) - 1):
        hl = xs[i] - xs[i - 1]
        hr = xs[i + 1] - xs[i]
        bend = (zs[i + 1] - zs[i]) / hr - (zs[i] - zs[i - 1]) / hl
        if bend > tol:
            raise PreconditionError(
                "u - K x² is not concave across x = (%r, %r, %r): chord slope rises by %r"
                % (xs[i - 1], xs[i], xs[i + 1], bend))
    h_max = max(xs[i + 1] - xs[i] for i in range(len(xs) - 1))
    bound = 2.0 * K * h_max
    pts: List[Tuple[float, float, float]] = []
    max_gap = 0.0
    for i in range(1, len(xs) - 1):
        ml = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])
        mr = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])
        total = max(abs(ml), abs(mr))
        down = max(ml, -mr, 0.0)
        max_gap = max(max_gap, total - down)
        pts.append((xs[i], total, down))
    return SemiconcaveReport(ok=(max_gap <= bound + tol), K=K, max_gap=max_gap,
                             gap_bound=bound, points=pts)
