"""Metric-graph foundations: validation, points, germs, distances, curves."""
import math
import random

import pytest
from hypothesis import given, strategies as st

from eikograph import (Curve, DistanceField, EdgeInterior, Germ, InputError,
                       MetricGraph, Vertex, arc_length_parametrize,
                       curve_length, graph_distance, random_curve)
from conftest import build_instance, random_graph_spec, tiny_dijkstra


def star3():
    """Three unit edges from a hub to boundary leaves."""
    return MetricGraph(
        [("c",), ("l0", True), ("l1", True), ("l2", True)],
        [("a0", "c", "l0", 1.0), ("a1", "c", "l1", 1.0), ("a2", "c", "l2", 1.0)])


# ----------------------------------------------------------------------
# construction and validation
# ----------------------------------------------------------------------

def test_duplicate_vertex_rejected():
    with pytest.raises(InputError, match="duplicate vertex"):
        MetricGraph([("a",), ("a",)], [])


def test_duplicate_edge_rejected():
    with pytest.raises(InputError, match="duplicate edge"):
        MetricGraph([("a",), ("b",)],
                    [("e", "a", "b", 1.0), ("e", "b", "a", 1.0)])


def test_dangling_endpoint_rejected():
    with pytest.raises(InputError, match="unknown vertex"):
        MetricGraph([("a",)], [("e", "a", "zzz", 1.0)])


@pytest.mark.parametrize("bad_len", [0.0, -1.0, math.inf, math.nan])
def test_nonpositive_length_rejected(bad_len):
    with pytest.raises(InputError, match="positive finite length"):
        MetricGraph([("a",), ("b",)], [("e", "a", "b", bad_len)])


def test_disconnected_rejected():
    with pytest.raises(InputError, match="not connected"):
        MetricGraph([("a",), ("b",), ("c",)], [("e", "a", "b", 1.0)])


def test_self_loops_and_parallel_edges_allowed():
    g = MetricGraph([("a",), ("b", True)],
                    [("e0", "a", "b", 1.0), ("e1", "a", "b", 2.0),
                     ("loop", "a", "a", 0.5)])
    assert sorted(g.edges) == ["e0", "e1", "loop"]
    assert g.boundary_ids == ["b"]
    # the self-loop contributes both of its ends to a's adjacency
    assert len(g.adjacency("a")) == 4


# ----------------------------------------------------------------------
# points and germs
# ----------------------------------------------------------------------

def test_point_canonicalizes_endpoints(interval):
    graph, _, _ = interval
    assert graph.point("e", 0.0) == Vertex("L")
    assert graph.point("e", 2.0) == Vertex("R")
    p = graph.point("e", 0.7)
    assert p == EdgeInterior("e", 0.7)


def test_point_outside_edge_rejected(interval):
    graph, _, _ = interval
    with pytest.raises(InputError):
        graph.point("e", -0.1)
    with pytest.raises(InputError):
        graph.point("e", 2.1)


def test_germ_counts(interval):
    graph, _, _ = interval
    assert len(graph.germs(Vertex("L"))) == 1
    assert len(graph.germs(graph.point("e", 1.0))) == 2
    assert len(star3().germs(Vertex("c"))) == 3


def test_germ_point_is_isometric_up_to_half_min_edge():
    """d(x, germ(t)) == t for t below half the shortest incident edge: every
    short walk along one germ is itself the unique shortest route."""
    g = star3()
    x = Vertex("c")
    r0 = g.half_min_incident(x)
    assert r0 == 0.5
    for germ in g.germs(x):
        for t in (0.0, 0.125, 0.25, r0):
            y = g.germ_point(germ, t)
            assert g.distance(x, y) == pytest.approx(t, abs=1e-15)


def test_germ_available_is_remaining_length(interval):
    graph, _, _ = interval
    p = graph.point("e", 0.5)
    avail = sorted(graph.germ_available(germ) for germ in graph.germs(p))
    assert avail == [0.5, 1.5]


# ----------------------------------------------------------------------
# shortest paths against the bare-heapq oracle
# ----------------------------------------------------------------------

@given(st.integers(0, 10_000))
def test_vertex_shortest_paths_match_oracle(seed):
    rng = random.Random(seed)
    spec = random_graph_spec(rng, max_vertices=12, max_extra_edges=10)
    graph, _, _ = build_instance(spec)
    adj = {vid: [] for vid in spec["vertices"]}
    for e in spec["edges"]:
        adj[e["src"]].append((e["dst"], e["length"]))
        adj[e["dst"]].append((e["src"], e["length"]))
    seeds = {spec["boundary"][0]: 0.0}
    want = tiny_dijkstra(adj, seeds)
    got = graph.shortest_from_seeds(seeds, lambda eid: graph.edges[eid].length)
    for vid in spec["vertices"]:
        assert got[vid] == pytest.approx(want[vid], abs=1e-12)


def _random_point(graph, rng):
    eid = sorted(graph.edges)[rng.randrange(len(graph.edges))]
    return graph.point(eid, rng.random() * graph.edges[eid].length)


@given(st.integers(0, 10_000))
def test_distance_is_a_metric(seed):
    rng = random.Random(seed)
    spec = random_graph_spec(rng, max_vertices=8, max_extra_edges=6)
    graph, _, _ = build_instance(spec)
    x, y, z = (_random_point(graph, rng) for _ in range(3))
    dxy = graph.distance(x, y)
    assert dxy >= 0.0
    assert graph.distance(x, x) == 0.0
    assert graph.distance(y, x) == pytest.approx(dxy, abs=1e-12)
    assert dxy <= graph.distance(x, z) + graph.distance(z, y) + 1e-12


def test_interval_distance_is_coordinate_gap(interval):
    graph, _, _ = interval
    p, q = graph.point("e", 0.25), graph.point("e", 1.8)
    assert graph.distance(p, q) == pytest.approx(1.55, abs=1e-15)
    assert graph_distance(graph, Vertex("L"), Vertex("R")) == 2.0


def test_same_edge_detour_beats_direct_when_shorter():
    # parallel edges: a long edge whose interior points are better reached
    # around the short one
    g = MetricGraph([("a",), ("b", True)],
                    [("short", "a", "b", 1.0), ("long", "a", "b", 10.0)])
    p = g.point("long", 4.0)
    # direct along "long": 4.0; around: 4.0 stays best from a...
    assert g.distance(Vertex("a"), p) == pytest.approx(4.0)
    q = g.point("long", 9.5)
    # direct 9.5 vs through b on "short" then 0.5 back: 1.5
    assert g.distance(Vertex("a"), q) == pytest.approx(1.5)


# ----------------------------------------------------------------------
# DistanceField
# ----------------------------------------------------------------------

def test_distance_field_matches_pairwise_distance():
    rng = random.Random(5)
    spec = random_graph_spec(rng, max_vertices=9, max_extra_edges=8)
    graph, _, _ = build_instance(spec)
    x0 = _random_point(graph, rng)
    dfield = DistanceField(graph, x0)
    for _ in range(25):
        p = _random_point(graph, rng)
        assert dfield.evaluate(p) == pytest.approx(graph.distance(x0, p), abs=1e-12)


def test_distance_field_germ_derivatives_on_interval(interval):
    graph, _, _ = interval
    x0 = graph.point("e", 1.0)
    dfield = DistanceField(graph, x0)
    p = graph.point("e", 1.5)
    derivs = {germ.sign: dfield.germ_derivative(p, germ) for germ in graph.germs(p)}
    assert derivs[+1] == 1.0    # away from x0
    assert derivs[-1] == -1.0   # toward x0
    at_base = {germ.sign: dfield.germ_derivative(x0, germ) for germ in graph.germs(x0)}
    assert at_base == {+1: 1.0, -1: 1.0}   # distance grows in both directions


# ----------------------------------------------------------------------
# curves
# ----------------------------------------------------------------------

def test_curve_basic_polyline(interval):
    graph, _, _ = interval
    c = Curve(graph, [Vertex("L"), graph.point("e", 1.2), graph.point("e", 0.4)])
    assert c.length == pytest.approx(2.0)
    assert c.times() == pytest.approx([0.0, 1.2, 2.0])
    assert c.point_at(0.0) == Vertex("L")
    assert c.point_at(1.2) == EdgeInterior("e", 1.2)
    # after the turn the curve heads back down the edge
    assert c.point_at(1.5) == EdgeInterior("e", pytest.approx(0.9))
    assert curve_length(c) == c.length


def test_curve_prefix_has_matching_endpoint(interval):
    graph, _, _ = interval
    c = Curve(graph, [Vertex("L"), graph.point("e", 1.5), graph.point("e", 1.0)])
    for t in (0.0, 0.3, 1.5, 1.7, c.length):
        pre = c.prefix(t)
        assert pre.length == pytest.approx(t, abs=1e-12)
        assert graph.distance(pre.end, c.point_at(t)) == pytest.approx(0.0, abs=1e-12)


def test_curve_needs_shared_edge():
    g = star3()
    with pytest.raises(InputError, match="share no edge"):
        Curve(g, [Vertex("l0"), Vertex("l1")])


def test_curve_hint_selects_parallel_edge():
    g = MetricGraph([("a",), ("b", True)],
                    [("e0", "a", "b", 1.0), ("e1", "a", "b", 5.0)])
    fast = Curve(g, [Vertex("a"), Vertex("b")], edges=["e0"])
    slow = Curve(g, [Vertex("a"), Vertex("b")], edges=["e1"])
    assert fast.length == 1.0 and slow.length == 5.0
    # without the hint the shortest realization wins
    assert Curve(g, [Vertex("a"), Vertex("b")]).length == 1.0
    with pytest.raises(InputError, match="annotated edge"):
        Curve(g, [Vertex("a"), g.point("e1", 2.0)], edges=["e0"])


def test_curve_self_loop_full_traversal():
    g = MetricGraph([("a",), ("b", True)],
                    [("loop", "a", "a", 2.0), ("e", "a", "b", 1.0)])
    c = Curve(g, [Vertex("a"), Vertex("a")], edges=["loop"])
    assert c.length == 2.0
    assert c.point_at(1.0) == EdgeInterior("loop", 1.0)


def test_arc_length_parametrize_rejects_degenerate(interval):
    graph, _, _ = interval
    c = Curve(graph, [graph.point("e", 1.0)])
    from eikograph import PreconditionError
    with pytest.raises(PreconditionError):
        arc_length_parametrize(c)
    moving = Curve(graph, [Vertex("L"), graph.point("e", 0.5)])
    assert arc_length_parametrize(moving) is moving


@given(st.integers(0, 5_000))
def test_random_curve_avoids_boundary_vertices(seed):
    rng = random.Random(seed)
    spec = random_graph_spec(rng, max_vertices=8, max_extra_edges=6)
    graph, _, _ = build_instance(spec)
    try:
        c = random_curve(graph, rng, steps=5)
    except InputError:
        return   # tiny instances may have no wandering room at all
    boundary = set(graph.boundary_ids)
    for p in c.points:
        if isinstance(p, Vertex):
            assert p.id not in boundary
    assert c.length > 0.0
