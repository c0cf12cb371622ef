import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lightroute import build, delaunay_route, mbdg_route
from lightroute.errors import Disconnected, UnknownVertex
from lightroute.geom import angle_at, distance
from lightroute.io import generate_points
from lightroute.oracle import (BaseGraphDistances, PlainGraph, empirical_routing_ratio,
                               euclidean_mst, shortest_paths, stretch_factor)
from lightroute.routing import routing_ratio_bound
from lightroute.spanner import face_stretch_bound

TRIANGLE = PlainGraph([(0, 0), (4, 0), (0, 3)], [(0, 1), (1, 2), (0, 2)])


class TestShortestPaths:
    def test_path_graph(self):
        g = PlainGraph([(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)])
        assert shortest_paths(g, 0) == [0, 1, 2]

    def test_disconnected_vertex(self):
        g = PlainGraph([(0, 0), (1, 0), (5, 5)], [(0, 1)])
        assert shortest_paths(g, 0)[2] == math.inf

    def test_triangle(self):
        assert shortest_paths(TRIANGLE, 0) == [0, 4, 3]

    def test_pair_form(self):
        assert shortest_paths(([(0, 0), (3, 4)], [(0, 1)]), 1) == [5, 0]

    def test_unknown_source(self):
        with pytest.raises(UnknownVertex):
            shortest_paths(TRIANGLE, 3)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_edges_are_relaxed(self, seed):
        m = build(generate_points(30, "uniform", seed))
        P = m.points
        d = shortest_paths(m, 0)
        for u, v in m.edges():
            w = distance(P[u], P[v])
            assert d[v] <= d[u] + w + 1e-12
            assert d[u] <= d[v] + w + 1e-12
        # every vertex but the source is reached tightly through some edge
        for v in range(1, m.n):
            assert any(d[v] == pytest.approx(d[u] + distance(P[u], P[v]), rel=1e-12)
                       for u in m.neighbors_cw(v))


class TestStretch:
    def test_complete_triangle(self):
        rep = stretch_factor(TRIANGLE)
        assert rep.max_ratio == 1.0
        assert rep.pairs == 3

    def test_identity_against_base(self):
        m = build(generate_points(25, "uniform", 1))
        assert stretch_factor(m, BaseGraphDistances(m)).max_ratio == pytest.approx(1.0)

    def test_path_witness(self):
        # 0-1-2 on a right angle: the pair (0, 2) takes 7 against 5
        g = PlainGraph([(0, 0), (4, 0), (4, 3)], [(0, 1), (1, 2)])
        rep = stretch_factor(g)
        assert rep.max_ratio == pytest.approx(7 / 5)
        assert rep.witness == (0, 2)
        assert rep.ratios()[(0, 1)] == 1.0

    def test_disconnected(self):
        with pytest.raises(Disconnected):
            stretch_factor(PlainGraph([(0, 0), (1, 0), (5, 5)], [(0, 1)]))

    def test_sampling_beyond_cap(self):
        m = build(generate_points(60, "uniform", 2))
        rep = stretch_factor(m, cap=10, seed=4)
        assert rep.pairs == 1000
        assert len(set(rep.ratios())) == 1000

    def test_small_graph_beyond_cap_takes_every_pair(self):
        m = build(generate_points(30, "uniform", 2))
        assert stretch_factor(m, cap=10).pairs == 30 * 29 // 2

    def test_bounded_graph_against_the_triangulation(self, fixture200):
        rep = stretch_factor(fixture200.g, BaseGraphDistances(fixture200.mesh))
        assert rep.pairs == 200 * 199 // 2
        assert rep.max_ratio <= face_stretch_bound(math.pi / 4) + 1e-9

    def test_bounded_graph_on_crowded_points(self, hedgehogs):
        for b in hedgehogs:
            rep = stretch_factor(b.g, BaseGraphDistances(b.mesh))
            assert 1.0 < rep.max_ratio <= face_stretch_bound(b.g.theta) + 1e-9

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10 ** 6), st.data())
    def test_removing_edges_never_lowers_stretch(self, seed, data):
        m = build(generate_points(20, "uniform", seed))
        edges = m.edges()
        tree, _ = euclidean_mst(m)
        extra = [e for e in edges if e not in set(tree)]
        keep = data.draw(st.lists(st.sampled_from(extra), unique=True)) if extra else []
        sub = PlainGraph(m.points, tree + keep)
        assert stretch_factor(sub).max_ratio >= stretch_factor(m).max_ratio - 1e-12


class TestMst:
    def test_collinear(self):
        edges, w = euclidean_mst([(0, 0), (1, 0), (3, 0)])
        assert edges == [(0, 1), (1, 2)]
        assert w == 3

    def test_single_point(self):
        assert euclidean_mst([(0, 0)]) == ([], 0.0)

    def test_graph_form_disconnected(self):
        with pytest.raises(Disconnected):
            euclidean_mst(PlainGraph([(0, 0), (1, 0), (5, 5)], [(0, 1)]))

    def test_tie_goes_to_smaller_edge(self):
        # unit square: all four sides tie, the largest side is left out
        edges, w = euclidean_mst([(0, 0), (1, 0), (1, 1), (0, 1)])
        assert edges == [(0, 1), (0, 3), (1, 2)]
        assert w == 3

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10 ** 6), st.sampled_from(["uniform", "clustered", "grid_jitter"]))
    def test_tree_edges_meet_at_sixty_degrees_or_more(self, seed, dist):
        pts = generate_points(40, dist, seed)
        edges, _ = euclidean_mst(pts)
        at = {}
        for u, v in edges:
            at.setdefault(u, []).append(v)
            at.setdefault(v, []).append(u)
        for u, nb in at.items():
            for i, a in enumerate(nb):
                for b in nb[i + 1:]:
                    assert angle_at(pts[a], pts[u], pts[b]) >= math.pi / 3 - 1e-9

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10 ** 6), st.randoms(use_true_random=False))
    def test_relabelling_keeps_weight(self, seed, rng):
        pts = generate_points(35, "uniform", seed)
        shuffled = pts[:]
        rng.shuffle(shuffled)
        assert euclidean_mst(shuffled)[1] == pytest.approx(euclidean_mst(pts)[1], rel=1e-12)

    def test_triangulation_contains_the_tree(self):
        pts = generate_points(80, "clustered", 3)
        m = build(pts)
        complete, w1 = euclidean_mst(pts)
        over_mesh, w2 = euclidean_mst(m)
        assert w1 == pytest.approx(w2, rel=1e-12)
        assert set(complete) <= set(m.edges())


class TestEmpiricalRoutingRatio:
    def test_complete_triangle(self):
        m = build([(0, 0), (4, 0), (0, 3)])
        rep = empirical_routing_ratio(delaunay_route, m)
        assert rep.max_ratio == 1.0
        assert rep.pairs == 6

    def test_adjacent_pairs(self):
        m = build(generate_points(40, "uniform", 8))
        pairs = [(u, v) for u, v in m.edges()] + [(v, u) for u, v in m.edges()]
        assert empirical_routing_ratio(delaunay_route, m, pairs).max_ratio == 1.0

    def test_callback_sees_every_query(self):
        m = build(generate_points(15, "uniform", 8))
        seen = []
        empirical_routing_ratio(delaunay_route, m, on_route=lambda s, t, r: seen.append((s, t)))
        assert len(seen) == 15 * 14

    def test_sampled_above_cap(self):
        m = build(generate_points(30, "uniform", 8))
        rep = empirical_routing_ratio(delaunay_route, m, cap=10, seed=1)
        assert rep.pairs == 1000

    def test_marked_graph_sweep(self, fixture200):
        rep = empirical_routing_ratio(mbdg_route, fixture200.g)
        assert rep.pairs == 200 * 199
        assert rep.max_ratio <= routing_ratio_bound("mbdg", math.pi / 4)
        # regression pin: no edge is dropped here, so this is the
        # triangulation router's maximum as well
        assert rep.max_ratio == pytest.approx(1.745881, abs=1e-6)
        assert rep.witness == (168, 170)

    def test_matches_a_manual_sweep(self):
        m = build(generate_points(12, "grid_jitter", 5))
        P = m.points
        rng = random.Random(0)
        pairs = [tuple(rng.sample(range(12), 2)) for _ in range(30)]
        rep = empirical_routing_ratio(delaunay_route, m, pairs)
        manual = max(sum(distance(P[a], P[b]) for a, b in zip(p, p[1:])) / distance(P[s], P[t])
                     for s, t in pairs for p in [delaunay_route(m, s, t).path])
        assert rep.max_ratio == pytest.approx(manual, rel=1e-12)
