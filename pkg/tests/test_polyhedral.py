import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropikit import polyhedral as ph
from tropikit.diagonal import cube, hirzebruch, simplex


def cone_strategy(max_n=4):
    def build(n):
        row = st.lists(st.integers(-3, 3), min_size=n, max_size=n)
        return st.tuples(st.just(n), st.lists(row, max_size=6), st.lists(row, max_size=1))

    return st.integers(1, max_n).flatmap(build)


@settings(max_examples=150, deadline=None)
@given(cone_strategy())
def test_h_v_round_trip(data):
    n, ineq, eq = data
    c = ph.Cone.from_h(n, ineq, eq)
    back = ph.Cone.from_v(n, c.rays, c.lineality)
    assert back == c
    again = ph.Cone.from_h(n, c.inequalities, c.equalities)
    assert sorted(again.rays) == sorted(c.rays)
    assert again.dim == c.dim == ph.cone_dimension(c)


@settings(max_examples=150, deadline=None)
@given(cone_strategy(), st.integers(0, 4), st.randoms(use_true_random=False))
def test_projection_engines_agree(data, keep, rnd):
    n, ineq, eq = data
    keep = min(keep, n)
    c = ph.Cone.from_h(n, ineq, eq)
    proj = [[int(i == j) for j in range(n)] for i in range(keep)]
    fm = ph.fm_project(c, keep)
    assert fm == c.image(proj)
    m = [[rnd.randint(-2, 2) for _ in range(n)] for _ in range(rnd.randint(1, 3))]
    assert ph.cone_image(c, m, "fm") == ph.cone_image(c, m, "dd")


@settings(max_examples=100, deadline=None)
@given(cone_strategy(max_n=3), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_membership_matches_generators(data, point):
    n, ineq, eq = data
    c = ph.Cone.from_h(n, ineq, eq)
    x = point[:n]
    by_h = all(sum(a * b for a, b in zip(r, x)) >= 0 for r in ineq) and all(
        sum(a * b for a, b in zip(r, x)) == 0 for r in eq
    )
    assert c.contains(x) == by_h
    for r in c.rays:
        assert c.contains(r)
    rp = c.relint_point()
    assert c.contains(rp)


def test_relint_point_is_strictly_inside():
    c = ph.Cone.from_h(3, [(1, 0, 0), (0, 1, 0)], [(0, 0, 1)])
    x = c.relint_point()
    assert x[0] > 0 and x[1] > 0 and x[2] == 0
    assert ph.relint_point(c) == x


def test_square_vertices_and_faces():
    sq = cube(2)
    v = ph.h_to_v(sq)
    assert sorted(v["vertices"]) == sorted(itertools.product((0, 1), repeat=2))
    faces = sq.faces()
    dims = sorted(f.dim for f in faces)
    assert dims == [0, 0, 0, 0, 1, 1, 1, 1, 2]
    h = ph.v_to_h(ph.Polytope.from_vertices(2, v["vertices"]))
    assert len(h["halfspaces"]) == 4 and h["equalities"] == []


def test_unbounded_polyhedron_has_rays():
    p = ph.Polytope.from_inequalities(2, [((1, 0), 0), ((0, 1), 0)])
    v = ph.h_to_v(p)
    assert v["vertices"] == [(0, 0)]
    assert sorted(v["rays"]) == [(0, 1), (1, 0)]


def test_empty_polytope():
    p = ph.Polytope.from_inequalities(1, [((1,), 1), ((-1,), 0)])
    assert p.is_empty
    with pytest.raises(ph.PolyhedralError):
        ph.is_delzant(p)


@pytest.mark.parametrize("p", [simplex(1), simplex(2), simplex(3), cube(2), cube(3), hirzebruch(1), hirzebruch(3)])
def test_smooth_polytopes_are_delzant(p):
    assert ph.is_delzant(p)


def test_non_delzant_polytope():
    p = ph.Polytope.from_inequalities(2, [((1, 0), 0), ((0, 1), 0), ((-1, -2), -2)])
    rep = ph.is_delzant(p)
    assert not rep and rep.index == 2


def test_cone_of_polytope_at_vertex():
    p = simplex(2)
    vertex = next(f for f in p.faces() if f.dim == 0 and sorted(f.vertices) == [(0, 0)])
    cone, dual = ph.cone_of_polytope_at_face(p, vertex)
    assert sorted(cone.rays) == [(0, 1), (1, 0)]
    assert sorted(dual.rays) == [(0, 1), (1, 0)]


def test_coordinate_cross_is_consistent():
    d, g = ph.coordinate_cross(2)
    assert d.validate() == []
    rep = ph.validate_gluing(g, d)
    assert rep.ok, rep.violations
    complex_ = ph.build_dual_complex(g, d)
    assert sorted(complex_.cells["00"].vertices) == sorted(itertools.product((-1, 1), repeat=2))
    assert complex_.cells["++"].vertices == [(-1, -1)]
    fan = ph.normal_fan(d, "00")
    assert set(fan.cones) == set(d.ids)
    assert fan.to_json()["face"] == "00"


def test_decomposition_json_round_trip():
    d, g = ph.coordinate_cross(1)
    d2 = ph.decomposition_from_json(d.to_json())
    assert sorted(d2.ids) == sorted(d.ids)
    g2 = ph.gluing_from_json(g.to_json(), d2)
    assert ph.validate_gluing(g2, d2).ok


def test_broken_decomposition_reports_gaps():
    d = ph.decomposition_from_json(
        {
            "dim": 1,
            "polytopes": [
                {"id": "a", "halfspaces": [{"normal": [1], "constant": "1"}]},
                {"id": "b", "halfspaces": [{"normal": [-1], "constant": "0"}]},
            ],
        }
    )
    assert d.validate()


def test_random_polytopes_round_trip():
    rng = random.Random(11)
    for _ in range(40):
        n = rng.randint(1, 3)
        pts = [tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(n)) for _ in range(rng.randint(1, 6))]
        p = ph.Polytope.from_vertices(n, pts)
        q = ph.Polytope(n, p.facet_halfspaces() + [ph.Halfspace.make(a, c) for a, c in p.affine_equations()]
                        + [ph.Halfspace.make([-x for x in a], -c) for a, c in p.affine_equations()])
        assert sorted(q.vertices) == sorted(p.vertices)
        for x in pts:
            assert p.contains(x)
