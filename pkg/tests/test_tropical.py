from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tropikit import tropical as tr
from tropikit.scenes import _graph, cross_geometry, gamma1, gamma2, gamma_flexible

CORNERS = ["++", "+-", "-+", "--"]


def slope_ok(geom, g, weights):
    for e in g.node_edges():
        diff = [a - b for a, b in zip(weights[e.plus], weights[e.minus])]
        s = geom.slope_vector(e.slope)
        nz = [i for i, x in enumerate(s) if x]
        if not nz:
            if any(diff):
                return False
            continue
        t = Fraction(diff[nz[0]]) / s[nz[0]]
        if t < 0 or any(d != t * x for d, x in zip(diff, s)):
            return False
    return True


def test_rigid_examples_component_counts():
    geom = cross_geometry(2)
    i1 = tr.symmetry_group(gamma1(), geom)
    i2 = tr.symmetry_group(gamma2(), geom)
    assert (i1.component_count, i2.component_count) == (3, 2)
    assert i1.dim_identity_component == i2.dim_identity_component == 0
    assert i1.consistent and i2.consistent
    assert tr.is_rigid(gamma1(), geom) and tr.is_rigid(gamma2(), geom)


def test_flexible_graph_collapses_onto_rigid_one():
    geom = cross_geometry(2)
    g = gamma_flexible()
    assert not tr.is_rigid(g, geom)
    assert tr.weight_cone(g, geom).dim == 1
    res = tr.collapse_edges(g, ["m"], geom)
    assert res.kappa == {"a": "a", "b": "a", "p": "p", "q": "q", "r": "r"}
    assert tr.is_rigid(res.graph, geom)
    rel = tr.relative_weight_cone(g, res.graph, res.kappa, geom)
    assert rel.dim >= 1


def test_validation_reports_slope_outside_face():
    geom = cross_geometry(2)
    bad = _graph([("c", "+0"), ("a", "++")], [("e", "a", "c", (1, 1))])
    rep = tr.validate_tropical(bad, geom)
    assert not rep.ok and "not in t_P(e)" in rep.issues[0]


def test_validation_rejects_cycles_and_sphere_boundary():
    geom = cross_geometry(1)
    cyc = _graph([("a", "0"), ("b", "0")], [("e", "a", "b", (0,)), ("f", "b", "a", (0,))])
    assert not tr.validate_tropical(cyc, geom).ok
    sph = _graph([("a", "0")], [("r", "a", None, (0,), tr.BOUNDARY_LEAF)], root="r")
    assert not tr.validate_tropical(sph, geom).ok


def test_unbalanced_vertex_detected():
    geom = cross_geometry(2)
    g = _graph([("c", "00", {"chern": (1, 0)}), ("a", "++")], [("e", "a", "c", (-1, -1))])
    rep = tr.check_balancing(g, "c", geom)
    assert not rep.ok
    assert rep.data["projected_sum"] == [-1, -1]


def test_graph_json_round_trip():
    g = gamma1()
    g2 = tr.graph_from_json(g.to_json(), 2)
    assert g2.to_json() == g.to_json()


star = st.lists(
    st.tuples(st.sampled_from(CORNERS), st.integers(-3, 3), st.integers(-3, 3)),
    min_size=1,
    max_size=4,
)


@settings(max_examples=80, deadline=None)
@given(star)
def test_random_stars_weights_satisfy_slope_condition(leaves):
    geom = cross_geometry(2)
    assume(all((a, b) != (0, 0) for _, a, b in leaves))
    vs = [("c", "00")] + [(f"l{i}", p) for i, (p, _, _) in enumerate(leaves)]
    es = [(f"e{i}", f"l{i}", "c", (a, b)) for i, (_, a, b) in enumerate(leaves)]
    g = _graph(vs, es)
    rep = tr.validate_tropical(g, geom)
    wc = tr.weight_cone(g, geom)
    assert rep.ok == (not wc.is_empty)
    if not rep.ok:
        return
    w = wc.relint_weights()
    assert slope_ok(geom, g, w)
    info = tr.symmetry_group(g, geom)
    assert info.consistent
    assert info.dim_identity_component >= wc.dim
    for e in g.node_edges():
        v = e.minus
        out = tr.outgoing_slope(e, v)
        assert tuple(-x for x in out) == tr.outgoing_slope(e, e.plus)


@settings(max_examples=60, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4))
def test_slope_annihilator_is_primitive_complement(a, b):
    assume((a, b) != (0, 0))
    ann = tr.slope_annihilator((a, b))
    assert len(ann) == 1
    x, y = ann[0]
    assert a * x + b * y == 0
    from math import gcd

    assert gcd(x, y) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_cross_geometry_cells(n):
    geom = cross_geometry(n)
    assert len(geom.decomposition.ids) == 3 ** n
    assert len(geom.cell("0" * n).vertices) == 2 ** n
