import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropikit import split as sp
from tropikit.scenes import (
    SPLIT_LIBRARY,
    cross_geometry,
    split_3d,
    split_half_axis,
    split_two_edges_bad,
    split_two_edges_good,
)


def framed_order_by_enumeration(n_roots=6):
    """Count framed symmetries of the cube example over the roots of unity.

    Unknowns are exponents ``a_e / N`` of the edge parameters; the vertex
    torus elements are forced by the two pinned ends.
    """
    count = 0
    for a1, a2, a3 in itertools.product(range(n_roots), repeat=3):
        gp = [Fraction(2 * a1, n_roots), Fraction(a1, n_roots), Fraction(0)]
        gm = [Fraction(a3, n_roots), Fraction(2 * a3, n_roots), Fraction(0)]
        z = [Fraction(a2, n_roots)] * 3
        if all((x - y - w) % 1 == 0 for x, y, w in zip(gp, gm, z)):
            count += 1
    return count


def test_cube_framed_order_matches_enumeration():
    s = split_3d()
    assert sp.framed_multiplicity(s) == 3 == framed_order_by_enumeration()
    ex = sp.exact_sequence_check(s)
    assert ex.ok and ex.kernel_ev == 3 and ex.z_fr == 1


def test_two_edge_examples_are_discriminated():
    bad, good = split_two_edges_bad(), split_two_edges_good()
    assert not sp.cone_condition(bad).ok
    assert sp.cone_condition(good).ok
    assert sp.split_rigid(good).ok
    assert not sp.split_rigid(bad).ok


@pytest.mark.parametrize("r", ["51/100", "2/3", "1", "3/2", "199/100"])
def test_cube_accepted_inside_window(r):
    assert sp.cone_condition(split_3d(r)).ok


@pytest.mark.parametrize("r", ["1/3", "49/100", "201/100", "3", "-1"])
def test_cube_rejected_outside_window(r):
    assert not sp.cone_condition(split_3d(r)).ok


@pytest.mark.parametrize("name", sorted(SPLIT_LIBRARY))
def test_dimension_law_and_engines(name):
    s = SPLIT_LIBRARY[name]()
    dc = sp.discrepancy_cone(s)
    assert sp.discrepancy_cone(s, "dd").cone == dc.cone
    assert dc.dim <= len(s.split_edges) * (s.n - 1)
    if sp.cone_condition(s, dc).ok:
        assert dc.dim == len(s.split_edges) * (s.n - 1)
        assert sp.strong_cone_samples(s, 100, seed=1, dc=dc) == []


def test_split_edge_ordering_follows_root_distance():
    s = split_two_edges_good()
    assert s.order == ["e1", "e2"] or s.order == ["e2", "e1"]
    assert sp.order_split_edges(s.refined, ["e2", "e1"])[0] == s.order


def test_genericity_violation_reported():
    # the split slope is (-2, -1); a parallel direction has no transverse part
    assert "vanishes" in sp.genericity_violation(split_half_axis(("2", "1")))
    assert sp.genericity_violation(split_half_axis(("1", "3"))) is None


def test_split_type_json_round_trip():
    s = split_3d()
    obj = {
        "graph": s.refined.to_json(),
        "base_collapse": [[a, None] for a, b in s.edge_map.items() if b is None],
        "split_edges": list(s.split_edges),
        "cone_direction": [str(x) for x in s.eta],
    }
    s2 = sp.split_type_from_json(obj, cross_geometry(3))
    assert sp.split_report(s2) == sp.split_report(s)


def test_split_edge_must_survive_collapse():
    s = split_3d()
    with pytest.raises(sp.SplitError):
        sp.make_split_type(s.geometry, s.refined, [("e", None)], ["e"], (1, 1, 0))


def test_eligibility_on_cross():
    d = cross_geometry(2).decomposition
    assert sp.split_eligible("00", d)


@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Fraction(-4), max_value=Fraction(4), max_denominator=20))
def test_cone_window_is_an_interval(r):
    # boundary points of the closed window are accepted
    ok = sp.cone_condition(split_3d(str(r))).ok
    assert ok == (Fraction(1, 2) <= r <= 2)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_strong_sampling_is_deterministic(seed):
    s = split_3d()
    a = sp.strong_cone_samples(s, 10, seed=seed)
    b = sp.strong_cone_samples(s, 10, seed=seed)
    assert a == b == []
