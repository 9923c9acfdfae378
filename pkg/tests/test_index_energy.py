import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropikit import index_energy as ie
from tropikit.scenes import _graph, cross_geometry

from oracles import closed_form_index, random_index_input, random_subsets


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_index_invariant_under_collapse(seed):
    rng = random.Random(seed)
    inp = random_index_input(rng)
    want = closed_form_index(inp)
    assert ie.expected_dimension(inp).value == want
    for sub in random_subsets(ie.nonzero_interior_nodes(inp.graph), rng, 3):
        assert ie.expected_dimension(ie.collapse_index_input(inp, sub)).value == want


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), max_size=6))
def test_maslov_is_twice_total_multiplicity(ms):
    assert ie.maslov_toric(ms) == 2 * sum(ms)
    assert ie.maslov_toric(ms) % 2 == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(-5, 5), st.integers(-5, 5), st.lists(st.integers(1, 4), max_size=3))
def test_chern_gluing_is_additive_up_to_nodes(a, b, ms):
    assert ie.chern_glue(a, b, ms) + 2 * sum(ms) == a + b
    assert ie.chern_glue(a, b, ms) == ie.chern_glue(b, a, ms)


def test_primitives():
    assert ie.maslov_toric([2, 1]) == 6
    assert ie.chern_glue(3, 2, [1, 1]) == 1
    assert ie.node_multiplicity((2, 1), (1, 0)) == 2
    with pytest.raises(ie.IndexError_):
        ie.node_multiplicity((-1, 0), (1, 0))
    with pytest.raises(ie.IndexError_):
        ie.node_multiplicity((1, 0), (2, 0))
    with pytest.raises(ie.IndexError_):
        ie.maslov_toric([-1])


def test_edge_multiplicities_from_geometry():
    g = _graph([("a", "00"), ("b", "++")], [("e", "b", "a", (-1, -2))])
    assert ie.edge_multiplicities(g, "e", cross_geometry(2)) == [1, 2]


def test_disk_with_one_input():
    g = _graph(
        [("v", "0", {"sort": "disk"})],
        [("r", "v", None, (0,), "boundary-leaf"), ("x", "v", None, (0,), "boundary-leaf")],
        root="r",
    )
    res = ie.expected_dimension(ie.IndexInput(g, [1, 1], {"v": 2}))
    assert res.value == 1 == res.split_value
    with pytest.raises(ie.IndexError_):
        ie.expected_dimension(ie.IndexInput(g, [1], {"v": 2}))


def test_split_index_keeps_base_edges():
    g = _graph([("a", "00"), ("b", "++"), ("c", "--")], [("e", "a", "b", (1, 1)), ("f", "c", "a", (1, 1))])
    inp = ie.IndexInput(g, [0], {"a": 4, "b": 6, "c": 2}, {"e": [1], "f": [2]}, base_edges={"e"})
    res = ie.expected_dimension(inp)
    assert res.value == closed_form_index(inp)
    assert res.split_value == res.value


def test_odd_sphere_maslov_rejected():
    g = _graph([("a", "00")], [])
    with pytest.raises(ie.IndexError_):
        ie.expected_dimension(ie.IndexInput(g, [0], {"a": 3}))


def test_index_json_reader_applies_tangencies():
    g = _graph([("a", "00")], [("m", "a", None, (0, 0))])
    inp = ie.index_input_from_json({"morse_indices": [0], "maslov": {"a": 6}, "tangencies": {"m": 3}}, g)
    assert inp.graph.tangency("m") == 3
    assert ie.expected_dimension(inp).value == 0 - 2 + 6 - 4


def test_energy_bookkeeping():
    area = ie.fiber_area("1/2", ["1/3"], [[3]])
    assert (area.horizontal, area.vertical) == (Fraction(1, 2), Fraction(1))
    hb = ie.hofer_bound("1/2", [[1, 1]], None, ["1/3"])
    assert hb.horizontal == Fraction(1, 2) and hb.vertical > 0
    assert ie.divisor_count(3, "1/3") == 1
    assert ie.divisor_count(6, Fraction(1, 2)) == 3
    with pytest.raises(ie.IndexError_):
        ie.divisor_count(3, "1/2")
