from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropikit import potential as pt
from tropikit.ainfty import Novikov
from tropikit.diagonal import cube, hirzebruch, simplex


def distances(p, lam):
    """Lattice distance from ``lam`` to every facet, read off the halfspaces."""
    return sorted(sum(Fraction(a) * b for a, b in zip(h.normal, lam)) - h.constant for h in p.facet_halfspaces())


FIBERS = {
    "P1": lambda: pt.simplex_fiber(1),
    "P2": lambda: pt.simplex_fiber(2),
    "P3": lambda: pt.simplex_fiber(3),
    "P1xP1": lambda: pt.product_fiber(),
    "F1": lambda: pt.hirzebruch_fiber(1),
    "F2": lambda: pt.hirzebruch_fiber(2),
}


@pytest.mark.parametrize("name", sorted(FIBERS))
def test_one_maslov_two_skeleton_per_facet(name):
    f = FIBERS[name]()
    sk = pt.leading_disk_types(f)
    assert len(sk) == len(f.facets)
    assert sorted(s.facet for s in sk) == list(range(len(f.facets)))
    for s in sk:
        assert s.ok and s.maslov == 2 and s.rigid
        assert s.relative_weight_dim == f.n - 1


@pytest.mark.parametrize("name", sorted(FIBERS))
def test_unobstructed(name):
    f = FIBERS[name]()
    w = pt.bg_potential(f)
    cutoff = max(a for _, a in w.terms) + 1
    rep = pt.verify_unobstructed(f, cutoff)
    assert rep.ok and rep.solution and rep.potential_matches and not rep.vacuous


def test_projective_plane_potential():
    f = pt.simplex_fiber(2)
    w = pt.bg_potential(f)
    assert sorted(w.terms) == sorted([((-1, 0), Fraction(1, 3)), ((0, -1), Fraction(1, 3)), ((1, 1), Fraction(1, 3))])
    assert w.evaluate((1, 1), 1) == Novikov.monomial(3, "1/3", 1)
    minus = pt.bg_potential(f, negate_exponents=True)
    assert [a for _, a in minus.terms] == [-a for _, a in w.terms]


def test_line_with_holonomy():
    w = pt.bg_potential(pt.simplex_fiber(1))
    assert w.evaluate((2,), 2) == Novikov.monomial(Fraction(5, 2), "1/2", 2)
    with pytest.raises(pt.PotentialError):
        w.evaluate((0,), 2)


def test_low_cutoff_is_vacuous():
    rep = pt.verify_unobstructed(pt.simplex_fiber(2), Fraction(1, 4))
    assert rep.ok and rep.vacuous


def test_fiber_validation():
    with pytest.raises(pt.PotentialError):
        pt.MomentFiber(simplex(2), (0, Fraction(1, 2)))
    with pytest.raises(pt.PotentialError):
        pt.MomentFiber(simplex(2), (Fraction(1, 3),))
    with pytest.raises(pt.PotentialError):
        pt.MomentFiber(simplex(2), (Fraction(1, 3), Fraction(1, 3)), eps=(1, 1, 1))


def test_fiber_json():
    f = pt.fiber_from_json(
        {"polytope": {"halfspaces": [h.to_json() for h in cube(2).halfspaces]}, "lambda": ["1/4", "1/2"]}
    )
    assert sorted(a for _, a in pt.bg_potential(f).terms) == [Fraction(1, 4), Fraction(1, 2), Fraction(1, 2), Fraction(3, 4)]


def test_cut_pieces_cover_faces():
    f = pt.simplex_fiber(2)
    pieces = pt.cut_pieces(f)
    # one piece per face of the triangle, the interior included
    assert len(pieces) == 7


coord = st.fractions(min_value=Fraction(1, 50), max_value=Fraction(49, 50), max_denominator=50)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["square", "triangle", "F1"]), coord, coord)
def test_exponents_are_facet_distances(shape, x, y):
    p = {"square": cube(2), "triangle": simplex(2), "F1": hirzebruch(1)}[shape]
    lam = (x, y)
    if not all(h.value(lam) > 0 for h in p.facet_halfspaces()):
        return
    f = pt.MomentFiber(p, lam)
    w = pt.bg_potential(f)
    assert sorted(a for _, a in w.terms) == distances(p, lam)
    cutoff = max(a for _, a in w.terms) + 1
    assert pt.verify_unobstructed(f, cutoff, (2, Fraction(1, 3))).ok
