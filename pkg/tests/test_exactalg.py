import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropikit import exactalg as ea

from oracles import laplace_det


def int_matrix(max_rows=6, max_cols=6, lo=-9, hi=9):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def square(max_n=6):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
    )


@settings(max_examples=200, deadline=None)
@given(int_matrix())
def test_smith_form_reconstructs(m):
    u, d, v = ea.smith_normal_form(m)
    assert ea.mat_mul(ea.mat_mul(u, m), v) == d
    assert abs(ea.det(u)) == 1 and abs(ea.det(v)) == 1
    diag = [d[i][i] for i in range(min(len(d), len(d[0])))]
    assert all(x >= 0 for x in diag)
    for i, row in enumerate(d):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0
    for a, b in zip(diag, diag[1:]):
        assert b == 0 or (a != 0 and b % a == 0)


@settings(max_examples=150, deadline=None)
@given(square())
def test_det_and_lattice_index(m):
    want = laplace_det(m)
    assert ea.det(m) == want
    assert math.prod(ea.smith_diagonal(m)) == abs(want)
    idx = ea.lattice_index(m)
    assert idx == (abs(want) if want else ea.INFINITE)


@settings(max_examples=100, deadline=None)
@given(int_matrix(max_rows=4, max_cols=5, lo=-5, hi=5))
def test_integer_kernel_is_saturated_kernel(m):
    n = len(m[0])
    ker = ea.integer_kernel(m, n)
    for k in ker:
        assert all(x == 0 for x in ea.mat_vec(m, k))
    assert len(ker) == n - ea.rank(m, n)
    if ker:
        # saturated: the kernel lattice has index 1 in its rational span
        assert ea.smith_diagonal(ker, n)[: len(ker)] == [1] * len(ker)


@settings(max_examples=100, deadline=None)
@given(int_matrix(max_rows=5, max_cols=4, lo=-6, hi=6))
def test_hermite_form_is_canonical(rows):
    n = len(rows[0])
    h = ea.hermite_normal_form(rows, n)
    shuffled = list(reversed(rows)) + [[2 * x for x in rows[0]]]
    assert ea.hermite_normal_form(shuffled, n) == h
    assert len(h) == ea.rank(rows, n)


@settings(max_examples=100, deadline=None)
@given(int_matrix(max_rows=4, max_cols=4, lo=-4, hi=4), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_returns_solution_or_none(m, b):
    b = b[: len(m)]
    n = len(m[0])
    x = ea.solve(m, b, n)
    if x is None:
        aug = [row + [bi] for row, bi in zip(m, b)]
        assert ea.rank(aug, n + 1) > ea.rank(m, n)
    else:
        assert tuple(ea.mat_vec(m, x)) == tuple(Fraction(v) for v in b)


def test_rational_parsing_and_formatting():
    assert ea.parse_rational("3/6") == Fraction(1, 2)
    assert ea.parse_rational(4) == 4
    assert ea.format_rational(Fraction(-2, 4)) == "-1/2"
    assert ea.format_rational(3) == "3/1"
    with pytest.raises(ea.ExactAlgError):
        ea.parse_rational("1/0")
    with pytest.raises(ea.ExactAlgError):
        ea.parse_rational("pi")


def test_lattice_index_degenerate_cases():
    assert ea.lattice_index([[2, 0], [0, 3]]) == 6
    assert ea.lattice_index([[1, 2], [2, 4]]) == ea.INFINITE
    assert ea.lattice_index([[1, 1], [1, -1], [0, 2]]) == 2


def test_subspace_membership_and_genericity():
    sub = ea.RationalSubspace.span([(1, 1, 0), (2, 2, 0)], 3)
    assert sub.dim == 1 and sub.is_proper
    assert sub.contains((Fraction(1, 3), Fraction(1, 3), 0))
    assert not sub.contains((1, 0, 0))
    assert ea.is_generic((1, 2, 3), [sub])
    assert ea.first_violation((3, 3, 0), [sub]) == 0
    v = ea.sample_generic(3, [sub], seed=3)
    assert ea.is_generic(v, [sub])
    assert ea.sample_generic(3, [sub], seed=3) == v


def test_saturation_and_annihilator():
    assert ea.saturation([(2, 4)], 2) == [(1, 2)]
    ann = ea.annihilator_basis([(1, 1, 1)], 3)
    assert len(ann) == 2
    assert all(sum(a) == 0 for a in ann)
    assert ea.is_unimodular([[2, 1], [1, 1]])
    assert not ea.is_unimodular([[2, 0], [0, 1]])
