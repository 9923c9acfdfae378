import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tropikit import ainfty as ai

CUT = Fraction(3)

exps = st.fractions(min_value=0, max_value=4, max_denominator=6)
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
novikov = st.dictionaries(exps, coeffs, max_size=4).map(lambda d: ai.Novikov(d, CUT))


@settings(max_examples=150, deadline=None)
@given(novikov, novikov, novikov)
def test_novikov_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ai.Novikov.zero(CUT)
    one = ai.Novikov.monomial(1, 0, CUT)
    assert a * one == a


@settings(max_examples=150, deadline=None)
@given(novikov, novikov)
def test_valuation_is_multiplicative_when_below_cutoff(a, b):
    p = a * b
    if a and b and a.valuation() + b.valuation() < CUT:
        assert p.valuation() == a.valuation() + b.valuation()
    assert all(e < CUT for e in p.terms)
    assert (a + b).valuation() >= min(a.valuation(), b.valuation())


@settings(max_examples=60, deadline=None)
@given(novikov, st.fractions(min_value=0, max_value=3, max_denominator=4))
def test_truncation(a, cut):
    t = a.truncate(cut)
    assert all(e < cut for e in t.terms)
    assert all(a.terms[e] == c for e, c in t.terms.items())


def test_truncation_cannot_raise_cutoff():
    with pytest.raises(ai.AInftyError):
        ai.Novikov.monomial(1, 0, 1).truncate(2)
    with pytest.raises(ai.AInftyError):
        ai.Novikov.monomial(1, 0, 1) + ai.Novikov.monomial(1, 0, 2)


# ---------------------------------------------------- classical oracle

def _wedge(u, v):
    """Product in the exterior algebra on t, x: words are sorted tuples."""
    if set(u) & set(v):
        return 0, ()
    word = list(u) + list(v)
    sign = 1
    for i in range(len(word)):
        for j in range(len(word) - 1 - i):
            if word[j] > word[j + 1]:
                word[j], word[j + 1] = word[j + 1], word[j]
                sign = -sign
    return sign, tuple(word)


def _d(u):
    """dt = 1, dx = 0, extended as a graded derivation."""
    out = {}
    for i, g in enumerate(u):
        if g == "t":
            rest = u[:i] + u[i + 1:]
            out[rest] = out.get(rest, 0) + (-1) ** i
    return {k: v for k, v in out.items() if v}


WORDS = {"e": (), "t": ("t",), "x": ("x",), "tx": ("t", "x")}
NAMES = {v: k for k, v in WORDS.items()}


def test_dga_matches_exterior_algebra():
    a = ai.exterior_dga()
    for p, q in itertools.product(WORDS, repeat=2):
        sign, w = _wedge(WORDS[p], WORDS[q])
        got = a.m(2, [a.basis(p), a.basis(q)])
        want = {} if sign == 0 else {NAMES[w]: (-1) ** len(WORDS[p]) * sign}
        assert {k: v.terms.get(Fraction(0), 0) for k, v in got.items()} == want
    for p in WORDS:
        got = a.m(1, [a.basis(p)])
        assert {k: v.terms[Fraction(0)] for k, v in got.items()} == {NAMES[w]: c for w, c in _d(WORDS[p]).items()}


def test_dga_associative_through_four():
    a = ai.exterior_dga()
    rep = ai.check_associativity(a, 4)
    assert rep.ok and rep.checked == sum(4 ** d for d in range(5))
    assert ai.check_strict_unit(a, "e").ok


PRODUCTS = [k[1] for k in ai.exterior_dga().maps if k[0] == 2]


@settings(max_examples=len(PRODUCTS), deadline=None)
@given(st.sampled_from(PRODUCTS))
def test_every_single_sign_flip_is_detected(entry):
    bad = ai.exterior_dga(flip=entry)
    rep = ai.check_associativity(bad, 4)
    assert not rep.ok and rep.first_failure_arity == 2


def test_flip_without_differential_detected_at_three():
    bad = ai.exterior_dga(flip=("e", "x"), differential=False)
    rep = ai.check_associativity(bad, 3)
    assert not rep.ok and rep.first_failure_arity == 3


# ----------------------------------------------------------- curved model

@settings(max_examples=40, deadline=None)
@given(st.fractions(min_value=Fraction(1, 10), max_value=2, max_denominator=10), st.integers(1, 5))
def test_toric_model_curved_relations(exp, coeff):
    w = ai.Novikov.monomial(coeff, exp, 3)
    a = ai.toric_model(w)
    assert ai.check_associativity(a, 4).ok
    assert ai.check_strict_unit(a, ai.UNIT).ok
    h = ai.check_homotopy_unit_leading(a)
    assert h.ok and h.exact
    res = ai.mc_residual(a, {ai.WEIGHTED: w})
    assert res.is_projective_solution and res.potential == w
    wrong = ai.mc_residual(a, {ai.WEIGHTED: w * 2})
    assert not wrong.is_projective_solution


def test_mc_rejects_bad_input():
    a = ai.toric_model(ai.Novikov.monomial(1, "1/2", 2))
    with pytest.raises(ai.AInftyError):
        ai.mc_residual(a, {ai.UNIT: ai.Novikov.monomial(1, 1, 2)})
    with pytest.raises(ai.AInftyError):
        ai.mc_residual(a, {ai.WEIGHTED: ai.Novikov.monomial(1, 0, 2)})


def test_degree_homogeneity_enforced():
    obj = ai.exterior_dga().to_json()
    obj["maps"].append({"d": 2, "inputs": ["t", "t"], "output": [{"gen": "t"}]})
    with pytest.raises(ai.AInftyError):
        ai.algebra_from_json(obj)


def test_json_round_trip():
    for a in (ai.exterior_dga(), ai.toric_model(ai.Novikov.monomial(3, "1/3", 2))):
        b = ai.algebra_from_json(a.to_json())
        assert b.to_json() == a.to_json()


# ------------------------------------------------------------- morphisms

def test_identity_and_rescaling_are_morphisms():
    a = ai.exterior_dga(differential=False)
    assert ai.check_morphism(ai.identity_morphism(a), 3).ok
    one = ai.Novikov.monomial(1, 0, 1)
    two = ai.Novikov.monomial(2, 0, 1)
    comps = {(1, ("e",)): {"e": one}, (1, ("t",)): {"t": one}, (1, ("x",)): {"x": two}, (1, ("tx",)): {"tx": two}}
    assert ai.check_morphism(ai.MorphismData(a, a, comps, 1, complete=True), 3).ok


def test_broken_morphism_detected():
    a = ai.exterior_dga()
    f = ai.identity_morphism(a)
    comps = dict(f.components)
    comps[(2, ("x", "x"))] = {"t": ai.Novikov.monomial(1, 0, 1)}
    rep = ai.check_morphism(ai.MorphismData(a, a, comps, 2, complete=True), 3)
    assert not rep.ok and rep.relations.first_failure_arity == 2


def test_split_assembly():
    cut = 2
    q = ai.Novikov.monomial(1, "1/3", cut)
    total = ai.split_assembly([ai.SplitContribution(3, 2, 1, (q,))], cut)
    assert total == ai.Novikov.monomial(Fraction(3, 2), "1/3", cut)
    both = ai.split_assembly([(1, 0, 1, (q,)), (1, 0, -1, (q,))], cut)
    assert not both
    with pytest.raises(ai.AInftyError):
        ai.split_assembly([(1, 0, 2, ())], cut)
