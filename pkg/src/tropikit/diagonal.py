"""Cone-displacement decomposition of the diagonal of a smooth projective toric variety.

A face ``Q`` of a Delzant polytope (inward normals, ``<u, x> >= c``) has the
cone ``Cone(Q)`` spanned by the normals of the facets containing it.  For a
generic displacement ``η`` the diagonal class is the sum of
``n(Q-, Q+) [X_Q-] x [X_Q+]`` over the pairs where ``Cone(Q-) + η`` meets
``Cone(Q+)`` in a single transverse point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import exactalg as ea
from .lp import feasible_point
from .polyhedral import Polytope, PolyhedralError, is_delzant


class DiagonalError(ValueError):
    """Non-Delzant input or a displacement on an arrangement wall."""


@dataclass(frozen=True)
class FaceCone:
    facets: tuple[int, ...]
    dim_face: int
    vertices: tuple
    rays: tuple[tuple[int, ...], ...]
    ambient: int

    @property
    def id(self) -> str:
        return "F" + "".join(f".{i}" for i in self.facets) if self.facets else "P"

    @property
    def dim(self) -> int:
        return len(self.rays)

    def span_lattice(self) -> list[tuple[int, ...]]:
        return ea.saturation(self.rays, self.ambient) if self.rays else []

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "facets": list(self.facets),
            "face_dim": self.dim_face,
            "vertices": [ea.format_vector(v) for v in self.vertices],
            "rays": [list(r) for r in self.rays],
        }


def _facets(p: Polytope):
    return p.facet_halfspaces()


def face_cones(p: Polytope) -> list[FaceCone]:
    """One cone per nonempty face, from ``p`` itself (zero cone) down to the vertices."""
    try:
        rep = is_delzant(p)
    except PolyhedralError as exc:
        raise DiagonalError(str(exc)) from None
    if not rep:
        raise DiagonalError(f"polytope is not Delzant at vertex {rep.vertex}: {rep.reason}")
    facets = _facets(p)
    out = []
    for f in p.faces():
        verts = sorted(f.vertices)
        inc = tuple(i for i, h in enumerate(facets) if all(h.value(v) == 0 for v in verts))
        out.append(FaceCone(inc, f.dim, tuple(verts), tuple(facets[i].normal for i in inc), p.ambient))
    out.sort(key=lambda c: (len(c.facets), c.facets))
    return out


def _arrangement(cones: Sequence[FaceCone], n: int):
    walls = []
    for a, b in itertools.product(cones, repeat=2):
        vecs = list(a.rays) + list(b.rays)
        if ea.rank(vecs, n) < n:
            walls.append((a, b, ea.RationalSubspace.span(vecs, n)))
    return walls


def check_generic(cones: Sequence[FaceCone], eta: Sequence, n: int) -> None:
    eta = ea.parse_vector(eta)
    if len(eta) != n:
        raise DiagonalError(f"η has length {len(eta)}, expected {n}")
    for a, b, sub in _arrangement(cones, n):
        if sub.contains(eta):
            raise DiagonalError(
                f"η lies on the wall spanned by Cone({a.id}) + Cone({b.id}); choose a generic displacement"
            )


def displaced_intersection(c_minus: FaceCone, c_plus: FaceCone, eta: Sequence) -> str:
    """Classify ``(Cone(Q-) + η) ∩ Cone(Q+)`` as ``empty``, ``point`` or ``higher``."""
    n = c_minus.ambient
    eta = ea.parse_vector(eta)
    k1, k2 = c_minus.dim, c_plus.dim
    # R- y - R+ z = -η with y, z >= 0
    cols = [list(r) for r in c_minus.rays] + [[-x for x in r] for r in c_plus.rays]
    nv = k1 + k2
    a_eq = [[cols[j][i] for j in range(nv)] for i in range(n)]
    b_eq = [-x for x in eta]
    a_ub = [[-1 if j == i else 0 for j in range(nv)] for i in range(nv)]
    sol = feasible_point(a_ub, [0] * nv, a_eq, b_eq, nvars=nv) if nv else (
        () if all(x == 0 for x in eta) else None
    )
    if sol is None:
        return "empty"
    full = ea.rank(cols, n) == n if cols else n == 0
    if k1 + k2 == n and full:
        if any(x == 0 for x in sol):
            raise DiagonalError(
                f"displaced intersection of Cone({c_minus.id}) and Cone({c_plus.id}) meets a boundary face"
            )
        return "point"
    if k1 + k2 < n or not full:
        raise DiagonalError(
            f"Cone({c_minus.id}) + η meets Cone({c_plus.id}) although their spans are not complementary"
        )
    return "higher"


def pair_multiplicity(a: FaceCone, b: FaceCone):
    gens = a.span_lattice() + b.span_lattice()
    return ea.lattice_index(gens, a.ambient) if gens else 1


@dataclass
class DiagonalDecomposition:
    dim: int
    eta: tuple
    pairs: list[tuple[FaceCone, FaceCone, int]]

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "eta": ea.format_vector(self.eta),
            "pairs": [
                {"minus": a.to_json(), "plus": b.to_json(), "multiplicity": m} for a, b, m in self.pairs
            ],
        }

    def key(self) -> list[tuple]:
        return [(a.facets, b.facets, m) for a, b, m in self.pairs]


def diagonal_decomposition(p: Polytope, eta: Sequence) -> DiagonalDecomposition:
    cones = face_cones(p)
    n = p.ambient
    eta = ea.parse_vector(eta)
    check_generic(cones, eta, n)
    pairs = []
    for a, b in itertools.product(cones, repeat=2):
        if a.dim + b.dim != n:
            continue
        if displaced_intersection(a, b, eta) == "point":
            pairs.append((a, b, pair_multiplicity(a, b)))
    return DiagonalDecomposition(n, eta, pairs)


# ------------------------------------------------------------ Künneth oracle

def _reduce(monomial: tuple, normals: Sequence[tuple], n: int, cones: set) -> Fraction:
    """Degree of a top-degree monomial in the toric divisor classes.

    ``monomial[i]`` is the exponent of the i-th divisor.  Repeated divisors are
    removed with a linear relation vanishing on the other divisors in the support.
    """
    support = frozenset(i for i, a in enumerate(monomial) if a)
    if support not in cones:
        return Fraction(0)
    rep = next((i for i, a in enumerate(monomial) if a > 1), None)
    if rep is None:
        return Fraction(1)
    others = sorted(support - {rep})
    # m with <m, u_j> = 0 for j in others and <m, u_rep> = 1
    rows = [list(normals[j]) for j in others] + [list(normals[rep])]
    rhs = [0] * len(others) + [1]
    m = ea.solve(rows, rhs, n)
    if m is None:
        raise DiagonalError("non-simplicial fan reached in the intersection oracle")
    total = Fraction(0)
    for j, u in enumerate(normals):
        if j == rep:
            continue
        c = sum(Fraction(x) * y for x, y in zip(m, u))
        if c == 0:
            continue
        nxt = list(monomial)
        nxt[rep] -= 1
        nxt[j] += 1
        total -= c * _reduce(tuple(nxt), normals, n, cones)
    return total


class IntersectionOracle:
    """Intersection numbers of torus-invariant subvarieties from the normal fan."""

    def __init__(self, p: Polytope):
        self.cones = face_cones(p)
        self.n = p.ambient
        facets = _facets(p)
        self.normals = [h.normal for h in facets]
        self._fan = {frozenset(c.facets) for c in self.cones}

    def degree(self, faces: Sequence[FaceCone]) -> Fraction:
        mono = [0] * len(self.normals)
        for f in faces:
            for i in f.facets:
                mono[i] += 1
        if sum(mono) != self.n:
            return Fraction(0)
        return _reduce(tuple(mono), self.normals, self.n, self._fan)


@dataclass
class KunnethReport:
    ok: bool
    checked: int
    mismatches: list

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "mismatches": self.mismatches}


def kunneth_check(p: Polytope, decomposition: DiagonalDecomposition) -> KunnethReport:
    """Pair the decomposed diagonal against every product ``X_A x X_B`` of complementary dimension."""
    orc = IntersectionOracle(p)
    n = orc.n
    bad, checked = [], 0
    for a, b in itertools.product(orc.cones, repeat=2):
        if a.dim_face + b.dim_face != n:
            continue
        checked += 1
        want = orc.degree([a, b])
        got = Fraction(0)
        for qm, qp, mult in decomposition.pairs:
            if qm.dim_face + a.dim_face != n or qp.dim_face + b.dim_face != n:
                continue
            got += mult * orc.degree([qm, a]) * orc.degree([qp, b])
        if got != want:
            bad.append({"A": a.id, "B": b.id, "expected": str(want), "got": str(got)})
    return KunnethReport(not bad, checked, bad)


# ------------------------------------------------------------------ models

def simplex(n: int) -> Polytope:
    """The standard simplex ``x_i >= 0, Σ x_i <= 1``."""
    rows = [([1 if j == i else 0 for j in range(n)], 0) for i in range(n)]
    rows.append(([-1] * n, -1))
    return Polytope.from_inequalities(n, rows)


def cube(n: int) -> Polytope:
    rows = []
    for i in range(n):
        rows.append(([1 if j == i else 0 for j in range(n)], 0))
        rows.append(([-1 if j == i else 0 for j in range(n)], -1))
    return Polytope.from_inequalities(n, rows)


def hirzebruch(a: int) -> Polytope:
    """Hirzebruch polytope with normals ``(1,0), (0,1), (-1,-a), (0,-1)``."""
    return Polytope.from_inequalities(2, [((1, 0), 0), ((0, 1), 0), ((0, -1), -1), ((-1, -a), -(a + 2))])


def parse_eta(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(ea.parse_rational(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise DiagonalError(f"cannot parse η {text!r}: {exc}") from None


def default_eta(n: int) -> tuple[Fraction, ...]:
    """A fixed displacement ``(1, 2, ..., n)`` scaled by small distinct primes."""
    primes = [2, 3, 5, 7, 11, 13, 17, 19]
    return tuple(Fraction(i + 1, primes[i % len(primes)]) for i in range(n))


def polytope_dim_guard(p: Polytope, max_dim: Optional[int]) -> None:
    if max_dim is not None and p.ambient > max_dim:
        raise DiagonalError(f"ambient dimension {p.ambient} exceeds the limit {max_dim}")
