"""Exact cones, polytopes, decompositions of t^dual, gluing data and dual complexes.

Cones are stored in both representations.  The H-representation is a list of
inequalities ``a.x >= 0`` plus equalities ``b.x = 0``; the V-representation is
a list of rays plus a lineality basis.  Conversion uses the double description
method, and projections use Fourier-Motzkin elimination with LP redundancy
removal (the double description method serves as its cross-check).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from . import exactalg as ea
from .lp import OPTIMAL, solve_lp

Vec = tuple[Fraction, ...]


class PolyhedralError(ValueError):
    """Invalid polyhedral input."""


def _fr(v: Iterable) -> Vec:
    return tuple(Fraction(x) for x in v)


def _dot(a, b) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


def _is_zero(v) -> bool:
    return all(x == 0 for x in v)


def _canon_dir(v) -> tuple[int, ...]:
    return ea.integer_scale(v)


def _span_basis(vectors: Sequence[Sequence], n: int) -> list[Vec]:
    return ea.row_basis([list(v) for v in vectors], n) if vectors else []


# ------------------------------------------------------ double description

def double_description(
    inequalities: Sequence[Sequence], equalities: Sequence[Sequence], n: int
) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Generators of ``{x : a.x >= 0 (a in inequalities), b.x = 0}``.

    Returns ``(rays, lineality)`` as integer vectors.  Rays are extreme modulo
    the lineality space.
    """
    lin: list[Vec] = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    rays: list[list] = []  # [vector, zero-set]
    constraints = [(_fr(a), False) for a in equalities] + [(_fr(a), True) for a in inequalities]
    for idx, (a, is_ineq) in enumerate(constraints):
        if _is_zero(a):
            continue
        piv = next((l for l in lin if _dot(a, l) != 0), None)
        if piv is not None:
            al = _dot(a, piv)
            if al < 0:
                piv = tuple(-x for x in piv)
                al = -al
            new_lin = []
            for l in lin:
                if l is piv or l == tuple(-x for x in piv):
                    continue
                f = _dot(a, l) / al
                new_lin.append(tuple(x - f * y for x, y in zip(l, piv)) if f else l)
            lin = [l for l in new_lin if not _is_zero(l)]
            lin = _span_basis(lin, n) if lin else []
            for r in rays:
                f = _dot(a, r[0]) / al
                if f:
                    r[0] = _fr(_canon_dir([x - f * y for x, y in zip(r[0], piv)]))
                r[1] = r[1] | {idx}
            if is_ineq:
                rays.append([_fr(_canon_dir(piv)), frozenset(range(idx))])
            continue
        pos, zero, neg = [], [], []
        for r in rays:
            s = _dot(a, r[0])
            (pos if s > 0 else neg if s < 0 else zero).append((r, s))
        new_rays = [[r[0], r[1] | {idx}] for r, _ in zero]
        if is_ineq:
            new_rays += [list(r) for r, _ in pos]
        for (p, sp), (q, sq) in product(pos, neg):
            common = p[1] & q[1]
            adjacent = True
            for r in rays:
                if r is p or r is q:
                    continue
                if common <= r[1]:
                    adjacent = False
                    break
            if not adjacent:
                continue
            v = [sp * y - sq * x for x, y in zip(p[0], q[0])]
            # sp*q - sq*p has zero pairing with a
            new_rays.append([_fr(_canon_dir(v)), common | {idx}])
        rays = new_rays
    lin_int = ea.hermite_normal_form([ea.integer_scale(l) for l in lin], n) if lin else []
    lin_int = ea.saturation(lin_int, n) if lin_int else []
    out = []
    seen = set()
    for r, _ in rays:
        c = _reduce_mod_lineality(r, lin_int, n)
        if _is_zero(c) or c in seen:
            continue
        seen.add(c)
        out.append(c)
    out.sort()
    return out, [tuple(l) for l in lin_int]


def _reduce_mod_lineality(v, lin: Sequence[Sequence], n: int) -> tuple[int, ...]:
    """Primitive integer direction of the component of v orthogonal to lin."""
    v = _fr(v)
    if lin:
        basis = [_fr(l) for l in lin]
        gram = [[_dot(a, b) for b in basis] for a in basis]
        rhs = [_dot(a, v) for a in basis]
        coef = ea.solve(gram, rhs, len(basis))
        for c, b in zip(coef, basis):
            v = tuple(x - c * y for x, y in zip(v, b))
    return _canon_dir(v)


# ------------------------------------------------------------------- cones

class Cone:
    """A rational polyhedral cone in Q^ambient."""

    def __init__(
        self,
        ambient: int,
        inequalities: Optional[Sequence[Sequence]] = None,
        equalities: Optional[Sequence[Sequence]] = None,
        rays: Optional[Sequence[Sequence]] = None,
        lineality: Optional[Sequence[Sequence]] = None,
    ):
        self.ambient = ambient
        self._h = None
        self._v = None
        if inequalities is not None or equalities is not None:
            ineq = [ea.integer_scale(a) for a in (inequalities or ()) if not _is_zero(a)]
            eq = [ea.integer_scale(b) for b in (equalities or ()) if not _is_zero(b)]
            self._h = (ineq, eq)
        if rays is not None or lineality is not None:
            rs = [ea.integer_scale(r) for r in (rays or ()) if not _is_zero(r)]
            ls = [ea.integer_scale(l) for l in (lineality or ()) if not _is_zero(l)]
            self._v = (rs, ls)
        if self._h is None and self._v is None:
            self._h = ([], [])
        for group in (self._h or ((), ())) + (self._v or ((), ())):
            for vec in group:
                if len(vec) != ambient:
                    raise PolyhedralError("vector length does not match cone ambient dimension")

    @classmethod
    def from_h(cls, ambient, inequalities=(), equalities=()) -> "Cone":
        return cls(ambient, inequalities=list(inequalities), equalities=list(equalities))

    @classmethod
    def from_v(cls, ambient, rays=(), lineality=()) -> "Cone":
        return cls(ambient, rays=list(rays), lineality=list(lineality))

    @classmethod
    def zero(cls, ambient) -> "Cone":
        return cls.from_v(ambient, [], [])

    @classmethod
    def full(cls, ambient) -> "Cone":
        return cls.from_h(ambient, [], [])

    @cached_property
    def _vrep(self):
        if self._h is not None:
            return double_description(self._h[0], self._h[1], self.ambient)
        rays, lin = self._v
        # minimize via the dual: extreme rays are those spanning facets of the dual
        ineq, eq = self._hrep
        return double_description(ineq, eq, self.ambient)

    @cached_property
    def _hrep(self):
        if self._h is not None and self._v is None:
            # canonical minimal H-rep through the dual cone
            rays, lin = self._vrep
        elif self._v is not None:
            rays, lin = self._v
        dual_rays, dual_lin = double_description(rays, lin, self.ambient)
        return dual_rays, dual_lin

    @property
    def rays(self) -> list[tuple[int, ...]]:
        return self._vrep[0]

    @property
    def lineality(self) -> list[tuple[int, ...]]:
        return self._vrep[1]

    @property
    def inequalities(self) -> list[tuple[int, ...]]:
        return self._hrep[0]

    @property
    def equalities(self) -> list[tuple[int, ...]]:
        return self._hrep[1]

    def raw_h(self):
        """The H-representation as supplied (or the canonical one)."""
        return self._h if self._h is not None else self._hrep

    def contains(self, x: Sequence) -> bool:
        ineq, eq = self.raw_h()
        return all(_dot(a, x) >= 0 for a in ineq) and all(_dot(b, x) == 0 for b in eq)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(r) for r in other.generators_v()[0]) and all(
            self.contains(l) and self.contains([-x for x in l]) for l in other.generators_v()[1]
        )

    def generators_v(self):
        return self._v if self._v is not None else self._vrep

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cone):
            return NotImplemented
        return (
            self.ambient == other.ambient
            and self.contains_cone(other)
            and other.contains_cone(self)
        )

    def __hash__(self):
        return hash((self.ambient, tuple(self.rays), tuple(self.lineality)))

    def __repr__(self):
        return f"Cone(ambient={self.ambient}, rays={self.rays}, lineality={self.lineality})"

    @cached_property
    def dim(self) -> int:
        return cone_dimension(self)

    def relint_point(self) -> Vec:
        return relint_point(self)

    def dual(self) -> "Cone":
        rays, lin = self.generators_v()
        return Cone.from_h(self.ambient, rays, lin)

    def image(self, m: Sequence[Sequence]) -> "Cone":
        """Image under the linear map with matrix ``m`` (rows = output coords)."""
        k = len(m)
        rays, lin = self.generators_v()
        return Cone.from_v(
            k, [ea.mat_vec(m, r) for r in rays], [ea.mat_vec(m, l) for l in lin]
        )

    def to_json(self) -> dict:
        return {
            "ambient": self.ambient,
            "rays": [list(r) for r in self.rays],
            "lineality": [list(l) for l in self.lineality],
            "inequalities": [list(a) for a in self.inequalities],
            "equalities": [list(b) for b in self.equalities],
            "dim": self.dim,
        }


def h_to_v(obj):
    """V-representation of a :class:`Cone` or :class:`Polytope`."""
    if isinstance(obj, Cone):
        return {"rays": obj.rays, "lineality": obj.lineality}
    if isinstance(obj, Polytope):
        return {
            "vertices": obj.vertices,
            "rays": obj.rays,
            "lineality": obj.lineality,
            "empty": obj.is_empty,
            "full_dimensional": obj.dim == obj.ambient,
        }
    raise TypeError("expected Cone or Polytope")


def v_to_h(obj):
    """Minimal H-representation of a cone or polytope."""
    if isinstance(obj, Cone):
        return {"inequalities": obj.inequalities, "equalities": obj.equalities}
    if isinstance(obj, Polytope):
        return {"halfspaces": obj.facet_halfspaces(), "equalities": obj.affine_equations()}
    raise TypeError("expected Cone or Polytope")


def cone_dimension(c: Cone) -> int:
    """Dimension of the linear hull, computed from one exact LP."""
    implicit = _implicit_equalities(c.ambient, *c.raw_h())
    ineq, eq = c.raw_h()
    rows = list(eq) + [ineq[i] for i in implicit]
    return c.ambient - (ea.rank(rows, c.ambient) if rows else 0)


def _relint_lp(n: int, ineq: Sequence[Sequence], eq: Sequence[Sequence]):
    """Maximize the sum of capped slacks; returns (x, slacks)."""
    m = len(ineq)
    nv = n + m
    a_ub, b_ub = [], []
    for i, a in enumerate(ineq):
        row = [-Fraction(x) for x in a] + [Fraction(int(j == i)) for j in range(m)]
        a_ub.append(row)  # s_i - a.x <= 0
        b_ub.append(0)
        cap = [Fraction(0)] * n + [Fraction(int(j == i)) for j in range(m)]
        a_ub.append(cap)
        b_ub.append(1)
        a_ub.append([-x for x in cap])
        b_ub.append(0)
    a_eq = [list(map(Fraction, b)) + [Fraction(0)] * m for b in eq]
    b_eq = [0] * len(eq)
    c = [0] * n + [1] * m
    res = solve_lp(c, a_ub, b_ub, a_eq, b_eq, nvars=nv)
    if res.status != OPTIMAL:
        raise PolyhedralError("relative interior LP failed")
    return res.x[:n], res.x[n:]


def _implicit_equalities(n, ineq, eq) -> list[int]:
    if not ineq:
        return []
    _, slacks = _relint_lp(n, ineq, eq)
    return [i for i, s in enumerate(slacks) if s == 0]


def relint_point(c: Cone) -> Vec:
    ineq, eq = c.raw_h()
    if not ineq:
        return tuple(Fraction(0) for _ in range(c.ambient))
    x, _ = _relint_lp(c.ambient, ineq, eq)
    return tuple(x)


# ------------------------------------------------ Fourier-Motzkin projection

def _lp_redundant(idx: int, ineq: list, eq: list, n: int) -> bool:
    a = ineq[idx]
    others = [b for j, b in enumerate(ineq) if j != idx]
    a_ub = [[-Fraction(x) for x in b] for b in others] + [[-Fraction(x) for x in a]]
    b_ub = [0] * len(others) + [1]
    res = solve_lp(list(a), a_ub, b_ub, [list(b) for b in eq], [0] * len(eq), nvars=n, maximize=False)
    return res.status == OPTIMAL and res.value >= 0


def remove_redundant(ineq: Sequence[Sequence], eq: Sequence[Sequence], n: int):
    """Drop inequalities implied by the rest (exact LP), and duplicates."""
    eq_b = _span_basis(eq, n)
    seen, uniq = set(), []
    for a in ineq:
        t = _canon_dir(a)
        if _is_zero(t) or t in seen:
            continue
        seen.add(t)
        uniq.append(t)
    kept = list(uniq)
    i = 0
    while i < len(kept):
        if _lp_redundant(i, kept, eq_b, n):
            kept.pop(i)
        else:
            i += 1
    return kept, [_canon_dir(b) for b in eq_b]


def fm_eliminate(
    ineq: Sequence[Sequence], eq: Sequence[Sequence], n: int, eliminate: Sequence[int]
):
    """Project ``{a.x >= 0, b.x = 0}`` onto the coordinates not in ``eliminate``.

    Returns ``(inequalities, equalities)`` in the remaining coordinates, in
    their original order.
    """
    ineq = [_fr(a) for a in ineq]
    eq = [_fr(b) for b in eq]
    for var in eliminate:
        piv = next((b for b in eq if b[var] != 0), None)
        if piv is not None:
            def sub(v, piv=piv):
                f = v[var] / piv[var]
                return tuple(x - f * y for x, y in zip(v, piv)) if f else v

            eq = [sub(b) for b in eq if b is not piv]
            ineq = [sub(a) for a in ineq]
            eq = [b for b in eq if not _is_zero(b)]
            continue
        pos = [a for a in ineq if a[var] > 0]
        neg = [a for a in ineq if a[var] < 0]
        out = [a for a in ineq if a[var] == 0]
        for p in pos:
            for q in neg:
                out.append(tuple(p[var] * y - q[var] * x for x, y in zip(p, q)))
        ineq, eq_ = remove_redundant(out, eq, n)
        ineq = [_fr(a) for a in ineq]
        eq = [_fr(b) for b in eq_]
    keep = [i for i in range(n) if i not in set(eliminate)]
    proj_ineq = [tuple(a[i] for i in keep) for a in ineq]
    proj_eq = [tuple(b[i] for i in keep) for b in eq]
    k = len(keep)
    pi, pe = remove_redundant(proj_ineq, proj_eq, k)
    return pi, pe


def fm_project(c: Cone, keep: int) -> Cone:
    """Projection of ``c`` onto its first ``keep`` coordinates."""
    ineq, eq = c.raw_h()
    pi, pe = fm_eliminate(ineq, eq, c.ambient, list(range(keep, c.ambient)))
    return Cone.from_h(keep, pi, pe)


def cone_image(c: Cone, m: Sequence[Sequence], method: str = "fm") -> Cone:
    """Image of a cone under a rational linear map (rows of ``m`` = outputs).

    ``method="fm"`` eliminates the source variables from the graph of the
    map; ``method="dd"`` maps generators.
    """
    k = len(m)
    n = c.ambient
    if method == "dd":
        return c.image(m)
    ineq, eq = c.raw_h()
    # variables (y, w): y - M w = 0, constraints on w
    big_eq = []
    for i in range(k):
        row = [Fraction(int(j == i)) for j in range(k)] + [-Fraction(x) for x in m[i]]
        big_eq.append(row)
    big_eq += [[Fraction(0)] * k + list(map(Fraction, b)) for b in eq]
    big_ineq = [[Fraction(0)] * k + list(map(Fraction, a)) for a in ineq]
    pi, pe = fm_eliminate(big_ineq, big_eq, k + n, list(range(k, k + n)))
    return Cone.from_h(k, pi, pe)


# --------------------------------------------------------------- polytopes

@dataclass(frozen=True)
class Halfspace:
    """``<normal, x> >= constant`` with a primitive integer normal."""

    normal: tuple[int, ...]
    constant: Fraction

    def __post_init__(self):
        if _is_zero(self.normal):
            raise PolyhedralError("halfspace normal must be nonzero")
        if ea.vec_gcd(self.normal) != 1:
            raise PolyhedralError(f"halfspace normal {self.normal} is not primitive")

    @classmethod
    def make(cls, normal: Sequence, constant) -> "Halfspace":
        """Rescale a rational normal to a primitive integer one."""
        fr = _fr(normal)
        prim = ea.integer_scale(fr)
        if _is_zero(prim):
            raise PolyhedralError("halfspace normal must be nonzero")
        idx = next(i for i, x in enumerate(prim) if x)
        scale = Fraction(prim[idx]) / fr[idx]
        return cls(prim, Fraction(constant) * scale)

    def value(self, x) -> Fraction:
        return _dot(self.normal, x) - self.constant

    def to_json(self) -> dict:
        return {"normal": list(self.normal), "constant": ea.format_rational(self.constant)}


class Polytope:
    """A rational polyhedron ``{x : <nu_i, x> >= c_i}``; may be unbounded."""

    def __init__(self, ambient: int, halfspaces: Sequence[Halfspace] = ()):
        self.ambient = ambient
        self.halfspaces = tuple(halfspaces)
        for h in self.halfspaces:
            if len(h.normal) != ambient:
                raise PolyhedralError("halfspace dimension mismatch")

    @classmethod
    def from_inequalities(cls, ambient, rows: Iterable[tuple[Sequence, object]]) -> "Polytope":
        return cls(ambient, [Halfspace.make(a, c) for a, c in rows])

    @classmethod
    def from_vertices(cls, ambient, vertices, rays=(), lineality=()) -> "Polytope":
        vertices = [_fr(v) for v in vertices]
        if not vertices:
            raise PolyhedralError("a polytope needs at least one vertex")
        gens = [v + (Fraction(1),) for v in vertices]
        gens += [_fr(r) + (Fraction(0),) for r in rays]
        lin = [_fr(l) + (Fraction(0),) for l in lineality]
        cone = Cone.from_v(ambient + 1, gens, lin)
        hs = []
        for a in cone.inequalities:
            if _is_zero(a[:ambient]):
                continue  # t >= 0
            hs.append(Halfspace.make(a[:ambient], -Fraction(a[ambient])))
        for b in cone.equalities:
            if _is_zero(b[:ambient]):
                raise PolyhedralError("degenerate homogenization")
            hs.append(Halfspace.make(b[:ambient], -Fraction(b[ambient])))
            hs.append(Halfspace.make([-x for x in b[:ambient]], Fraction(b[ambient])))
        p = cls(ambient, hs)
        return p

    @classmethod
    def point(cls, x: Sequence) -> "Polytope":
        x = _fr(x)
        n = len(x)
        return cls.from_vertices(n, [x]) if n else cls(0, [])

    # homogenization ------------------------------------------------------
    def _homog_rows(self):
        rows = [tuple(Fraction(v) for v in h.normal) + (-h.constant,) for h in self.halfspaces]
        rows.append(tuple(Fraction(0) for _ in range(self.ambient)) + (Fraction(1),))
        return rows

    @cached_property
    def homogenization(self) -> Cone:
        return Cone.from_h(self.ambient + 1, self._homog_rows(), [])

    @cached_property
    def _gens(self):
        n = self.ambient
        rays, lin = double_description(self._homog_rows(), [], n + 1)
        verts, rrs = [], []
        for r in rays:
            if r[n] > 0:
                verts.append(tuple(Fraction(x, r[n]) for x in r[:n]))
            else:
                rrs.append(tuple(r[:n]))
        lins = [tuple(l[:n]) for l in lin]
        if verts and lins:
            # make vertices canonical modulo lineality
            verts = sorted(set(verts))
        return sorted(verts), sorted(rrs), lins

    @property
    def vertices(self) -> list[Vec]:
        return self._gens[0]

    @property
    def rays(self) -> list[tuple[int, ...]]:
        return self._gens[1]

    @property
    def lineality(self) -> list[tuple[int, ...]]:
        return self._gens[2]

    @property
    def is_empty(self) -> bool:
        x, _ = self._relint
        return x[self.ambient] == 0

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    @cached_property
    def _relint(self):
        rows = self._homog_rows()
        x, slacks = _relint_lp(self.ambient + 1, rows, [])
        return x, slacks

    def relint_point(self) -> Vec:
        x, slacks = self._relint
        t = x[self.ambient]
        if t == 0:
            raise PolyhedralError("empty polytope has no interior point")
        return tuple(v / t for v in x[: self.ambient])

    @cached_property
    def implicit(self) -> frozenset[int]:
        """Indices of halfspaces tight on the whole polytope."""
        if self.is_empty:
            return frozenset(range(len(self.halfspaces)))
        _, slacks = self._relint
        return frozenset(i for i, s in enumerate(slacks[: len(self.halfspaces)]) if s == 0)

    def direction_space(self) -> list[Vec]:
        """Basis of the tangent space TP (the linear span of P - P)."""
        if self.is_empty:
            return []
        normals = [self.halfspaces[i].normal for i in sorted(self.implicit)]
        if not normals:
            return [tuple(Fraction(int(i == j)) for j in range(self.ambient)) for i in range(self.ambient)]
        return _span_basis(ea.nullspace(normals, self.ambient), self.ambient)

    @cached_property
    def dim(self) -> int:
        if self.is_empty:
            return -1
        return len(self.direction_space())

    def affine_equations(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Equations ``b.x = c`` cutting out the affine hull."""
        if self.is_empty:
            return []
        ann = ea.annihilator_basis(self.direction_space(), self.ambient) if self.dim < self.ambient else []
        v0 = self.relint_point()
        return [(b, _dot(b, v0)) for b in ann]

    def contains(self, x: Sequence) -> bool:
        return all(h.value(x) >= 0 for h in self.halfspaces)

    def in_relint(self, x: Sequence) -> bool:
        if not self.contains(x):
            return False
        return all(self.halfspaces[i].value(x) > 0 for i in range(len(self.halfspaces)) if i not in self.implicit)

    def tight_set(self, x: Sequence) -> frozenset[int]:
        return frozenset(i for i, h in enumerate(self.halfspaces) if h.value(x) == 0)

    def facet_halfspaces(self) -> list[Halfspace]:
        """Irredundant facet-defining halfspaces (implicit equalities excluded)."""
        out, seen = [], set()
        for face in self.faces():
            if face.dim == self.dim - 1:
                idx = min(face.tight - self.implicit)
                key = face.tight
                if key in seen:
                    continue
                seen.add(key)
                out.append(self.halfspaces[idx])
        return out

    def faces(self) -> list["Face"]:
        return faces(self)

    def same_set(self, other: "Polytope") -> bool:
        if self.ambient != other.ambient:
            return False
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        return self._contains_poly(other) and other._contains_poly(self)

    def _contains_poly(self, other: "Polytope") -> bool:
        if not all(self.contains(v) for v in other.vertices):
            return False
        for r in other.rays:
            if any(_dot(h.normal, r) < 0 for h in self.halfspaces):
                return False
        for l in other.lineality:
            if any(_dot(h.normal, l) != 0 for h in self.halfspaces):
                return False
        return True

    def contains_polytope(self, other: "Polytope") -> bool:
        return other.is_empty or self._contains_poly(other)

    def intersect(self, other: "Polytope") -> "Polytope":
        return Polytope(self.ambient, self.halfspaces + other.halfspaces)

    def affine_image(self, m: Sequence[Sequence], offset: Sequence) -> "Polytope":
        """Image ``x -> m x + offset`` (rows of ``m`` are output coordinates)."""
        k = len(m)
        verts = [tuple(a + b for a, b in zip(ea.mat_vec(m, v), offset)) for v in self.vertices]
        rays = [ea.mat_vec(m, r) for r in self.rays]
        lin = [ea.mat_vec(m, l) for l in self.lineality]
        return Polytope.from_vertices(k, verts, rays, lin)

    def to_json(self) -> dict:
        return {"halfspaces": [h.to_json() for h in self.halfspaces]}

    def __repr__(self):
        return f"Polytope(ambient={self.ambient}, halfspaces={len(self.halfspaces)})"


@dataclass(frozen=True)
class Face:
    """A nonempty face of a polytope, identified by its closed tight set."""

    parent: Polytope = field(repr=False, compare=False, hash=False)
    tight: frozenset
    vertex_ids: tuple[int, ...]
    ray_ids: tuple[int, ...]
    dim: int

    @property
    def vertices(self) -> list[Vec]:
        return [self.parent.vertices[i] for i in self.vertex_ids]

    def polytope(self) -> Polytope:
        hs = list(self.parent.halfspaces)
        for i in sorted(self.tight):
            h = self.parent.halfspaces[i]
            hs.append(Halfspace(tuple(-x for x in h.normal), -h.constant))
        return Polytope(self.parent.ambient, hs)

    def relint_point(self) -> Vec:
        vs = self.vertices
        pt = [sum((v[i] for v in vs), Fraction(0)) / len(vs) for i in range(self.parent.ambient)]
        for j in self.ray_ids:
            pt = [a + b for a, b in zip(pt, self.parent.rays[j])]
        return tuple(pt)


def faces(p: Polytope) -> list[Face]:
    """All nonempty faces, found by closure over generator incidence."""
    if p.is_empty:
        return []
    hs = p.halfspaces
    verts, rays, lin = p.vertices, p.rays, p.lineality
    vt = [frozenset(i for i, h in enumerate(hs) if h.value(v) == 0) for v in verts]
    rt = [frozenset(i for i, h in enumerate(hs) if _dot(h.normal, r) == 0) for r in rays]
    allidx = frozenset(range(len(hs)))

    def gens(s):
        return (
            tuple(i for i, t in enumerate(vt) if s <= t),
            tuple(j for j, t in enumerate(rt) if s <= t),
        )

    def closure(s):
        vi, ri = gens(s)
        if not vi:
            return None
        c = allidx
        for i in vi:
            c = c & vt[i]
        for j in ri:
            c = c & rt[j]
        return c

    def make(c):
        vi, ri = gens(c)
        v0 = verts[vi[0]]
        vecs = [tuple(a - b for a, b in zip(verts[i], v0)) for i in vi[1:]]
        vecs += [_fr(rays[j]) for j in ri] + [_fr(l) for l in lin]
        vecs = [v for v in vecs if not _is_zero(v)]
        d = ea.rank(vecs, p.ambient) if vecs else 0
        return Face(p, c, vi, ri, d)

    start = closure(frozenset())
    found = {start: make(start)}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for i in allidx - s:
            c = closure(s | {i})
            if c is not None and c not in found:
                found[c] = make(c)
                queue.append(c)
    return sorted(found.values(), key=lambda f: (-f.dim, sorted(f.tight)))


def tangent_cone(p: Polytope, point: Sequence) -> Cone:
    """ℝ≥0 (P - point) for a point of P."""
    tight = p.tight_set(point)
    return Cone.from_h(p.ambient, [p.halfspaces[i].normal for i in sorted(tight)], [])


def cone_of_polytope_at_face(p: Polytope, q) -> tuple[Cone, Cone]:
    """``Cone_Q(P)`` and its dual cone; ``q`` is a :class:`Face` or a polytope."""
    if isinstance(q, Face):
        if q.parent is not p:
            raise PolyhedralError("face belongs to another polytope")
        lam = q.relint_point()
    else:
        match = face_matching(p, q)
        if match is None:
            raise PolyhedralError("Q is not a face of P")
        lam = match.relint_point()
    c = tangent_cone(p, lam)
    return c, c.dual()


def face_matching(p: Polytope, q: Polytope) -> Optional[Face]:
    """The face of ``p`` equal to ``q`` as a set, if any."""
    if q.is_empty or p.ambient != q.ambient or not p._contains_poly(q):
        return None
    tight = p.tight_set(q.relint_point())
    cands = [f for f in p.faces() if tight <= f.tight]
    if not cands:
        return None
    f = max(cands, key=lambda f: f.dim)
    if f.dim != q.dim:
        return None
    if p.lineality or q.lineality:
        return f if f.polytope().same_set(q) else None
    same = sorted(f.vertices) == sorted(q.vertices) and sorted(
        p.rays[j] for j in f.ray_ids
    ) == sorted(q.rays)
    return f if same else None


# ------------------------------------------------------------------ Delzant

@dataclass(frozen=True)
class DelzantReport:
    ok: bool
    vertex: Optional[Vec] = None
    normals: tuple = ()
    index: object = 1
    reason: str = ""

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "delzant": self.ok,
            "vertex": None if self.vertex is None else ea.format_vector(self.vertex),
            "normals": [list(n) for n in self.normals],
            "index": self.index,
            "reason": self.reason,
        }


def is_delzant(p: Polytope) -> DelzantReport:
    """Check that the facet normals at each vertex form a lattice basis of
    their integral span (and that the polytope is simple there)."""
    if p.is_empty:
        raise PolyhedralError("empty polytope")
    if not p.vertices or p.lineality:
        raise PolyhedralError("polyhedron has faces without vertices")
    if p.dim != p.ambient:
        raise PolyhedralError("Delzant test needs a full-dimensional polytope")
    facets = p.facet_halfspaces()
    for v in p.vertices:
        normals = tuple(h.normal for h in facets if h.value(v) == 0)
        r = ea.rank(normals, p.ambient)
        if r != len(normals):
            return DelzantReport(False, v, normals, "infinite", "vertex is not simple")
        sat = ea.saturation(normals, p.ambient)
        # index of the normals inside the saturated lattice they span
        coords = [ea.solve(ea.transpose(sat), list(nv), len(sat)) for nv in normals]
        idx = ea.lattice_index([[int(c) for c in row] for row in coords], len(sat))
        if idx != 1:
            return DelzantReport(False, v, normals, idx, "normals do not form a lattice basis")
    return DelzantReport(True)


# ------------------------------------------------------------ decomposition

class Decomposition:
    """A polytopal decomposition of t^dual = Q^n with its face poset."""

    def __init__(
        self,
        dim: int,
        polytopes: Mapping[str, Polytope],
        faces: Optional[Iterable[tuple[str, str]]] = None,
    ):
        self.dim = dim
        self.polytopes = dict(polytopes)
        for pid, p in self.polytopes.items():
            if p.ambient != dim:
                raise PolyhedralError(f"polytope {pid} has ambient dimension {p.ambient}, expected {dim}")
        self.supplied_faces = None if faces is None else [tuple(f) for f in faces]
        self._face_rel: Optional[set] = None

    @property
    def ids(self) -> list[str]:
        return list(self.polytopes)

    def __getitem__(self, pid: str) -> Polytope:
        if pid not in self.polytopes:
            raise PolyhedralError(f"unknown polytope id {pid!r}")
        return self.polytopes[pid]

    def geometric_face(self, q: str, p: str) -> bool:
        """True iff member ``q`` is a face of member ``p`` (possibly equal)."""
        if q == p:
            return True
        P, Q = self[p], self[q]
        if Q.dim >= P.dim or not P.contains_polytope(Q):
            return False
        return face_matching(P, Q) is not None

    @property
    def face_relation(self) -> set[tuple[str, str]]:
        """Pairs (Q, P) with Q a proper face of P."""
        if self._face_rel is None:
            rel = set()
            for q in self.polytopes:
                for p in self.polytopes:
                    if q != p and self.geometric_face(q, p):
                        rel.add((q, p))
            self._face_rel = rel
        return self._face_rel

    def supersets(self, q: str) -> list[str]:
        """Members having ``q`` as a face, including ``q`` itself."""
        self[q]
        return [q] + sorted(p for (c, p) in self.face_relation if c == q)

    def faces_of(self, p: str) -> list[str]:
        return sorted(c for (c, par) in self.face_relation if par == p)

    def intersection_member(self, a: str, b: str) -> Optional[str]:
        inter = self[a].intersect(self[b])
        if inter.is_empty:
            return None
        for pid, poly in self.polytopes.items():
            if poly.same_set(inter):
                return pid
        return None

    def find(self, poly: Polytope) -> Optional[str]:
        for pid, q in self.polytopes.items():
            if q.same_set(poly):
                return pid
        return None

    def tangent_basis(self, pid: str) -> list[tuple[int, ...]]:
        """Canonical integer basis of ann(T P) inside t_Z (the lattice t_{P,Z})."""
        p = self[pid]
        ts = p.direction_space()
        if not ts:
            return ea.hermite_normal_form(ea.identity(self.dim), self.dim)
        if len(ts) == self.dim:
            return []
        return ea.annihilator_basis(ts, self.dim)

    def validate(self) -> list[str]:
        issues = []
        for pid, p in self.polytopes.items():
            if p.is_empty:
                issues.append(f"/polytopes/{pid}: empty polytope")
        if issues:
            return issues
        for pid, p in self.polytopes.items():
            for f in p.faces():
                if f.dim == p.dim:
                    continue
                if self.find(f.polytope()) is None:
                    issues.append(f"face of {pid} (dim {f.dim}) is not a member")
        ids = self.ids
        for i, a in enumerate(ids):
            for b in ids[i + 1:]:
                inter = self[a].intersect(self[b])
                if inter.is_empty:
                    continue
                z = inter.relint_point()
                if self[a].in_relint(z) and self[b].in_relint(z):
                    issues.append(f"relative interiors of {a} and {b} overlap")
        if self.supplied_faces is not None:
            for q, p in self.supplied_faces:
                if q not in self.polytopes or p not in self.polytopes:
                    issues.append(f"face pair ({q}, {p}) references an unknown id")
                elif not self.geometric_face(q, p) or q == p:
                    issues.append(f"{q} is not a proper face of {p}")
        return issues

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "polytopes": [dict(id=pid, **p.to_json()) for pid, p in self.polytopes.items()],
        }


@dataclass
class Fan:
    """Cones ``Cone_λ(P)`` for the members ``P ⊇ Q``, keyed by member id."""

    q: str
    point: Vec
    cones: dict[str, Cone]
    quotient_basis: list[tuple[int, ...]]
    quotient_cones: dict[str, Cone]

    def to_json(self) -> dict:
        return {
            "face": self.q,
            "point": ea.format_vector(self.point),
            "quotient_basis": [list(b) for b in self.quotient_basis],
            "cones": {pid: c.to_json() for pid, c in sorted(self.quotient_cones.items())},
        }


def normal_fan(d: Decomposition, q: str) -> Fan:
    """The fan of cones ``ℝ≥0 (P - λ)`` for λ in the relative interior of Q.

    Cones are reported in t^dual and in quotient coordinates ``x -> B_Q x``
    where the rows of ``B_Q`` span ann(TQ).
    """
    lam = d[q].relint_point()
    cones = {p: tangent_cone(d[p], lam) for p in d.supersets(q)}
    bq = d.tangent_basis(q)
    quot = {p: c.image(bq) if bq else Cone.zero(0) for p, c in cones.items()}
    return Fan(q, lam, cones, bq, quot)


# --------------------------------------------------------- gluing datum

@dataclass
class DualCell:
    polytope: Polytope
    anchor: Vec


@dataclass
class GluingDatum:
    """Dual polytopes in annihilator coordinates plus the pairing t ≅ t^dual."""

    dim: int
    duals: dict[str, DualCell]
    pairing: Optional[list[list[int]]] = None

    def __post_init__(self):
        if self.pairing is None:
            self.pairing = ea.identity(self.dim)

    def to_json(self) -> dict:
        return {
            "pairing": self.pairing,
            "duals": [
                {
                    "polytope": pid,
                    "anchor": ea.format_vector(c.anchor),
                    **c.polytope.to_json(),
                }
                for pid, c in self.duals.items()
            ],
        }


def embedding_matrix(b: Sequence[Sequence[int]], n: int) -> list[list[Fraction]]:
    """``E = Bᵀ (B Bᵀ)^{-1}`` so that ``B E = I`` (n × k)."""
    k = len(b)
    if k == 0:
        return [[] for _ in range(n)]
    gram = [[Fraction(_dot(r, s)) for s in b] for r in b]
    inv = []
    for j in range(k):
        e = [Fraction(int(i == j)) for i in range(k)]
        inv.append(ea.solve(gram, e, k))
    inv = ea.transpose(inv)  # columns were solutions
    bt = ea.transpose([[Fraction(x) for x in r] for r in b])
    return ea.mat_mul(bt, inv)


@dataclass
class GluingReport:
    ok: bool
    violations: list[str]
    matches: dict

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "violations": list(self.violations),
            "matches": {
                p: {str(sorted(t)): m for t, m in sorted(v.items(), key=lambda kv: sorted(kv[0]))}
                for p, v in sorted(self.matches.items())
            },
        }


def _face_normal_cone(dual: Polytope, face: Face, mapm) -> Cone:
    normals = [dual.halfspaces[i].normal for i in sorted(face.tight)]
    k = dual.ambient
    if not normals:
        return Cone.zero(k)
    return Cone.from_v(k, [ea.mat_vec(mapm, nv) for nv in normals], [])


def _hull_contains(point, vertices) -> bool:
    if not vertices:
        return False
    k = len(point)
    m = len(vertices)
    a_eq = [[vertices[j][i] for j in range(m)] for i in range(k)] + [[1] * m]
    b_eq = list(point) + [1]
    res = solve_lp([0] * m, [], [], a_eq, b_eq, nvars=m, nonneg=True)
    return res.status == OPTIMAL


def _same_vertex_hull(a: Sequence[Vec], b: Sequence[Vec]) -> bool:
    return all(_hull_contains(x, b) for x in a) and all(_hull_contains(y, a) for y in b)


def validate_gluing(g: GluingDatum, d: Decomposition) -> GluingReport:
    """Check the fan and projection conditions of a gluing datum."""
    n = d.dim
    if g.dim != n:
        raise PolyhedralError("gluing datum dimension differs from the decomposition")
    violations: list[str] = []
    matches: dict[str, dict] = {}
    bases = {p: d.tangent_basis(p) for p in d.ids}
    for pid in d.ids:
        if pid not in g.duals:
            raise PolyhedralError(f"no dual polytope for member {pid!r}")
        k = len(bases[pid])
        if g.duals[pid].polytope.ambient != k:
            raise PolyhedralError(
                f"dual of {pid!r} lives in Q^{g.duals[pid].polytope.ambient}, expected Q^{k}"
            )
        if len(g.duals[pid].anchor) != n:
            raise PolyhedralError(f"anchor of {pid!r} has wrong length")
    for pid in d.ids:
        dual = g.duals[pid].polytope
        b = bases[pid]
        k = len(b)
        if dual.is_empty:
            violations.append(f"{pid}: dual polytope is empty")
            continue
        if not dual.is_bounded:
            violations.append(f"{pid}: dual polytope is unbounded")
            continue
        fan = normal_fan(d, pid)
        mapm = ea.mat_mul(ea.mat_mul(b, g.pairing), ea.transpose(b)) if k else []
        pending = dict(fan.quotient_cones)
        matches[pid] = {}
        for face in dual.faces():
            cone = _face_normal_cone(dual, face, mapm) if k else Cone.zero(0)
            hit = next((p for p, c in pending.items() if c == cone), None)
            if hit is None:
                violations.append(f"{pid}: face {sorted(face.tight)} of the dual has no matching normal-fan cone")
                continue
            matches[pid][face.tight] = hit
            del pending[hit]
        for p in pending:
            violations.append(f"{pid}: normal-fan cone of {p} matches no face of the dual")
    if violations:
        return GluingReport(False, violations, matches)
    # projection / identification compatibility
    for q in d.ids:
        bq = bases[q]
        dq = g.duals[q]
        eq_ = embedding_matrix(bq, n)
        for face_tight, p in matches[q].items():
            if p == q:
                continue
            bp = bases[p]
            dp = g.duals[p]
            face = next(f for f in dq.polytope.faces() if f.tight == face_tight)
            # R with B_P = R B_Q
            r = []
            for row in bp:
                sol = ea.solve(ea.transpose(bq), list(row), len(bq))
                if sol is None:
                    raise PolyhedralError(f"ann(T{p}) is not inside ann(T{q})")
                r.append(sol)
            img = [ea.mat_vec(r, v) if r else () for v in face.vertices]
            if not _same_vertex_hull(img, dp.polytope.vertices):
                violations.append(f"projection: image of the face of {q}^dual matched to {p} is not {p}^dual")
                continue
            ep = embedding_matrix(bp, n)
            cell_p = [_embed(dp.anchor, ep, v) for v in dp.polytope.vertices]
            cell_q = [_embed(dq.anchor, eq_, v) for v in face.vertices]
            if not _same_vertex_hull(cell_p, cell_q):
                violations.append(f"projection: cell of {p} is not identified with the face of the cell of {q}")
    return GluingReport(not violations, violations, matches)


def _embed(anchor, e, y) -> Vec:
    if not y:
        return tuple(anchor)
    return tuple(a + b for a, b in zip(anchor, ea.mat_vec(e, y)))


@dataclass
class Cell:
    member: str
    basis: list[tuple[int, ...]]
    embedding: list[list[Fraction]]
    anchor: Vec
    dual: Polytope

    @property
    def vertices(self) -> list[Vec]:
        return [_embed(self.anchor, self.embedding, v) for v in self.dual.vertices]

    def coordinates(self, w: Sequence) -> Optional[Vec]:
        """Annihilator coordinates of ``w`` if it lies on the affine span of the cell."""
        w = _fr(w)
        diff = tuple(a - b for a, b in zip(w, self.anchor))
        y = ea.mat_vec(self.basis, diff) if self.basis else ()
        back = _embed(self.anchor, self.embedding, y)
        if back != w:
            return None
        return tuple(Fraction(x) for x in y)

    def contains(self, w: Sequence) -> bool:
        y = self.coordinates(w)
        return y is not None and self.dual.contains(y)

    def in_relint(self, w: Sequence) -> bool:
        y = self.coordinates(w)
        return y is not None and self.dual.in_relint(y)


@dataclass
class DualComplex:
    cells: dict[str, Cell]
    identifications: list[tuple[str, str]]
    projections: dict[tuple[str, str], list[list[Fraction]]]

    def locate(self, w: Sequence) -> list[str]:
        """Members whose cell contains ``w`` in its relative interior."""
        return sorted(p for p, c in self.cells.items() if c.in_relint(w))

    def containing(self, w: Sequence) -> list[str]:
        return sorted(p for p, c in self.cells.items() if c.contains(w))

    def projection(self, q: str, p: str):
        return self.projections[(q, p)]

    def to_json(self) -> dict:
        return {
            "cells": {
                p: {"vertices": [ea.format_vector(v) for v in c.vertices], "dim": c.dual.dim}
                for p, c in sorted(self.cells.items())
            },
            "identifications": [list(x) for x in sorted(self.identifications)],
        }


def build_dual_complex(g: GluingDatum, d: Decomposition, check: bool = True) -> DualComplex:
    """Cells of the dual complex; ``check=False`` trusts the datum and skips identifications."""
    cells, ident, proj = {}, [], {}
    for pid in d.ids:
        b = d.tangent_basis(pid)
        cells[pid] = Cell(pid, b, embedding_matrix(b, d.dim), _fr(g.duals[pid].anchor), g.duals[pid].polytope)
    if not check:
        return DualComplex(cells, ident, proj)
    report = validate_gluing(g, d)
    if not report.ok:
        raise PolyhedralError("invalid gluing datum: " + "; ".join(report.violations))
    for q, m in report.matches.items():
        for p in m.values():
            if p != q:
                ident.append((p, q))
                bq, bp = cells[q].basis, cells[p].basis
                proj[(q, p)] = [ea.solve(ea.transpose(bq), list(row), len(bq)) for row in bp]
    return DualComplex(cells, ident, proj)


# --------------------------------------------------------------- builders

def gluing_from_cells(d: Decomposition, cells: Mapping[str, Sequence[Sequence]]) -> GluingDatum:
    """Gluing datum from cell vertex lists given directly in t^dual ≅ Q^n.

    Each cell must be parallel to ann(TP) under the identity pairing.
    """
    n = d.dim
    duals = {}
    for pid in d.ids:
        verts = [_fr(v) for v in cells[pid]]
        b = d.tangent_basis(pid)
        e = embedding_matrix(b, n)
        y0 = verts[0]
        if b:
            proj = _embed((Fraction(0),) * n, e, ea.mat_vec(b, y0))
            anchor = tuple(a - c for a, c in zip(y0, proj))
            coords = [ea.mat_vec(b, v) for v in verts]
            for v, c in zip(verts, coords):
                if _embed(anchor, e, c) != v:
                    raise PolyhedralError(f"cell of {pid} is not parallel to ann(T{pid})")
            dual = Polytope.from_vertices(len(b), coords)
        else:
            if any(v != y0 for v in verts):
                raise PolyhedralError(f"cell of top-dimensional {pid} must be a point")
            anchor = y0
            dual = Polytope(0, [])
        duals[pid] = DualCell(dual, anchor)
    return GluingDatum(n, duals)


SIGNS = "-0+"


def sign_id(s: Sequence[int]) -> str:
    return "".join(SIGNS[x + 1] for x in s)


def coordinate_cross(n: int) -> tuple[Decomposition, GluingDatum]:
    """The decomposition of Q^n by the coordinate hyperplanes and its cube dual.

    Members are sign patterns; the cell of pattern ``s`` is the face of
    ``[-1, 1]^n`` with ``y_i = -s_i`` wherever ``s_i`` is nonzero.
    """
    polys, cells = {}, {}
    for s in product((-1, 0, 1), repeat=n):
        rows = []
        for i, si in enumerate(s):
            e = [0] * n
            e[i] = 1
            if si == 0:
                rows.append((e, 0))
                rows.append(([-x for x in e], 0))
            else:
                rows.append(([si * x for x in e], 0))
        pid = sign_id(s)
        polys[pid] = Polytope.from_inequalities(n, rows)
        free = [i for i in range(n) if s[i] == 0]
        verts = []
        for corner in product((-1, 1), repeat=len(free)):
            y = [Fraction(-si) for si in s]
            for i, c in zip(free, corner):
                y[i] = Fraction(c)
            verts.append(tuple(y))
        cells[pid] = verts
    d = Decomposition(n, polys)
    return d, gluing_from_cells(d, cells)


def decomposition_from_json(obj: Mapping) -> Decomposition:
    n = int(obj["dim"])
    polys = {}
    for p in obj["polytopes"]:
        polys[str(p["id"])] = Polytope(
            n, [Halfspace.make(h["normal"], ea.parse_rational(h["constant"])) for h in p["halfspaces"]]
        )
    faces_ = obj.get("faces")
    return Decomposition(n, polys, None if faces_ is None else [(str(a), str(b)) for a, b in faces_])


def gluing_from_json(obj: Mapping, d: Decomposition) -> GluingDatum:
    duals = {}
    for entry in obj["duals"]:
        pid = str(entry["polytope"])
        k = len(d.tangent_basis(pid)) if pid in d.polytopes else None
        hs = [Halfspace.make(h["normal"], ea.parse_rational(h["constant"])) for h in entry.get("halfspaces", [])]
        amb = len(hs[0].normal) if hs else (k if k is not None else 0)
        duals[pid] = DualCell(Polytope(amb, hs), ea.parse_vector(entry["anchor"]))
    pairing = obj.get("pairing")
    return GluingDatum(d.dim, duals, [list(map(int, r)) for r in pairing] if pairing else None)


def polytope_from_json(obj: Mapping, ambient: Optional[int] = None) -> Polytope:
    hs = [Halfspace.make(h["normal"], ea.parse_rational(h["constant"])) for h in obj["halfspaces"]]
    n = ambient if ambient is not None else len(hs[0].normal)
    return Polytope(n, hs)
