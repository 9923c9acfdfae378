"""Moment-fiber potentials and their leading-order disk skeletons.

Polytopes use inward halfspaces ``<u_i, x> >= k_i``; the outward data are
``μ_i = -u_i`` and ``c_i = -k_i``, so the polytope reads ``<μ_i, x> <= c_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import exactalg as ea
from .ainfty import (
    WEIGHTED,
    Novikov,
    check_associativity,
    check_homotopy_unit_leading,
    check_strict_unit,
    mc_residual,
    toric_model,
)
from .diagonal import cube, hirzebruch, simplex
from .index_energy import edge_multiplicities, maslov_toric
from .polyhedral import Polytope, PolyhedralError, is_delzant, polytope_from_json
from .scenes import _graph, cross_geometry
from .split import (
    SplitType,
    cone_condition,
    genericity_violation,
    make_split_type,
    relative_weights,
    split_rigid,
)
from .tropical import BOUNDARY_LEAF, validate_tropical


class PotentialError(ValueError):
    """Invalid fiber data."""


@dataclass
class MomentFiber:
    polytope: Polytope
    lam: tuple[Fraction, ...]
    eps: Optional[tuple[Fraction, ...]] = None

    def __post_init__(self):
        p = self.polytope
        try:
            rep = is_delzant(p)
        except PolyhedralError as exc:
            raise PotentialError(str(exc)) from None
        if not rep:
            raise PotentialError(f"polytope is not Delzant at vertex {rep.vertex}: {rep.reason}")
        self.lam = tuple(ea.parse_rational(x) for x in self.lam)
        if len(self.lam) != p.ambient:
            raise PotentialError(f"fiber point has length {len(self.lam)}, expected {p.ambient}")
        self.facets = p.facet_halfspaces()
        gaps = self.gaps()
        if any(g <= 0 for g in gaps):
            raise PotentialError("fiber point is not in the interior of the polytope")
        if self.eps is None:
            self.eps = tuple(g / 10 for g in gaps)
        else:
            self.eps = tuple(ea.parse_rational(x) for x in self.eps)
            if len(self.eps) != len(self.facets):
                raise PotentialError(f"expected {len(self.facets)} cut offsets, got {len(self.eps)}")
        for i, (g, e) in enumerate(zip(gaps, self.eps)):
            if e <= 0:
                raise PotentialError(f"cut offset {i} must be positive")
            if g <= e:
                raise PotentialError(f"cut {i} does not separate the fiber from its facet")

    @property
    def n(self) -> int:
        return self.polytope.ambient

    def mu(self, i: int) -> tuple[int, ...]:
        return tuple(-x for x in self.facets[i].normal)

    def c(self, i: int) -> Fraction:
        return -self.facets[i].constant

    def gaps(self) -> list[Fraction]:
        """``c_i - <λ, μ_i>`` for every facet."""
        return [h.value(self.lam) for h in self.facets]


def fiber_from_json(obj: Mapping) -> MomentFiber:
    poly = obj.get("polytope", obj)
    try:
        p = polytope_from_json(poly)
        lam = ea.parse_vector(obj["lambda"])
    except KeyError as exc:
        raise PotentialError(f"missing field {exc.args[0]}") from None
    eps = obj.get("epsilon")
    return MomentFiber(p, lam, None if eps is None else ea.parse_vector(eps))


# ------------------------------------------------------------ potential

@dataclass
class Potential:
    terms: list[tuple[tuple[int, ...], Fraction]]
    negate_exponents: bool = False

    def evaluate(self, y: Sequence, cutoff) -> Novikov:
        """``Σ y^μ q^a`` at a point of the rational torus."""
        y = [ea.parse_rational(v) for v in y]
        if any(v == 0 for v in y):
            raise PotentialError("holonomy coordinates must be nonzero")
        total = Novikov.zero(cutoff)
        for mu, a in self.terms:
            if len(mu) != len(y):
                raise PotentialError(f"holonomy has length {len(y)}, expected {len(mu)}")
            coeff = Fraction(1)
            for yi, m in zip(y, mu):
                coeff *= yi ** m
            total = total + Novikov.monomial(coeff, a, cutoff)
        return total

    def to_json(self) -> dict:
        return {"terms": [{"mu": list(mu), "exp": ea.format_rational(a)} for mu, a in self.terms]}


def bg_potential(f: MomentFiber, negate_exponents: bool = False) -> Potential:
    """One term ``(μ_i, c_i - <λ, μ_i>)`` per facet; ``negate_exponents`` negates the exponents."""
    sign = -1 if negate_exponents else 1
    return Potential([(f.mu(i), sign * g) for i, g in enumerate(f.gaps())], negate_exponents)


# ---------------------------------------------------------- cut pieces

def cut_pieces(f: MomentFiber) -> dict[frozenset, Polytope]:
    """Pieces of the cut polytope, keyed by the facets they are close to.

    The piece for ``I`` is ``{<μ_i,x> >= c_i - ε_i for i in I, <= otherwise}``
    inside the polytope.  It is full-dimensional exactly when the facets in
    ``I`` meet in a face; anything else is reported as an error.
    """
    p = f.polytope
    n = p.ambient
    facets = f.facets
    face_sets = set()
    for face in p.faces():
        verts = face.vertices
        face_sets.add(frozenset(i for i, h in enumerate(facets) if all(h.value(v) == 0 for v in verts)))
    pieces = {}
    for r in range(len(facets) + 1):
        for combo in itertools.combinations(range(len(facets)), r):
            rows = [(h.normal, h.constant) for h in facets]
            for i, h in enumerate(facets):
                level = f.c(i) - f.eps[i]
                if i in combo:
                    rows.append((f.mu(i), level))
                else:
                    rows.append((h.normal, -level))
            piece = Polytope.from_inequalities(n, rows)
            full = not piece.is_empty and piece.dim == n
            key = frozenset(combo)
            if full != (key in face_sets):
                raise PotentialError(
                    f"cut offsets too large: piece for facets {sorted(key)} is "
                    + ("full-dimensional" if full else "degenerate")
                )
            if full:
                pieces[key] = piece
    return pieces


# ------------------------------------------------------- leading disks

def _pattern(n: int, k: int, here: str, rest: str) -> str:
    return "".join(here if j == k else rest for j in range(n))


def _default_eta(n: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(j + 1, 2 * j + 3) for j in range(n))


@dataclass
class DiskSkeleton:
    facet: int
    mu: tuple[int, ...]
    vertex: tuple
    chart: list[tuple[int, ...]]
    local_index: int
    split: SplitType
    node_multiplicity: int
    maslov: int
    area: Fraction
    valid: bool
    rigid: bool
    relative_weight_dim: int
    cone_ok: bool

    @property
    def ok(self) -> bool:
        return self.valid and self.rigid and self.cone_ok and self.maslov == 2 and self.node_multiplicity == 1

    def to_json(self) -> dict:
        g = self.split.refined
        return {
            "facet": self.facet,
            "mu": list(self.mu),
            "corner": ea.format_vector(self.vertex),
            "chart": [list(r) for r in self.chart],
            "disk_polytope": g.vertices["v+"].polytope,
            "neck_polytope": g.vertices["v-"].polytope,
            "base_polytope": self.split.base.vertices["v-"].polytope,
            "slope": list(g.edges["e"].slope),
            "node_multiplicity": self.node_multiplicity,
            "maslov": self.maslov,
            "area": ea.format_rational(self.area),
            "valid": self.valid,
            "split_rigid": self.rigid,
            "relative_weight_dim": self.relative_weight_dim,
            "cone_condition": self.cone_ok,
            "ok": self.ok,
        }


def leading_disk_types(f: MomentFiber, eta: Optional[Sequence] = None) -> list[DiskSkeleton]:
    """One broken Maslov-two disk per facet, split at a corner of that facet.

    Near a corner ``p`` the cut pieces form the coordinate cross in the chart
    ``y_j = <μ_j, x> - (c_j - ε_j)`` over the facets through ``p``; the
    central piece is the all-negative orthant.
    """
    cut_pieces(f)
    n = f.n
    geom = cross_geometry(n)
    eta = _default_eta(n) if eta is None else tuple(ea.parse_rational(x) for x in eta)
    out = []
    verts = f.polytope.vertices
    for i, h in enumerate(f.facets):
        corner = min(v for v in verts if h.value(v) == 0)
        local = [j for j, hj in enumerate(f.facets) if hj.value(corner) == 0]
        chart = [f.mu(j) for j in local]
        if abs(ea.lattice_index(chart, n) if len(chart) == n else 0) != 1:
            raise PotentialError(f"corner {corner} of facet {i} is not smooth")
        k = local.index(i)
        slope = tuple(1 if j == k else 0 for j in range(n))
        g = _graph(
            [("v+", "-" * n, {"sort": "disk"}), ("v-", _pattern(n, k, "+", "0"))],
            [("e", "v+", "v-", slope), ("r", "v+", None, (0,) * n, BOUNDARY_LEAF)],
            root="r",
        )
        s = make_split_type(geom, g, [], ["e"], eta, targets={"v-": _pattern(n, k, "+", "-")})
        valid = validate_tropical(g, geom).ok and validate_tropical(s.base, geom).ok
        mults = edge_multiplicities(g, "e", geom)
        rig = split_rigid(s)
        if n == 1:
            # t / <T(e)> is zero: nothing to displace
            cone_ok = True
        else:
            bad = genericity_violation(s)
            if bad is not None:
                raise PotentialError("non-generic cone direction: " + bad)
            cone_ok = cone_condition(s).ok
        out.append(
            DiskSkeleton(
                facet=i,
                mu=f.mu(i),
                vertex=corner,
                chart=chart,
                local_index=k,
                split=s,
                node_multiplicity=mults[0] if len(mults) == 1 else 0,
                maslov=maslov_toric(mults),
                area=f.gaps()[i],
                valid=valid,
                rigid=rig.ok,
                relative_weight_dim=relative_weights(s).dim,
                cone_ok=cone_ok,
            )
        )
    return out


# ------------------------------------------------------- unobstructedness

@dataclass
class UnobstructedReport:
    ok: bool
    potential: Novikov
    solution: bool
    potential_matches: bool
    vacuous: bool
    associativity: bool
    strict_unit: bool
    homotopy_unit_leading: bool

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "potential": self.potential.to_json(),
            "solution": self.solution,
            "potential_matches": self.potential_matches,
            "vacuous": self.vacuous,
            "associativity": self.associativity,
            "strict_unit": self.strict_unit,
            "homotopy_unit_leading": self.homotopy_unit_leading,
        }


def verify_unobstructed(f: MomentFiber, cutoff, y: Optional[Sequence] = None) -> UnobstructedReport:
    """Check that ``W · weighted`` solves the projective Maurer–Cartan equation with potential ``W``."""
    cutoff = ea.parse_rational(cutoff)
    y = (1,) * f.n if y is None else y
    w = bg_potential(f).evaluate(y, cutoff)
    a = toric_model(w)
    res = mc_residual(a, {WEIGHTED: w} if w else {})
    matches = res.potential == w
    assoc = check_associativity(a, 3).ok
    unit = check_strict_unit(a, a.unit).ok
    hu = check_homotopy_unit_leading(a).ok
    vacuous = not w
    ok = res.is_projective_solution and matches and assoc and unit and hu
    return UnobstructedReport(ok, w, res.is_projective_solution, matches, vacuous, assoc, unit, hu)


# ---------------------------------------------------------------- models

def simplex_fiber(n: int, lam: Optional[Sequence] = None) -> MomentFiber:
    lam = lam if lam is not None else (Fraction(1, n + 1),) * n
    return MomentFiber(simplex(n), lam)


def product_fiber(lam: Optional[Sequence] = None) -> MomentFiber:
    return MomentFiber(cube(2), lam if lam is not None else (Fraction(1, 2),) * 2)


def hirzebruch_fiber(a: int = 1, lam: Optional[Sequence] = None) -> MomentFiber:
    return MomentFiber(hirzebruch(a), lam if lam is not None else (Fraction(1, 2), Fraction(1, 2)))
