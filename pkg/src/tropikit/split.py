"""Quasi-split and split tropical graphs.

A split type is a refined graph ``Γ̃`` with an edge collapse onto a base
graph ``Γ̄`` in which the matching at the split edges is dropped.  The
discrepancy ``Diff_e`` measures how far the weight difference at a split edge
is from the slope line; coordinates on ``t/<T(e)>`` are given by an integer
annihilator ``Q_e`` of the (paired) slope.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import exactalg as ea
from .polyhedral import Cone, Decomposition, cone_image
from .tropical import (
    Geometry,
    TropicalError,
    TropicalGraph,
    _System,
    _add_slope_constraints,
    _torus_kernel,
    collapse_edges,
    cone_kv,
    graph_from_json,
    slope_annihilator,
    symmetry_group,
    symmetry_matrix,
    SymmetryInfo,
)


class SplitError(ValueError):
    pass


# ---------------------------------------------------------- eligibility

def split_eligible(pid: str, d: Decomposition) -> bool:
    """Every facet of ``P`` is itself a member of the decomposition."""
    p = d[pid]
    for f in p.faces():
        if f.dim == p.dim - 1 and d.find(f.polytope()) is None:
            return False
    return True


# ------------------------------------------------------------ the type

@dataclass
class SplitType:
    geometry: Geometry
    refined: TropicalGraph
    base: TropicalGraph
    kappa: dict[str, str]
    edge_map: dict[str, Optional[str]]
    split_edges: list[str]
    order: list[str]
    eta: tuple[Fraction, ...]
    order_ties: list[tuple[str, str]] = field(default_factory=list)

    @property
    def n(self) -> int:
        return self.geometry.n

    def collapsed_edges(self) -> list[str]:
        return [e for e, b in self.edge_map.items() if b is None]

    def annihilator(self, e: str) -> list[tuple[int, ...]]:
        return slope_annihilator(self.geometry.slope_vector(self.refined.edges[e].slope))

    def projected_eta(self, e: str) -> tuple[Fraction, ...]:
        return tuple(ea.mat_vec(self.annihilator(e), self.eta))


def make_split_type(
    geom: Geometry,
    refined: TropicalGraph,
    base_collapse: Sequence[tuple[str, Optional[str]]],
    split_edges: Sequence[str],
    eta: Sequence,
    targets: Optional[Mapping[str, str]] = None,
) -> SplitType:
    """Build the base graph by collapsing every refined edge mapped to ``None``.

    Split edges may be named by refined or base id; they must survive the
    collapse and have nonzero slope.
    """
    emap = {str(a): (None if b is None else str(b)) for a, b in base_collapse}
    for e in refined.node_edges():
        emap.setdefault(e.id, e.id)
    for e in refined.edges.values():
        if not e.is_node:
            emap.setdefault(e.id, e.id)
    unknown = [e for e in emap if e not in refined.edges]
    if unknown:
        raise SplitError(f"base_collapse names unknown edges {unknown}")
    collapsed = [e for e, b in emap.items() if b is None]
    res = collapse_edges(refined, collapsed, geom, targets)
    # rename surviving edges to their base ids
    inverse = {}
    for a, b in emap.items():
        if b is not None:
            if b in inverse:
                raise SplitError(f"two refined edges map to base edge {b}")
            inverse[b] = a
    base_edges = {b: replace(res.graph.edges[a], id=b) for b, a in inverse.items()}
    base = TropicalGraph(
        res.graph.vertices,
        base_edges,
        [replace(m, edge=emap.get(m.edge, m.edge)) for m in refined.markings if emap.get(m.edge) is not None],
        None if refined.root is None else emap.get(refined.root),
    )
    splits = []
    for s in split_edges:
        s = str(s)
        a = inverse.get(s, s if s in refined.edges else None)
        if a is None or emap.get(a) is None:
            raise SplitError(f"split edge {s} is not an edge of the base graph")
        if refined.edges[a].zero_slope:
            raise SplitError(f"split edge {s} has zero slope")
        splits.append(a)
    for e in base.node_edges():
        if e.zero_slope:
            raise SplitError(f"base edge {e.id} has zero slope")
    eta = tuple(ea.parse_rational(x) for x in eta)
    if len(eta) != geom.n:
        raise SplitError(f"cone direction has length {len(eta)}, expected {geom.n}")
    order, ties = order_split_edges(refined, splits)
    return SplitType(geom, refined, base, res.kappa, emap, splits, order, eta, ties)


def split_type_from_json(obj: Mapping, geom: Geometry) -> SplitType:
    g = graph_from_json(obj["graph"], geom.n)
    bc = [(a, b) for a, b in obj.get("base_collapse", [])]
    targets = obj.get("merged_polytopes")
    return make_split_type(geom, g, bc, obj.get("split_edges", []), obj.get("cone_direction", [1] * geom.n), targets)


# ------------------------------------------------------------- ordering

def _root_vertex(g: TropicalGraph) -> str:
    rv = g.root_vertex()
    return rv if rv is not None else next(iter(g.vertices))


def _distances(g: TropicalGraph, src: str) -> dict[str, int]:
    dist = {src: 0}
    frontier = [src]
    while frontier:
        nxt = []
        for x in frontier:
            for _, y in g.neighbours(x):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def order_split_edges(g: TropicalGraph, split_edges: Sequence[str]) -> tuple[list[str], list[tuple[str, str]]]:
    """Order split edges by the least marking beyond them, then proximity.

    For each split edge take the subtree on the side away from the root and
    its least numbered marking ``m``.  Smaller ``m`` comes first; for equal
    ``m`` the edge whose far endpoint is closer to the marking comes first.
    Remaining ties fall back to edge id and are returned.
    """
    root = _root_vertex(g)
    mark_vertex = {m.number: g.edges[m.edge].plus for m in g.markings if m.edge in g.edges}
    keys = {}
    for s in split_edges:
        e = g.edges[s]
        comps = g.components(drop=[s])
        far_side = next(c for c in comps if root not in c)
        far = e.plus if e.plus in far_side else e.minus
        marks = sorted(k for k, v in mark_vertex.items() if v in far_side)
        if marks:
            m = marks[0]
            dist = _distances(g, mark_vertex[m])[far]
            keys[s] = (0, m, dist)
        else:
            keys[s] = (1, 0, 0)
    order = sorted(split_edges, key=lambda s: (keys[s], s))
    ties = [
        (a, b) for i, a in enumerate(order) for b in order[i + 1:] if keys[a] == keys[b]
    ]
    return order, ties


# -------------------------------------------------------- weight spaces

def _vertex_order(s: SplitType) -> list[str]:
    return list(s.refined.vertices)


def relative_weight_system(s: SplitType) -> tuple[_System, list[str]]:
    """Inequalities for relative weights ``x_v in Cone(κ, v)`` of a split type."""
    g = s.refined
    geom = s.geometry
    n = s.n
    order = _vertex_order(s)
    idx = {v: i for i, v in enumerate(order)}
    total = n * len(order)
    sys_ = _System(total)
    for v in order:
        c = cone_kv(geom, g.vertices[v].polytope, s.base.vertices[s.kappa[v]].polytope)
        ineq, eq = c.raw_h()
        o = idx[v] * n
        for a in ineq:
            row = [Fraction(0)] * total
            row[o:o + n] = [Fraction(x) for x in a]
            sys_.add(row, 0)
        for b in eq:
            row = [Fraction(0)] * total
            row[o:o + n] = [Fraction(x) for x in b]
            sys_.add(row, 0, equality=True)
    splits = set(s.split_edges)
    for e in g.node_edges():
        if e.id in splits:
            continue
        mode = "zero" if e.zero_slope else ("ray" if s.edge_map[e.id] is None else "line")
        da = [[Fraction(0)] * total for _ in range(n)]
        for i in range(n):
            da[i][idx[e.plus] * n + i] += 1
            da[i][idx[e.minus] * n + i] -= 1
        _add_slope_constraints(sys_, da, (Fraction(0),) * n, geom.slope_vector(e.slope), mode)
    return sys_, order


def relative_weights(s: SplitType) -> Cone:
    sys_, _ = relative_weight_system(s)
    return sys_.cone()


def diff_matrix(s: SplitType, order: Optional[Sequence[str]] = None) -> list[list[Fraction]]:
    """Matrix of ``Diff`` from stacked vertex weights to ``⊕_e t/<T(e)>``.

    Blocks follow the split-edge order.
    """
    g = s.refined
    n = s.n
    verts = _vertex_order(s)
    idx = {v: i for i, v in enumerate(verts)}
    rows = []
    for eid in (order if order is not None else s.order):
        e = g.edges[eid]
        for q in s.annihilator(eid):
            row = [Fraction(0)] * (n * len(verts))
            for i in range(n):
                row[idx[e.plus] * n + i] += q[i]
                row[idx[e.minus] * n + i] -= q[i]
            rows.append(row)
    return rows


def unsigned_relative_weights(s: SplitType) -> ea.RationalSubspace:
    """The vector space of unsigned relative weights as a rational subspace."""
    g = s.refined
    geom = s.geometry
    n = s.n
    verts = _vertex_order(s)
    total = n * len(verts)
    rows = []
    for i, v in enumerate(verts):
        for t in geom.decomposition[g.vertices[v].polytope].direction_space():
            row = [Fraction(0)] * total
            row[i * n:(i + 1) * n] = list(t)
            rows.append(row)
    splits = set(s.split_edges)
    for e in g.node_edges():
        if e.id in splits:
            continue
        a, b = verts.index(e.plus), verts.index(e.minus)
        qs = ea.identity(n) if e.zero_slope else slope_annihilator(geom.slope_vector(e.slope))
        for q in qs:
            row = [Fraction(0)] * total
            for i in range(n):
                row[a * n + i] += q[i]
                row[b * n + i] -= q[i]
            rows.append(row)
    basis = ea.nullspace(rows, total) if rows else [tuple(Fraction(int(i == j)) for j in range(total)) for i in range(total)]
    return ea.RationalSubspace.span(basis, total)


def forbidden_subspaces(s: SplitType) -> dict[str, list[ea.RationalSubspace]]:
    """Per split edge, the subspaces ``π⊥ η₀`` must avoid.

    These are ``Diff_e(W±_e)`` when proper, and always the zero subspace.
    """
    w = unsigned_relative_weights(s)
    n = s.n
    out = {}
    diff_blocks = {e: diff_matrix(s, [e]) for e in s.split_edges}
    for e in s.split_edges:
        others = [r for f in s.split_edges if f != e for r in diff_blocks[f]]
        basis = list(w.basis)
        if others and basis:
            # coefficients c with (others) · (basis^T c) = 0
            m = [[sum(r[k] * b[k] for k in range(len(r))) for b in basis] for r in others]
            coeffs = ea.nullspace(m, len(basis))
            vecs = [tuple(sum(c[j] * basis[j][k] for j in range(len(basis))) for k in range(w.ambient)) for c in coeffs]
        else:
            vecs = basis
        img = [ea.mat_vec(diff_blocks[e], v) for v in vecs]
        sub = ea.RationalSubspace.span(img, n - 1)
        subs = [ea.RationalSubspace.span([], n - 1)]
        if sub.is_proper and sub.dim > 0:
            subs.append(sub)
        out[e] = subs
    return out


def genericity_violation(s: SplitType) -> Optional[str]:
    for e, subs in forbidden_subspaces(s).items():
        v = s.projected_eta(e)
        for sub in subs:
            if sub.contains(v):
                if sub.dim == 0:
                    return f"projection of the cone direction to t/<T({e})> vanishes"
                return f"projection of the cone direction at {e} lies in the proper subspace spanned by " + str(
                    [ea.format_vector(b) for b in sub.basis]
                )
    return None


# ------------------------------------------------------ discrepancy cone

@dataclass
class DiscrepancyCone:
    cone: Cone
    blocks: list[tuple[str, int]]
    target_dim: int

    @property
    def dim(self) -> int:
        return self.cone.dim

    @property
    def top_dimensional(self) -> bool:
        return self.dim == self.target_dim

    def to_json(self) -> dict:
        return {
            "order": [b for b, _ in self.blocks],
            "dim": self.dim,
            "expected_dim": self.target_dim,
            "inequalities": [list(a) for a in self.cone.inequalities],
            "equalities": [list(b) for b in self.cone.equalities],
        }


def discrepancy_cone(s: SplitType, method: str = "fm") -> DiscrepancyCone:
    """``Diff`` applied to the relative weight cone, as an exact H-rep."""
    w = relative_weights(s)
    m = diff_matrix(s)
    blocks = [(e, s.n - 1) for e in s.order]
    k = len(m)
    if k == 0:
        return DiscrepancyCone(Cone.zero(0), blocks, 0)
    return DiscrepancyCone(cone_image(w, m, method=method), blocks, len(s.order) * (s.n - 1))


# -------------------------------------------------------- cone condition

@dataclass
class ConeConditionResult:
    ok: bool
    reason: str
    witness: Optional[list[Fraction]] = None
    obstruction: Optional[list[Fraction]] = None
    base: Optional[Fraction] = None

    def to_json(self) -> dict:
        out = {"ok": self.ok, "reason": self.reason}
        if self.witness is not None:
            out["witness"] = [ea.format_rational(x) for x in self.witness]
            out["base"] = ea.format_rational(self.base)
        if self.obstruction is not None:
            out["obstruction"] = [ea.format_rational(x) for x in self.obstruction]
        return out


def pullback_functionals(s: SplitType, dc: DiscrepancyCone):
    """Linear functionals on ``(c_e)`` cutting out the preimage set ``W_R``."""
    etas = [s.projected_eta(e) for e in s.order]

    def pull(a):
        out, o = [], 0
        for (e, k), pe in zip(dc.blocks, etas):
            out.append(sum((Fraction(a[o + j]) * pe[j] for j in range(k)), Fraction(0)))
            o += k
        return out

    ineq, eq = dc.cone.raw_h()
    return [pull(a) for a in ineq], [pull(b) for b in eq]


def cone_condition(s: SplitType, dc: Optional[DiscrepancyCone] = None) -> ConeConditionResult:
    """Lexicographic leading-sign test for increasing tuples.

    With ``c_{e_i} = t^(k-i+1)`` each functional is a polynomial in ``t``
    whose coefficients are read in split-edge order; equalities must vanish
    and inequalities need a positive leading coefficient.
    """
    bad = genericity_violation(s)
    if bad is not None:
        raise SplitError("non-generic cone direction: " + bad)
    if not s.order:
        return ConeConditionResult(True, "no split edges", [], None, Fraction(2))
    dc = dc or discrepancy_cone(s)
    ineq, eq = pullback_functionals(s, dc)
    for f in eq:
        if any(x != 0 for x in f):
            return ConeConditionResult(False, "equality constraint does not vanish", obstruction=f)
    base = Fraction(2)
    for f in ineq:
        lead = next((x for x in f if x != 0), None)
        if lead is None:
            continue
        if lead < 0:
            return ConeConditionResult(False, "leading coefficient negative", obstruction=f)
        bound = 1 + sum(abs(x) for x in f) / abs(lead)
        base = max(base, bound + 1)
    base = Fraction(int(base) + 1)
    k = len(s.order)
    witness = [base ** (k - i) for i in range(k)]
    point = _tuple_point(s, witness)
    if not dc.cone.contains(point):
        raise SplitError("internal: witness tuple not in the discrepancy cone")
    return ConeConditionResult(True, "all leading coefficients positive", witness, None, base)


def _tuple_point(s: SplitType, c: Sequence) -> list[Fraction]:
    out = []
    for e, ce in zip(s.order, c):
        out.extend(Fraction(ce) * x for x in s.projected_eta(e))
    return out


def strong_cone_samples(s: SplitType, count: int = 100, seed: int = 0, dc: Optional[DiscrepancyCone] = None):
    """Membership of random increasing tuples with ratios between 1e3 and 1e6.

    Returns the list of failing tuples.
    """
    dc = dc or discrepancy_cone(s)
    rng = random.Random(seed)
    fails = []
    k = len(s.order)
    for _ in range(count):
        c = [Fraction(rng.randint(1, 1000))]
        for _ in range(k - 1):
            c.append(c[-1] / rng.choice((1000, 10 ** rng.randint(3, 6), 10 ** 6)))
        c = [x * rng.randint(1, 50) / rng.randint(1, 50) if i == 0 else x for i, x in enumerate(c)]
        if not dc.cone.contains(_tuple_point(s, c)):
            fails.append(c)
    return fails


# --------------------------------------------------------------- rigidity

@dataclass
class RigidityReport:
    ok: bool
    base_rigid: bool
    tangencies_one: bool
    weight_dim: int
    target_dim: int

    def to_json(self) -> dict:
        return {
            "rigid": self.ok,
            "base_rigid": self.base_rigid,
            "tangencies_one": self.tangencies_one,
            "relative_weight_dim": self.weight_dim,
            "expected_dim": self.target_dim,
        }


def split_rigid(s: SplitType) -> RigidityReport:
    base_rigid = symmetry_group(s.base, s.geometry).dim_identity_component == 0
    tang = all(m.tangency == 1 for m in s.refined.markings)
    wdim = relative_weights(s).dim
    target = len(s.split_edges) * (s.n - 1)
    return RigidityReport(base_rigid and tang and wdim == target, base_rigid, tang, wdim, target)


# --------------------------------------------------------------- symmetry

def framed_multiplicity(s: SplitType):
    """Order of the framed symmetry group (matching imposed on every edge)."""
    rows, ncols, _ = symmetry_matrix(s.refined, s.geometry)
    dim, count = _torus_kernel(rows, ncols)
    return ea.INFINITE if dim > 0 else count


def symmetry_splitting(s: SplitType) -> list[tuple[list[str], SymmetryInfo]]:
    """Symmetry data of each component of ``Γ̃`` minus the split edges."""
    out = []
    for comp in s.refined.components(drop=s.split_edges):
        sub = s.refined.subgraph(comp)
        sub.edges = {k: e for k, e in sub.edges.items() if k not in s.split_edges}
        out.append((comp, symmetry_group(sub, s.geometry)))
    return out


def split_symmetry_dim(s: SplitType) -> int:
    """Dimension of the symmetry group with split-edge matching dropped."""
    rows, ncols, _ = symmetry_matrix(s.refined, s.geometry, primitive=True, drop=s.split_edges)
    return _torus_kernel(rows, ncols)[0]


@dataclass
class ExactSequenceReport:
    ok: bool
    framed_order: object
    z_fr: int
    kernel_ev: object

    def to_json(self) -> dict:
        return {
            "consistent": self.ok,
            "framed_order": self.framed_order,
            "z_fr": self.z_fr,
            "kernel_of_evaluation": self.kernel_ev,
        }


def exact_sequence_check(s: SplitType) -> ExactSequenceReport:
    """Check ``|T_fr| = |Z_fr| · |ker ev|`` by two independent SNF computations.

    ``Z_fr`` is the product of the divisibilities of the split slopes; the
    kernel of the evaluation map replaces each split slope by its primitive
    part, so the split edge only requires ``g+ g-^{-1}`` to lie on the
    one-parameter subgroup of the slope.
    """
    framed = framed_multiplicity(s)
    zfr = 1
    for e in s.split_edges:
        zfr *= ea.primitive_part(s.refined.edges[e].slope)[1]
    rows, ncols, zedges = symmetry_matrix(s.refined, s.geometry)
    total = ncols - len(zedges)
    n = s.n
    edges = [e for e in s.refined.node_edges()]
    # rebuild the split rows with primitive slopes
    r = 0
    new_rows = []
    for e in edges:
        block = rows[r:r + n]
        r += n
        if e.id in s.split_edges:
            prim = ea.primitive_part(e.slope)[0]
            col = total + zedges.index(e.id)
            block = [list(row) for row in block]
            for i in range(n):
                block[i][col] = -prim[i]
        new_rows.extend(block)
    dim, kev = _torus_kernel(new_rows, ncols)
    kev = ea.INFINITE if dim > 0 else kev
    ok = framed != ea.INFINITE and kev != ea.INFINITE and framed == zfr * kev
    return ExactSequenceReport(ok, framed, zfr, kev)


def split_report(s: SplitType) -> dict:
    dc = discrepancy_cone(s)
    cc = cone_condition(s, dc)
    rig = split_rigid(s)
    out = {
        "order": list(s.order),
        "order_ties": [list(t) for t in s.order_ties],
        "discrepancy": dc.to_json(),
        "cone_condition": cc.to_json(),
        "rigidity": rig.to_json(),
        "components": [
            {"vertices": comp, **info.to_json()} for comp, info in symmetry_splitting(s)
        ],
    }
    if rig.ok:
        out["framed_multiplicity"] = framed_multiplicity(s)
        out["exact_sequence"] = exact_sequence_check(s).to_json()
    return out
