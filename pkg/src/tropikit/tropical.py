"""Tropical graphs: slope condition, weights, symmetry groups, collapses.

A vertex ``v`` carries a member ``P(v)`` of the decomposition; its tropical
weight lives in the cell of ``P(v)`` in the dual complex.  For an oriented
edge ``e = (v+, v-)`` the slope condition reads
``T(v+) - T(v-) in R>=0 . G T(e)`` where ``G`` is the fixed pairing.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from . import exactalg as ea
from .lp import OPTIMAL, solve_lp
from .polyhedral import (
    Cone,
    Decomposition,
    GluingDatum,
    Halfspace,
    Polytope,
    PolyhedralError,
    build_dual_complex,
    tangent_cone,
    validate_gluing,
)

Vec = tuple[Fraction, ...]

INTERIOR_NODE = "interior-node"
BOUNDARY_NODE = "boundary-node"
INTERIOR_LEAF = "interior-leaf"
BOUNDARY_LEAF = "boundary-leaf"
EDGE_CLASSES = (INTERIOR_NODE, BOUNDARY_NODE, INTERIOR_LEAF, BOUNDARY_LEAF)


class TropicalError(ValueError):
    pass


# ------------------------------------------------------------ geometry

class Geometry:
    """A decomposition with a validated gluing datum and its dual complex."""

    def __init__(self, decomposition: Decomposition, gluing: GluingDatum, check: bool = True):
        self.decomposition = decomposition
        self.gluing = gluing
        self.n = decomposition.dim
        self.complex = build_dual_complex(gluing, decomposition, check=check)
        self._cellpoly: dict[str, Polytope] = {}
        self._basis: dict[str, list] = {}

    @property
    def pairing(self):
        return self.gluing.pairing

    def basis(self, pid: str) -> list[tuple[int, ...]]:
        if pid not in self._basis:
            self._basis[pid] = self.decomposition.tangent_basis(pid)
        return self._basis[pid]

    def cell(self, pid: str):
        return self.complex.cells[pid]

    def cell_polytope(self, pid: str) -> Polytope:
        """The cell of ``pid`` as a polytope in Q^n."""
        if pid not in self._cellpoly:
            self._cellpoly[pid] = Polytope.from_vertices(self.n, self.cell(pid).vertices)
        return self._cellpoly[pid]

    def slope_vector(self, slope: Sequence[int]) -> Vec:
        """``G T(e)`` as a vector in t^dual."""
        return tuple(Fraction(x) for x in ea.mat_vec(self.pairing, slope))


# --------------------------------------------------------------- graphs

@dataclass(frozen=True)
class Vertex:
    id: str
    polytope: str
    sort: str = "sphere"
    chern: Optional[tuple[int, ...]] = None
    constant: bool = False


@dataclass(frozen=True)
class Edge:
    id: str
    plus: str
    minus: Optional[str]
    kind: str = INTERIOR_NODE
    slope: tuple[int, ...] = ()
    length: Optional[str] = None

    @property
    def is_node(self) -> bool:
        return self.minus is not None

    @property
    def is_interior(self) -> bool:
        return self.kind in (INTERIOR_NODE, INTERIOR_LEAF)

    @property
    def zero_slope(self) -> bool:
        return all(x == 0 for x in self.slope)

    def ends(self) -> tuple[str, ...]:
        return (self.plus,) if self.minus is None else (self.plus, self.minus)


@dataclass(frozen=True)
class Marking:
    edge: str
    tangency: int = 1
    number: int = 0


@dataclass
class TropicalGraph:
    vertices: dict[str, Vertex]
    edges: dict[str, Edge]
    markings: list[Marking] = field(default_factory=list)
    root: Optional[str] = None

    def node_edges(self) -> list[Edge]:
        return [e for e in self.edges.values() if e.is_node]

    def interior_nodes(self) -> list[Edge]:
        return [e for e in self.edges.values() if e.is_node and e.kind == INTERIOR_NODE]

    def incident(self, v: str) -> list[Edge]:
        return [e for e in self.edges.values() if v in e.ends()]

    def neighbours(self, v: str) -> list[tuple[Edge, str]]:
        out = []
        for e in self.node_edges():
            if e.plus == v:
                out.append((e, e.minus))
            elif e.minus == v:
                out.append((e, e.plus))
        return out

    def root_vertex(self) -> Optional[str]:
        if self.root is not None and self.root in self.edges:
            return self.edges[self.root].plus
        return None

    def tangency(self, edge_id: str) -> int:
        for m in self.markings:
            if m.edge == edge_id:
                return m.tangency
        return 1

    def components(self, drop: Iterable[str] = ()) -> list[list[str]]:
        """Vertex sets of connected components after removing edges ``drop``."""
        drop = set(drop)
        seen: set[str] = set()
        comps = []
        for v in self.vertices:
            if v in seen:
                continue
            comp, stack = [], [v]
            seen.add(v)
            while stack:
                x = stack.pop()
                comp.append(x)
                for e, y in self.neighbours(x):
                    if e.id not in drop and y not in seen:
                        seen.add(y)
                        stack.append(y)
            comps.append(sorted(comp, key=list(self.vertices).index))
        return comps

    def subgraph(self, verts: Iterable[str]) -> "TropicalGraph":
        vs = set(verts)
        return TropicalGraph(
            {k: v for k, v in self.vertices.items() if k in vs},
            {k: e for k, e in self.edges.items() if set(e.ends()) <= vs},
            [m for m in self.markings if m.edge in self.edges and self.edges[m.edge].plus in vs],
            self.root if self.root in self.edges and self.edges[self.root].plus in vs else None,
        )

    def to_json(self) -> dict:
        return {
            "vertices": [
                {
                    "id": v.id,
                    "polytope": v.polytope,
                    "sort": v.sort,
                    "chern": None if v.chern is None else list(v.chern),
                    "constant": v.constant,
                }
                for v in self.vertices.values()
            ],
            "edges": [
                {
                    "id": e.id,
                    "ends": [e.plus, e.minus],
                    "class": e.kind,
                    "slope": list(e.slope),
                    "length": e.length,
                }
                for e in self.edges.values()
            ],
            "markings": [{"edge": m.edge, "tangency": m.tangency, "number": m.number} for m in self.markings],
            "root": self.root,
        }


def graph_from_json(obj: Mapping, n: int) -> TropicalGraph:
    verts = {}
    for v in obj["vertices"]:
        ch = v.get("chern")
        verts[str(v["id"])] = Vertex(
            str(v["id"]),
            str(v["polytope"]),
            v.get("sort", "sphere"),
            None if ch is None else tuple(int(x) for x in ch),
            bool(v.get("constant", False)),
        )
    edges = {}
    for e in obj.get("edges", []):
        ends = e["ends"]
        slope = tuple(int(x) for x in e.get("slope", [0] * n))
        edges[str(e["id"])] = Edge(
            str(e["id"]),
            str(ends[0]),
            None if len(ends) < 2 or ends[1] is None else str(ends[1]),
            e.get("class", INTERIOR_NODE),
            slope,
            e.get("length"),
        )
    marks = [
        Marking(str(m["edge"]), int(m.get("tangency", 1)), int(m.get("number", i + 1)))
        for i, m in enumerate(obj.get("markings", []))
    ]
    root = obj.get("root")
    return TropicalGraph(verts, edges, marks, None if root is None else str(root))


# ------------------------------------------------------- linear systems

class _System:
    """Affine constraints ``a.x >= b`` and ``a.x = b`` on concatenated blocks."""

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.ineq: list[tuple[list[Fraction], Fraction]] = []
        self.eq: list[tuple[list[Fraction], Fraction]] = []
        self.contradiction = False

    def add(self, coeffs, rhs, equality=False):
        coeffs = [Fraction(c) for c in coeffs]
        rhs = Fraction(rhs)
        if all(c == 0 for c in coeffs):
            if (equality and rhs != 0) or (not equality and rhs > 0):
                self.contradiction = True
            return
        (self.eq if equality else self.ineq).append((coeffs, rhs))

    def feasible_point(self) -> Optional[Vec]:
        if self.contradiction:
            return None
        res = solve_lp(
            [0] * self.nvars,
            [[-c for c in a] for a, _ in self.ineq],
            [-b for _, b in self.ineq],
            [a for a, _ in self.eq],
            [b for _, b in self.eq],
            nvars=self.nvars,
        )
        return res.x if res.status == OPTIMAL else None

    def polytope(self) -> Optional[Polytope]:
        if self.contradiction:
            return None
        hs = [Halfspace.make(a, b) for a, b in self.ineq]
        for a, b in self.eq:
            hs.append(Halfspace.make(a, b))
            hs.append(Halfspace.make([-x for x in a], -b))
        return Polytope(self.nvars, hs)

    def cone(self) -> Cone:
        if any(b != 0 for _, b in self.ineq + self.eq):
            raise TropicalError("inhomogeneous system cannot define a cone")
        return Cone.from_h(self.nvars, [a for a, _ in self.ineq], [a for a, _ in self.eq])


def slope_annihilator(u: Sequence) -> list[tuple[int, ...]]:
    """Rows ``Q`` with kernel exactly the line through ``u``."""
    return ea.annihilator_basis([list(u)], len(u))


# -------------------------------------------------------------- weights

@dataclass
class WeightCone:
    """The polyhedral set of tropical weights in annihilator coordinates."""

    graph: TropicalGraph
    geometry: Geometry
    order: list[str]
    offsets: dict[str, int]
    nvars: int
    system: _System

    @property
    def polytope(self) -> Optional[Polytope]:
        return self.system.polytope()

    @property
    def is_empty(self) -> bool:
        return self.system.feasible_point() is None

    @property
    def dim(self) -> int:
        p = self.polytope
        if p is None or p.is_empty:
            return -1
        return p.dim

    def weights(self, y: Sequence) -> dict[str, Vec]:
        out = {}
        for v in self.order:
            pid = self.graph.vertices[v].polytope
            k = len(self.geometry.basis(pid))
            o = self.offsets[v]
            cell = self.geometry.cell(pid)
            ys = tuple(y[o:o + k])
            if k:
                pt = tuple(a + b for a, b in zip(cell.anchor, ea.mat_vec(cell.embedding, ys)))
            else:
                pt = tuple(cell.anchor)
            out[v] = pt
        return out

    def relint_weights(self) -> dict[str, Vec]:
        p = self.polytope
        if p is None or p.is_empty:
            raise TropicalError("no tropical weight exists")
        return self.weights(p.relint_point())

    def difference_span_dim(self) -> int:
        """Dimension of the linear span of differences of weights."""
        return self.dim

    def to_json(self) -> dict:
        empty = self.is_empty
        out = {"dim": self.dim, "empty": empty, "variables": self.nvars}
        if not empty:
            out["relint_weights"] = {v: ea.format_vector(w) for v, w in self.relint_weights().items()}
        return out


def _vertex_blocks(g: TropicalGraph, geom: Geometry):
    order = list(g.vertices)
    offsets, total = {}, 0
    for v in order:
        offsets[v] = total
        total += len(geom.basis(g.vertices[v].polytope))
    return order, offsets, total


def _affine_weight(geom: Geometry, pid: str, offset: int, nvars: int):
    """``(A, a0)`` with ``T(v) = A y + a0`` (A is n × nvars)."""
    cell = geom.cell(pid)
    n = geom.n
    k = len(geom.basis(pid))
    a = [[Fraction(0)] * nvars for _ in range(n)]
    for i in range(n):
        for j in range(k):
            a[i][offset + j] = cell.embedding[i][j]
    return a, tuple(cell.anchor)


def _add_slope_constraints(sys_: _System, diff_a, diff_b, u, mode: str):
    """Constrain ``diff = diff_a y + diff_b`` to ``R>=0 u`` / ``R u`` / ``0``."""
    n = len(diff_b)
    if mode == "zero" or all(x == 0 for x in u):
        for i in range(n):
            sys_.add(diff_a[i], -diff_b[i], equality=True)
        return
    for q in slope_annihilator(u):
        row = [sum((Fraction(q[i]) * diff_a[i][j] for i in range(n)), Fraction(0)) for j in range(sys_.nvars)]
        const = sum((Fraction(q[i]) * diff_b[i] for i in range(n)), Fraction(0))
        sys_.add(row, -const, equality=True)
    if mode == "ray":
        row = [sum((Fraction(u[i]) * diff_a[i][j] for i in range(n)), Fraction(0)) for j in range(sys_.nvars)]
        const = sum((Fraction(u[i]) * diff_b[i] for i in range(n)), Fraction(0))
        sys_.add(row, -const)


def weight_cone(g: TropicalGraph, geom: Geometry, skip_edges: Iterable[str] = ()) -> WeightCone:
    """Exact description of the set of tropical weights of ``g``."""
    skip = set(skip_edges)
    order, offsets, total = _vertex_blocks(g, geom)
    sys_ = _System(total)
    for v in order:
        pid = g.vertices[v].polytope
        dual = geom.gluing.duals[pid].polytope
        o = offsets[v]
        for h in dual.halfspaces:
            row = [Fraction(0)] * total
            for j, c in enumerate(h.normal):
                row[o + j] = Fraction(c)
            sys_.add(row, h.constant)
    for e in g.node_edges():
        if e.id in skip:
            continue
        ap, bp = _affine_weight(geom, g.vertices[e.plus].polytope, offsets[e.plus], total)
        am, bm = _affine_weight(geom, g.vertices[e.minus].polytope, offsets[e.minus], total)
        da = [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ap, am)]
        db = tuple(x - y for x, y in zip(bp, bm))
        u = geom.slope_vector(e.slope) if e.slope else (0,) * geom.n
        _add_slope_constraints(sys_, da, db, u, "zero" if e.zero_slope else "ray")
    return WeightCone(g, geom, order, offsets, total, sys_)


# ----------------------------------------------------------- validation

@dataclass
class Report:
    ok: bool
    issues: list[str]
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"ok": self.ok, "issues": list(self.issues), **self.data}


def _is_tree(g: TropicalGraph) -> Optional[str]:
    nodes = g.node_edges()
    if len(g.vertices) == 0:
        return "graph has no vertices"
    for e in g.edges.values():
        for x in e.ends():
            if x not in g.vertices:
                return f"edge {e.id} references unknown vertex {x}"
    if len(nodes) != len(g.vertices) - 1:
        return "graph is not a tree (edge count)"
    if len(g.components()) != 1:
        return "graph is not connected"
    return None


def validate_tropical(g: TropicalGraph, geom: Geometry) -> Report:
    issues: list[str] = []
    d = geom.decomposition
    n = geom.n
    msg = _is_tree(g)
    if msg:
        return Report(False, [msg])
    for v in g.vertices.values():
        if v.polytope not in d.polytopes:
            issues.append(f"vertex {v.id}: unknown polytope {v.polytope}")
        if v.sort not in ("disk", "sphere"):
            issues.append(f"vertex {v.id}: sort must be disk or sphere")
    for e in g.edges.values():
        if e.kind not in EDGE_CLASSES:
            issues.append(f"edge {e.id}: unknown class {e.kind}")
        if len(e.slope) != n:
            issues.append(f"edge {e.id}: slope has length {len(e.slope)}, expected {n}")
        if e.kind in (INTERIOR_NODE, BOUNDARY_NODE) and not e.is_node:
            issues.append(f"edge {e.id}: node edge needs two endpoints")
        if e.kind in (INTERIOR_LEAF, BOUNDARY_LEAF) and e.is_node:
            issues.append(f"edge {e.id}: leaf has two endpoints")
    if issues:
        return Report(False, issues)
    # boundary structure
    for e in g.edges.values():
        if e.kind in (BOUNDARY_NODE, BOUNDARY_LEAF):
            if not e.zero_slope:
                issues.append(f"edge {e.id}: boundary edge with nonzero slope")
            for x in e.ends():
                if g.vertices[x].sort != "disk":
                    issues.append(f"edge {e.id}: boundary edge at sphere vertex {x}")
        if e.kind == BOUNDARY_NODE and e.length not in (None, "zero", "finite", "infinite"):
            issues.append(f"edge {e.id}: invalid length class {e.length}")
    disks = [v for v in g.vertices if g.vertices[v].sort == "disk"]
    if disks:
        if g.root is None or g.root not in g.edges:
            issues.append("graph with disk vertices needs a root leaf")
        else:
            rv = g.root_vertex()
            if g.vertices[rv].sort != "disk":
                issues.append("root leaf is not attached to a disk vertex")
        sub = g.subgraph(disks)
        if len(sub.components()) > 1:
            issues.append("disk vertices do not form a connected subtree")
    # slope condition
    for e in g.node_edges():
        pp, pm = g.vertices[e.plus].polytope, g.vertices[e.minus].polytope
        if e.zero_slope:
            if pp != pm:
                issues.append(f"edge {e.id}: zero slope joins different polytopes {pp} and {pm}")
            continue
        inter = d.intersection_member(pp, pm)
        if inter is None:
            issues.append(f"edge {e.id}: P(v+) ∩ P(v-) is not a member")
            continue
        if not (d.geometric_face(inter, pp) and d.geometric_face(inter, pm)):
            issues.append(f"edge {e.id}: P(e) is not a face of both endpoints")
            continue
        ts = d[inter].direction_space()
        if any(sum(Fraction(a) * b for a, b in zip(e.slope, t)) != 0 for t in ts):
            issues.append(f"edge {e.id}: slope {list(e.slope)} not in t_P(e) for P(e)={inter}")
    for m in g.markings:
        if m.edge not in g.edges:
            issues.append(f"marking on unknown edge {m.edge}")
        elif m.tangency < 1:
            issues.append(f"marking on {m.edge}: tangency must be positive")
    if issues:
        return Report(False, issues)
    wc = weight_cone(g, geom)
    pt = wc.system.feasible_point()
    if pt is None:
        issues.append("no tropical weight satisfies the slope conditions")
        return Report(False, issues)
    return Report(True, [], {"weight": {v: ea.format_vector(w) for v, w in wc.weights(pt).items()}})


# ------------------------------------------------------------- symmetry

@dataclass
class SymmetryInfo:
    dim_identity_component: int
    component_count: object
    framing_orders: dict[str, int]
    framed_order: object
    framed_components: object

    @property
    def consistent(self) -> bool:
        """Order check ``|framed| = |T| * prod n_e``; only meaningful for finite groups."""
        if self.dim_identity_component:
            return True
        prod = 1
        for v in self.framing_orders.values():
            prod *= v
        return self.framed_components == self.component_count * prod

    def to_json(self) -> dict:
        return {
            "dim_identity_component": self.dim_identity_component,
            "component_count": self.component_count,
            "framing_orders": dict(sorted(self.framing_orders.items())),
            "framed_order": self.framed_order,
            "framed_components": self.framed_components,
            "consistent": self.consistent,
        }


def _torus_kernel(rows: list[list[int]], ncols: int) -> tuple[int, int]:
    """(dimension, number of components) of the kernel of the torus map."""
    if ncols == 0:
        return 0, 1
    if not rows:
        return ncols, 1
    diag = [x for x in ea.smith_diagonal(rows, ncols) if x != 0]
    count = 1
    for x in diag:
        count *= x
    return ncols - len(diag), count


def symmetry_matrix(
    g: TropicalGraph,
    geom: Geometry,
    primitive: bool = False,
    drop: Iterable[str] = (),
    framed: Optional[Iterable[str]] = None,
):
    """Integer matrix of the character equations ``g+ g-^{-1} = z^T(e)``.

    Columns are the cocharacter coordinates of every vertex followed by one
    ``z_e`` per framed edge.  Edges in ``drop`` impose nothing.
    """
    drop = set(drop)
    order, offsets, total = _vertex_blocks(g, geom)
    edges = [e for e in g.node_edges() if e.id not in drop]
    zedges = [e.id for e in edges if not e.zero_slope] if framed is None else [x for x in framed if x not in drop]
    ncols = total + len(zedges)
    rows = []
    n = geom.n
    for e in edges:
        bp = geom.basis(g.vertices[e.plus].polytope)
        bm = geom.basis(g.vertices[e.minus].polytope)
        slope = list(e.slope)
        if primitive and not e.zero_slope:
            slope = list(ea.primitive_part(slope)[0])
        for i in range(n):
            row = [0] * ncols
            for j, b in enumerate(bp):
                row[offsets[e.plus] + j] += b[i]
            for j, b in enumerate(bm):
                row[offsets[e.minus] + j] -= b[i]
            if e.id in zedges:
                row[total + zedges.index(e.id)] = -slope[i]
            rows.append(row)
    return rows, ncols, zedges


def symmetry_group(g: TropicalGraph, geom: Geometry) -> SymmetryInfo:
    """Dimension and component data of the tropical symmetry group."""
    rows, ncols, zedges = symmetry_matrix(g, geom, primitive=True)
    dim, comps = _torus_kernel(rows, ncols)
    rows_f, ncols_f, _ = symmetry_matrix(g, geom, primitive=False)
    dim_f, comps_f = _torus_kernel(rows_f, ncols_f)
    orders = {e: ea.primitive_part(g.edges[e].slope)[1] for e in zedges}
    return SymmetryInfo(dim, comps, orders, comps_f if dim_f == 0 else ea.INFINITE, comps_f)


def is_rigid(g: TropicalGraph, geom: Geometry) -> bool:
    return symmetry_group(g, geom).dim_identity_component == 0


def outgoing_slope(e: Edge, v: str) -> tuple[int, ...]:
    """Slope of ``e`` oriented away from ``v``."""
    if e.minus == v or (not e.is_node and e.plus == v):
        return tuple(e.slope)
    return tuple(-x for x in e.slope)


def check_balancing(g: TropicalGraph, v: str, geom: Geometry) -> Report:
    """Compare the projected sum of outgoing slopes with the Chern vector."""
    if v not in g.vertices:
        raise TropicalError(f"unknown vertex {v}")
    vert = g.vertices[v]
    b = geom.basis(vert.polytope)
    total = [0] * geom.n
    for e in g.incident(v):
        for i, x in enumerate(outgoing_slope(e, v)):
            total[i] += x
    proj = tuple(ea.mat_vec(b, total)) if b else ()
    if vert.chern is None:
        if not vert.constant:
            raise TropicalError(f"vertex {v} has no Chern data and is not marked constant")
        chern = tuple(0 for _ in b)
    else:
        chern = tuple(vert.chern)
        if len(chern) != len(b):
            raise TropicalError(f"vertex {v}: Chern vector has length {len(chern)}, expected {len(b)}")
    ok = proj == chern
    return Report(ok, [] if ok else [f"vertex {v}: projected slope sum {list(proj)} != chern {list(chern)}"],
                  {"projected_sum": list(proj), "chern": list(chern)})


# ------------------------------------------------------------- collapse

@dataclass
class CollapseResult:
    graph: TropicalGraph
    kappa: dict[str, str]
    collapsed: list[str]
    trivial: bool


def minimal_container(d: Decomposition, pids: Iterable[str]) -> Optional[str]:
    """The smallest member containing all given members, if unique."""
    pids = list(pids)
    cands = [p for p in d.ids if all(d.geometric_face(q, p) for q in pids)]
    if not cands:
        return None
    cands.sort(key=lambda p: d[p].dim)
    best = cands[0]
    if all(d.geometric_face(best, p) for p in cands):
        return best
    return None


def collapse_edges(
    g: TropicalGraph,
    edges: Iterable[str],
    geom: Geometry,
    targets: Optional[Mapping[str, str]] = None,
) -> CollapseResult:
    """Contract node edges; merged vertices get the smallest containing member.

    ``targets`` may fix the polytope of the merged vertex named after the
    first vertex (in graph order) of each contracted component.
    """
    edges = [x for x in edges]
    for x in edges:
        if x not in g.edges or not g.edges[x].is_node:
            raise TropicalError(f"cannot collapse {x}: not a node edge")
    keep = set(g.edges) - set(edges)
    comps = g.components(drop=keep)
    kappa: dict[str, str] = {}
    new_vertices: dict[str, Vertex] = {}
    d = geom.decomposition
    for comp in comps:
        rep = comp[0]
        pids = [g.vertices[v].polytope for v in comp]
        if targets and rep in targets:
            pid = targets[rep]
            if not all(d.geometric_face(q, pid) for q in pids):
                raise TropicalError(f"target polytope {pid} does not contain P(v') for the merged vertex {rep}")
        else:
            pid = minimal_container(d, pids)
            if pid is None:
                raise TropicalError(f"no member contains the polytopes of the vertices {comp}")
        sort = "disk" if any(g.vertices[v].sort == "disk" for v in comp) else "sphere"
        constant = all(g.vertices[v].constant for v in comp)
        new_vertices[rep] = Vertex(rep, pid, sort, None, constant)
        for v in comp:
            kappa[v] = rep
    new_edges = {}
    for eid, e in g.edges.items():
        if eid in edges:
            continue
        new_edges[eid] = replace(e, plus=kappa[e.plus], minus=None if e.minus is None else kappa[e.minus])
    out = TropicalGraph(new_vertices, new_edges, list(g.markings), g.root)
    trivial = all(g.edges[x].zero_slope for x in edges) and all(
        g.vertices[v].polytope == new_vertices[kappa[v]].polytope for v in g.vertices
    )
    return CollapseResult(out, kappa, edges, trivial)


# ----------------------------------------------------- relative weights

@dataclass
class RelativeWeights:
    cone: Cone
    lineality_dim: int
    order: list[str]
    n: int

    @property
    def dim(self) -> int:
        return self.cone.dim

    @property
    def effective_dim(self) -> int:
        return self.dim - self.lineality_dim

    def split(self, x: Sequence) -> dict[str, Vec]:
        return {v: tuple(x[i * self.n:(i + 1) * self.n]) for i, v in enumerate(self.order)}

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "effective_dim": self.effective_dim,
            "rays": [list(r) for r in self.cone.rays],
            "lineality": [list(l) for l in self.cone.lineality],
        }


def cone_kv(geom: Geometry, p_small: str, p_big: str) -> Cone:
    """``Cone(κ, v)``: the cell of ``p_small`` seen from the cell of ``p_big``."""
    d = geom.decomposition
    if not d.geometric_face(p_small, p_big):
        raise TropicalError(f"{p_small} is not contained in {p_big}")
    cellpoly = geom.cell_polytope(p_small)
    verts = geom.cell(p_big).vertices
    pt = tuple(sum((v[i] for v in verts), Fraction(0)) / len(verts) for i in range(geom.n))
    if not cellpoly.contains(pt):
        raise TropicalError(f"cell of {p_big} is not a face of the cell of {p_small}")
    return tangent_cone(cellpoly, pt)


def _relative_system(
    gprime: TropicalGraph,
    kappa: Mapping[str, str],
    target: TropicalGraph,
    geom: Geometry,
    mode_for_edge,
    vertex_cone,
) -> tuple[_System, list[str]]:
    n = geom.n
    order = list(gprime.vertices)
    idx = {v: i for i, v in enumerate(order)}
    total = n * len(order)
    sys_ = _System(total)
    for v in order:
        c = vertex_cone(v)
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
    for e in gprime.node_edges():
        mode = mode_for_edge(e)
        if mode is None:
            continue
        da = [[Fraction(0)] * total for _ in range(n)]
        for i in range(n):
            da[i][idx[e.plus] * n + i] += 1
            da[i][idx[e.minus] * n + i] -= 1
        u = geom.slope_vector(e.slope)
        _add_slope_constraints(sys_, da, (Fraction(0),) * n, u, mode)
    return sys_, order


def relative_weight_cone(
    gprime: TropicalGraph, g: TropicalGraph, kappa: Mapping[str, str], geom: Geometry
) -> RelativeWeights:
    """Cone of relative weights for an edge collapse ``κ : Γ' -> Γ``.

    Uncollapsed edges keep their ids in ``Γ``.
    """
    for v in gprime.vertices:
        if v not in kappa or kappa[v] not in g.vertices:
            raise TropicalError(f"collapse map undefined at {v}")
    for eid, e in g.edges.items():
        if eid in gprime.edges and e.slope != gprime.edges[eid].slope:
            raise TropicalError(f"edge {eid}: slope changed by the collapse")

    def mode(e: Edge):
        if e.zero_slope:
            return "zero"
        return "line" if e.id in g.edges else "ray"

    def vcone(v):
        return cone_kv(geom, gprime.vertices[v].polytope, g.vertices[kappa[v]].polytope)

    sys_, order = _relative_system(gprime, kappa, g, geom, mode, vcone)
    cone = sys_.cone()
    # weights pulled back from the identity collapse of the target
    ident = {w: w for w in g.vertices}

    def vcone_id(w):
        pid = g.vertices[w].polytope
        return cone_kv(geom, pid, pid)

    sys_t, order_t = _relative_system(g, ident, g, geom, lambda e: "zero" if e.zero_slope else "line", vcone_id)
    base = sys_t.cone()
    n = geom.n
    pulled = []
    for gen in list(base.lineality) + list(base.rays):
        blocks = {w: gen[i * n:(i + 1) * n] for i, w in enumerate(order_t)}
        pulled.append([x for v in order for x in blocks[kappa[v]]])
    lin_dim = ea.rank(pulled, n * len(order)) if pulled else 0
    return RelativeWeights(cone, lin_dim, order, n)
