"""Index formula, toric Maslov indices, node multiplicities and energy bookkeeping."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from . import exactalg as ea
from .tropical import (
    BOUNDARY_LEAF,
    BOUNDARY_NODE,
    INTERIOR_LEAF,
    INTERIOR_NODE,
    Geometry,
    Marking,
    TropicalGraph,
)


class IndexError_(ValueError):
    """Missing or inconsistent index data."""


# ----------------------------------------------------------- primitives

def maslov_toric(multiplicities: Iterable[int]) -> int:
    """Twice the total intersection multiplicity with the toric boundary."""
    ms = list(multiplicities)
    if any(m < 0 for m in ms):
        raise IndexError_("intersection multiplicities must be nonnegative")
    return 2 * sum(ms)


def node_multiplicity(slope: Sequence[int], normal: Sequence[int]) -> int:
    """Lattice pairing of a slope with a primitive facet normal."""
    if ea.vec_gcd(normal) != 1:
        raise IndexError_("facet normal must be primitive")
    m = sum(a * b for a, b in zip(slope, normal))
    if m <= 0:
        raise IndexError_(f"slope {list(slope)} pairs nonpositively with normal {list(normal)}: orientation error")
    return m


def chern_glue(c_plus: int, c_minus: int, multiplicities: Iterable[int]) -> int:
    """First Chern number of the glued map."""
    return c_plus + c_minus - 2 * sum(multiplicities)


def edge_multiplicities(g: TropicalGraph, eid: str, geom: Geometry) -> list[int]:
    """Multiplicities of a node edge against the facets of ``P(v+)`` through ``P(e)``."""
    e = g.edges[eid]
    d = geom.decomposition
    pp = g.vertices[e.plus].polytope
    pe = d.intersection_member(pp, g.vertices[e.minus].polytope)
    if pe is None:
        raise IndexError_(f"edge {eid}: endpoints do not meet")
    poly = d[pp]
    inter = d[pe]
    slope = ea.mat_vec(geom.pairing, e.slope)
    out = []
    for h in poly.facet_halfspaces():
        if all(h.value(v) == 0 for v in inter.vertices) and not inter.rays:
            s = sum(a * b for a, b in zip(slope, h.normal))
            if s != 0:
                out.append(node_multiplicity(slope if s > 0 else [-x for x in slope], h.normal))
    return out


# ---------------------------------------------------------------- index

@dataclass
class IndexInput:
    graph: TropicalGraph
    morse: list[int]
    maslov: dict[str, int]
    multiplicities: dict[str, list[int]] = field(default_factory=dict)
    base_edges: Optional[set[str]] = None

    def node_mults(self, eid: str) -> list[int]:
        if eid not in self.multiplicities:
            raise IndexError_(f"missing intersection multiplicities for nonzero-slope node {eid}")
        return list(self.multiplicities[eid])


def collapse_index_input(inp: IndexInput, edges: Iterable[str]) -> IndexInput:
    """Collapse nonzero-slope interior nodes, merging Maslov data by Chern gluing."""
    g = inp.graph
    edges = list(edges)
    for eid in edges:
        e = g.edges.get(eid)
        if e is None or e.kind != INTERIOR_NODE or e.zero_slope:
            raise IndexError_(f"{eid} is not a nonzero-slope interior node")
    order = {v: i for i, v in enumerate(g.vertices)}
    parent = {v: v for v in g.vertices}
    acc = {}
    for v in g.vertices:
        if v not in inp.maslov:
            raise IndexError_(f"missing Maslov index for vertex {v}")
        acc[v] = Fraction(inp.maslov[v], 2)

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for eid in edges:
        e = g.edges[eid]
        a, b = sorted((find(e.plus), find(e.minus)), key=order.get)
        parent[b] = a
        acc[a] = Fraction(chern_glue(acc[a], acc[b], inp.node_mults(eid)))
    rep = {v: find(v) for v in g.vertices}
    maslov = {}
    for r in set(rep.values()):
        if (2 * acc[r]).denominator != 1:
            raise IndexError_("glued Maslov index is not an integer")
        maslov[r] = int(2 * acc[r])
    disk = {rep[v] for v, x in g.vertices.items() if x.sort == "disk"}
    vertices = {r: replace(g.vertices[r], sort="disk" if r in disk else g.vertices[r].sort) for r in set(rep.values())}
    vertices = {v: vertices[v] for v in g.vertices if v in vertices}
    new_edges = {}
    for eid, e in g.edges.items():
        if eid in edges:
            continue
        new_edges[eid] = replace(e, plus=rep[e.plus], minus=None if e.minus is None else rep[e.minus])
    ng = TropicalGraph(vertices, new_edges, list(g.markings), g.root)
    mults = {k: v for k, v in inp.multiplicities.items() if k in new_edges}
    base = None if inp.base_edges is None else set(inp.base_edges) & set(new_edges)
    return IndexInput(ng, list(inp.morse), maslov, mults, base)


@dataclass
class IndexResult:
    value: int
    split_value: int
    terms: dict

    def to_json(self) -> dict:
        return {"index": self.value, "split_index": self.split_value, "terms": self.terms}


def _boundary_inputs(g: TropicalGraph) -> int:
    return sum(1 for e in g.edges.values() if e.kind == BOUNDARY_LEAF and e.id != g.root)


def _formula(inp: IndexInput) -> tuple[int, dict]:
    """Index of a graph with no nonzero-slope interior nodes."""
    g = inp.graph
    d = _boundary_inputs(g)
    if len(inp.morse) != d + 1:
        raise IndexError_(f"expected {d + 1} Morse indices (root first), got {len(inp.morse)}")
    for v, vert in g.vertices.items():
        if v not in inp.maslov:
            raise IndexError_(f"missing Maslov index for vertex {v}")
        if vert.sort == "sphere" and inp.maslov[v] % 2:
            raise IndexError_(f"sphere vertex {v} has odd Maslov index")
    nodes = sum(1 for e in g.edges.values() if e.kind == INTERIOR_NODE)
    zero_len = sum(1 for e in g.edges.values() if e.kind == BOUNDARY_NODE and e.length == "zero")
    inf_len = sum(1 for e in g.edges.values() if e.kind == BOUNDARY_NODE and e.length == "infinite")
    tang = 0
    for e in g.edges.values():
        if e.kind == INTERIOR_LEAF:
            tang += g.tangency(e.id) - 1
    maslov = sum(inp.maslov[v] for v in g.vertices)
    value = inp.morse[0] - sum(inp.morse[1:]) + d - 2 + maslov - 2 * nodes - zero_len - inf_len - 2 * tang
    terms = {
        "inputs": d,
        "maslov_total": maslov,
        "interior_nodes": nodes,
        "zero_length_boundary": zero_len,
        "infinite_length_boundary": inf_len,
        "tangency_excess": tang,
    }
    return value, terms


def nonzero_interior_nodes(g: TropicalGraph) -> list[str]:
    return [e.id for e in g.edges.values() if e.kind == INTERIOR_NODE and not e.zero_slope]


def expected_dimension(inp: IndexInput) -> IndexResult:
    """Index after gluing every nonzero-slope interior node, plus the split index."""
    glued = collapse_index_input(inp, nonzero_interior_nodes(inp.graph))
    value, terms = _formula(glued)
    if inp.base_edges is None:
        split_value = value
    else:
        extra = [e for e in nonzero_interior_nodes(inp.graph) if e not in inp.base_edges]
        partial = collapse_index_input(inp, extra)
        split_value = _formula(collapse_index_input(partial, nonzero_interior_nodes(partial.graph)))[0]
    return IndexResult(value, split_value, terms)


def index_input_from_json(obj: Mapping, g: TropicalGraph) -> IndexInput:
    try:
        morse = [int(x) for x in obj["morse_indices"]]
        maslov = {str(k): int(v) for k, v in obj["maslov"].items()}
    except KeyError as exc:
        raise IndexError_(f"missing field {exc.args[0]}") from None
    mults = {str(k): [int(x) for x in v] for k, v in obj.get("multiplicities", {}).items()}
    tang = obj.get("tangencies")
    if tang:
        marks = {m.edge: m for m in g.markings}
        for eid, t in tang.items():
            if eid in marks:
                marks[eid] = replace(marks[eid], tangency=int(t))
            else:
                marks[eid] = Marking(eid, int(t), len(marks) + 1)
        g = TropicalGraph(g.vertices, g.edges, list(marks.values()), g.root)
    base = obj.get("base_edges")
    return IndexInput(g, morse, maslov, mults, None if base is None else set(map(str, base)))


# --------------------------------------------------------------- energy

TWO_PI = "2pi"


@dataclass(frozen=True)
class Area:
    """``horizontal + 2π · vertical`` with rational parts."""

    horizontal: Fraction
    vertical: Fraction

    def to_json(self) -> dict:
        return {
            "horizontal": ea.format_rational(self.horizontal),
            "vertical_2pi": ea.format_rational(self.vertical),
        }


def fiber_area(horizontal, constants: Sequence, multiplicities: Sequence[Sequence[int]]) -> Area:
    """Total area of a map into a cut piece.

    ``multiplicities[i][j]`` is the intersection multiplicity of the i-th
    node with the j-th divisor, whose dual-polytope constant is
    ``constants[j]``.
    """
    cs = [ea.parse_rational(c) for c in constants]
    if any(c <= 0 for c in cs):
        raise IndexError_("dual polytope constants must be positive")
    vert = Fraction(0)
    for row in multiplicities:
        if len(row) != len(cs):
            raise IndexError_("multiplicity row length does not match the constants")
        for c, m in zip(cs, row):
            if m < 0:
                raise IndexError_("multiplicities must be nonnegative")
            vert += c * m
    return Area(ea.parse_rational(horizontal), vert)


def hofer_bound(horizontal, slopes: Sequence[Sequence[int]], c=None, constants: Sequence = ()) -> Area:
    """Horizontal area plus ``c`` times the total slope size (L1 norm).

    ``c`` defaults to the largest dual-polytope constant.
    """
    if c is None:
        if not constants:
            raise IndexError_("a constant or dual-polytope constants are required")
        c = max(ea.parse_rational(x) for x in constants)
    c = ea.parse_rational(c)
    total = sum(sum(abs(x) for x in s) for s in slopes)
    return Area(ea.parse_rational(horizontal), c * total)


def divisor_count(degree: int, area) -> int:
    """Number of intersections with a degree-``k`` stabilizing divisor."""
    if degree <= 0:
        raise IndexError_("degree must be positive")
    v = degree * ea.parse_rational(area)
    if v.denominator != 1:
        raise IndexError_(f"k * area = {v} is not an integer: inconsistent inputs")
    if v < 0:
        raise IndexError_("area must be nonnegative")
    return int(v)
