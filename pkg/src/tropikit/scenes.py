"""Built-in example scenes on coordinate-cross decompositions.

Members of the cross decomposition of Q^n are sign patterns such as ``"+-"``;
the cell of pattern ``s`` is the face of ``[-1, 1]^n`` with ``y_i = -s_i``.
"""

from __future__ import annotations

from functools import lru_cache

from .polyhedral import coordinate_cross
from .split import SplitType, make_split_type
from .tropical import (
    BOUNDARY_LEAF,
    INTERIOR_LEAF,
    Edge,
    Geometry,
    Marking,
    TropicalGraph,
    Vertex,
)


@lru_cache(maxsize=None)
def cross_geometry(n: int, check: bool = False) -> Geometry:
    d, g = coordinate_cross(n)
    return Geometry(d, g, check=check)


def _graph(vertices, edges, markings=(), root=None) -> TropicalGraph:
    vs = {}
    for v in vertices:
        vid, pid = v[0], v[1]
        opts = v[2] if len(v) > 2 else {}
        vs[vid] = Vertex(vid, pid, **opts)
    es = {}
    for e in edges:
        eid, plus, minus, slope = e[:4]
        kind = e[4] if len(e) > 4 else None
        if kind is None:
            kind = "interior-node" if minus is not None else INTERIOR_LEAF
        es[eid] = Edge(eid, plus, minus, kind, tuple(slope))
    return TropicalGraph(vs, es, [Marking(*m) for m in markings], root)


def gamma1() -> TropicalGraph:
    """Three pinned outer vertices joined to one center vertex."""
    return _graph(
        [("c", "00", {"constant": True}), ("a", "++"), ("b", "+-"), ("e", "-+")],
        [("ea", "a", "c", (-1, -1)), ("eb", "b", "c", (-1, 2)), ("ee", "e", "c", (2, -1))],
    )


def gamma2() -> TropicalGraph:
    """Two pinned vertices joined to a center vertex."""
    return _graph(
        [("c", "00"), ("a", "+-"), ("b", "++")],
        [("ea", "a", "c", (-1, 1)), ("eb", "b", "c", (-1, -1))],
    )


def gamma_flexible() -> TropicalGraph:
    """Two center vertices joined by a movable middle edge; collapses onto :func:`gamma1`."""
    return _graph(
        [("a", "00"), ("b", "00"), ("p", "+-"), ("q", "-+"), ("r", "++")],
        [
            ("ep", "p", "a", (-1, 2)),
            ("eq", "q", "a", (2, -1)),
            ("er", "r", "b", (-1, -1)),
            ("m", "b", "a", (1, 1)),
        ],
    )


def gamma_half_axis() -> TropicalGraph:
    """A graph whose split edge joins a half-axis vertex to the center."""
    return _graph(
        [("A", "++"), ("W", "+0"), ("B", "00"), ("P", "+-"), ("Q", "-+")],
        [
            ("aw", "A", "W", (0, -1)),
            ("pb", "P", "B", (-1, 2)),
            ("qb", "Q", "B", (2, -1)),
            ("e", "W", "B", (-2, -1)),
        ],
    )


# ------------------------------------------------------------ split types

def split_2d_first() -> SplitType:
    """One split edge; the moving vertex sits on the ``+`` side."""
    g = _graph(
        [("va", "++"), ("vp", "00"), ("vm", "--")],
        [("ep", "vp", "va", (2, 1)), ("e", "vp", "vm", (-1, -1))],
    )
    return make_split_type(cross_geometry(2), g, [("ep", None)], ["e"], (1, 0))


def split_2d_second() -> SplitType:
    """One split edge; the moving vertex sits on the ``-`` side."""
    g = _graph(
        [("vp", "++"), ("vm", "00"), ("vb", "--")],
        [("em", "vb", "vm", (1, 0)), ("e", "vp", "vm", (-1, -1))],
    )
    return make_split_type(cross_geometry(2), g, [("em", None)], ["e"], (1, 0))


TWO_EDGE_ETA = ("-1", "-1/2")


def split_two_edges_bad() -> SplitType:
    """Two split edges at one vertex reached by a single collapsed edge."""
    g = _graph(
        [("A", "--"), ("A1", "00"), ("B1", "++"), ("B2", "+-")],
        [
            ("a", "A", "A1", (2, 1)),
            ("e1", "A1", "B1", (1, 1)),
            ("e2", "A1", "B2", (1, 0)),
            ("r", "A", None, (0, 0)),
            ("m1", "B1", None, (0, 0)),
            ("m2", "B2", None, (0, 0)),
        ],
        markings=[("m1", 1, 1), ("m2", 1, 2)],
        root="r",
    )
    return make_split_type(cross_geometry(2), g, [("a", None)], ["e1", "e2"], TWO_EDGE_ETA)


def split_two_edges_good() -> SplitType:
    """Two split edges reached through two collapsed edges of different slope."""
    g = _graph(
        [("A", "--"), ("w", "0-"), ("A1", "00"), ("B1", "++"), ("B2", "+-")],
        [
            ("a", "A", "w", (1, 0)),
            ("b", "w", "A1", (2, 1)),
            ("e1", "A1", "B1", (1, 1)),
            ("e2", "A1", "B2", (1, 0)),
            ("r", "A", None, (0, 0)),
            ("m1", "B1", None, (0, 0)),
            ("m2", "B2", None, (0, 0)),
        ],
        markings=[("m1", 1, 1), ("m2", 1, 2)],
        root="r",
    )
    return make_split_type(cross_geometry(2), g, [("a", None), ("b", None)], ["e1", "e2"], TWO_EDGE_ETA)


def split_3d(r: str = "1", slope=(-1, -1, -1)) -> SplitType:
    """Single split edge in the cube with two movable neck vertices."""
    g = _graph(
        [("v0", "+++"), ("vp", "000"), ("vm", "000"), ("v1", "---")],
        [
            ("ep", "vp", "v0", (2, 1, 0)),
            ("e", "vp", "vm", tuple(slope)),
            ("em", "v1", "vm", (1, 2, 0)),
        ],
    )
    return make_split_type(cross_geometry(3), g, [("ep", None), ("em", None)], ["e"], (r, "1", "0"))


def split_half_axis(eta=("1", "3")) -> SplitType:
    g = gamma_half_axis()
    return make_split_type(cross_geometry(2), g, [], ["e"], eta)


SPLIT_LIBRARY = {
    "2d-first": split_2d_first,
    "2d-second": split_2d_second,
    "two-edges-bad": split_two_edges_bad,
    "two-edges-good": split_two_edges_good,
    "cube": split_3d,
}
