"""Independent reference computations used by the test suites."""

from __future__ import annotations

import random

from tropikit.index_energy import IndexInput
from tropikit.tropical import (
    BOUNDARY_LEAF,
    BOUNDARY_NODE,
    INTERIOR_LEAF,
    INTERIOR_NODE,
    Edge,
    Marking,
    TropicalGraph,
    Vertex,
)


def laplace_det(m):
    """Cofactor expansion along the first row."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * laplace_det(minor)
    return total


def closed_form_index(inp: IndexInput) -> int:
    """Index read directly off the uncollapsed graph.

    Every nonzero-slope interior node with multiplicities ``m`` lowers the
    total Maslov index by ``4 * sum(m)``; zero-slope interior nodes cost 2.
    """
    g = inp.graph
    d = sum(1 for e in g.edges.values() if e.kind == BOUNDARY_LEAF and e.id != g.root)
    maslov = sum(inp.maslov.values())
    value = inp.morse[0] - sum(inp.morse[1:]) + d - 2 + maslov
    for e in g.edges.values():
        if e.kind == INTERIOR_NODE:
            if any(e.slope):
                value -= 4 * sum(inp.multiplicities[e.id])
            else:
                value -= 2
        elif e.kind == BOUNDARY_NODE and e.length in ("zero", "infinite"):
            value -= 1
        elif e.kind == INTERIOR_LEAF:
            value -= 2 * (g.tangency(e.id) - 1)
    return value


def random_index_input(rng: random.Random, max_vertices: int = 7) -> IndexInput:
    """A random tree carrying index data.

    Vertex 0 is a disk carrying the root; disks form a connected subtree so
    that boundary nodes only join disks.
    """
    nv = rng.randint(1, max_vertices)
    sorts = ["disk"]
    vertices, edges, markings = {}, {}, []
    maslov, mults = {}, {}
    for i in range(nv):
        vid = f"v{i}"
        if i:
            parent = rng.randrange(i)
            sort = "disk" if sorts[parent] == "disk" and rng.random() < 0.5 else "sphere"
            sorts.append(sort)
            if sort == "disk":
                kind = rng.choice([BOUNDARY_NODE, INTERIOR_NODE])
            else:
                kind = INTERIOR_NODE
            if kind == BOUNDARY_NODE:
                slope = (0, 0)
                length = rng.choice(["zero", "finite", "infinite"])
            else:
                slope = (0, 0) if rng.random() < 0.3 else (rng.randint(-3, 3), rng.randint(1, 3))
                length = None
            eid = f"n{i}"
            edges[eid] = Edge(eid, vid, f"v{parent}", kind, slope, length)
            if kind == INTERIOR_NODE and any(slope):
                mults[eid] = [rng.randint(1, 3) for _ in range(rng.randint(1, 2))]
        vertices[vid] = Vertex(vid, "00", sorts[i])
        maslov[vid] = 2 * rng.randint(0, 4)
    edges["root"] = Edge("root", "v0", None, BOUNDARY_LEAF, (0, 0))
    disks = [v for v, x in vertices.items() if x.sort == "disk"]
    d = rng.randint(0, 3)
    for j in range(d):
        eid = f"in{j}"
        edges[eid] = Edge(eid, rng.choice(disks), None, BOUNDARY_LEAF, (0, 0))
    for j in range(rng.randint(0, 2)):
        eid = f"mk{j}"
        edges[eid] = Edge(eid, rng.choice(list(vertices)), None, INTERIOR_LEAF, (0, 0))
        markings.append(Marking(eid, rng.randint(1, 3), j + 1))
    morse = [rng.randint(0, 2) for _ in range(d + 1)]
    g = TropicalGraph(vertices, edges, markings, "root")
    return IndexInput(g, morse, maslov, mults)


def random_subsets(items, rng: random.Random, count: int):
    items = list(items)
    out = [[]]
    if items:
        out.append(list(items))
    for _ in range(count):
        out.append([x for x in items if rng.random() < 0.5])
    return out
