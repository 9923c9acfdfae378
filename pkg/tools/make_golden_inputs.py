"""Regenerate the golden input documents from the built-in scenes.

Run from the repository root: python3 tools/make_golden_inputs.py
Then refresh expected reports with: tropikit examples --write src/tropikit/golden/expected
"""

import json
from pathlib import Path

from tropikit import ainfty as ai
from tropikit import diagonal as dg
from tropikit import scenes as sc
from tropikit.polyhedral import coordinate_cross

ROOT = Path(__file__).resolve().parents[1] / "src" / "tropikit" / "golden"


def poly_doc(pid, p):
    return {"id": pid, "halfspaces": [h.to_json() for h in p.halfspaces]}


def split_doc(s, eta, targets=None):
    doc = {
        "version": 1,
        "geometry": {"cross": s.n},
        "graph": s.refined.to_json(),
        "base_collapse": [[a, None] for a, b in s.edge_map.items() if b is None],
        "split_edges": list(s.split_edges),
        "cone_direction": [str(x) for x in eta],
    }
    if targets:
        doc["merged_polytopes"] = targets
    return doc


def inputs():
    docs = {}
    docs["gamma1"] = {"version": 1, "geometry": {"cross": 2}, "graph": sc.gamma1().to_json()}
    docs["gamma2"] = {"version": 1, "geometry": {"cross": 2}, "graph": sc.gamma2().to_json()}
    docs["gamma-flexible"] = {
        "version": 1,
        "geometry": {"cross": 2},
        "graph": sc.gamma_flexible().to_json(),
        "collapse": ["m"],
    }
    for name, fn in sc.SPLIT_LIBRARY.items():
        s = fn()
        docs[f"split-{name}"] = split_doc(s, s.eta)
    s = sc.split_half_axis()
    docs["split-half-axis"] = split_doc(s, s.eta)

    d, g = coordinate_cross(2)
    docs["cross2-explicit"] = {
        "version": 1,
        "decomposition": {"dim": 2, "polytopes": [poly_doc(pid, d[pid]) for pid in d.ids]},
        "gluing": g.to_json(),
        "graph": sc.gamma2().to_json(),
    }

    disk = sc._graph(
        [("v", "0", {"sort": "disk"})],
        [("r", "v", None, (0,), "boundary-leaf"), ("x", "v", None, (0,), "boundary-leaf")],
        root="r",
    )
    docs["index-disk"] = {
        "version": 1,
        "geometry": {"cross": 1},
        "graph": disk.to_json(),
        "morse_indices": [1, 1],
        "maslov": {"v": 2},
    }
    edge = sc._graph([("a", "00"), ("b", "++")], [("e", "a", "b", (1, 1))])
    docs["index-edge"] = {
        "version": 1,
        "geometry": {"cross": 2},
        "graph": edge.to_json(),
        "morse_indices": [0],
        "maslov": {"a": 4, "b": 6},
        "energy": {
            "horizontal": "1/2",
            "constants": ["1/3"],
            "multiplicities": [[3]],
            "slopes": [[1, 1]],
        },
    }
    docs["divisor-count"] = {
        "version": 1,
        "geometry": {"cross": 1},
        "energy": {"horizontal": "0", "constants": ["1/3"], "multiplicities": [[1]], "degree": 3},
    }

    docs["p1"] = poly_doc("P1", dg.simplex(1))
    docs["p2"] = poly_doc("P2", dg.simplex(2))
    docs["p3"] = poly_doc("P3", dg.simplex(3))
    docs["p1xp1"] = poly_doc("P1xP1", dg.cube(2))
    docs["f1"] = poly_doc("F1", dg.hirzebruch(1))
    docs["f2"] = poly_doc("F2", dg.hirzebruch(2))
    docs["bad-fan"] = {"id": "bad", "halfspaces": [
        {"normal": [1, 0], "constant": "0"},
        {"normal": [0, 1], "constant": "0"},
        {"normal": [-1, -2], "constant": "-2"},
    ]}

    docs["fiber-p1"] = {"polytope": docs["p1"], "lambda": ["1/2"]}
    docs["fiber-p2"] = {"polytope": docs["p2"], "lambda": ["1/3", "1/3"]}
    docs["fiber-p1xp1"] = {"polytope": docs["p1xp1"], "lambda": ["1/2", "1/2"]}
    docs["fiber-f1"] = {"polytope": docs["f1"], "lambda": ["1/2", "1/2"]}

    docs["toric-model"] = ai.toric_model(ai.Novikov.monomial(3, "1/3", 2)).to_json()
    docs["dga"] = ai.exterior_dga().to_json()
    docs["dga-flipped"] = ai.exterior_dga(flip=("e", "x"), differential=False).to_json()
    mc = ai.toric_model(ai.Novikov.monomial(3, "1/3", 2)).to_json()
    mc["b"] = [{"gen": "weighted", "coeff": "3", "exp": "1/3"}]
    docs["toric-mc"] = mc
    docs["toric-mc-wrong"] = dict(mc, b=[{"gen": "weighted", "coeff": "1", "exp": "1/3"}])
    docs["dga-identity"] = {
        "source": docs["dga"],
        "complete": True,
        "components": [{"d": 1, "inputs": [x], "output": [{"gen": x}]} for x in ("e", "t", "x", "tx")],
    }
    docs["assembly"] = {
        "cutoff": "2",
        "types": [{"mult": 3, "d_black": 2, "sign": 1, "factors": [[{"coeff": "1", "exp": "1/3"}]]}],
    }
    return docs


CASES = [
    ("gamma1-validate", ["graph", "validate", "gamma1.json"]),
    ("gamma1-symmetry", ["graph", "symmetry", "gamma1.json"]),
    ("gamma2-symmetry", ["graph", "symmetry", "gamma2.json"]),
    ("gamma1-balance", ["graph", "balance", "gamma1.json"]),
    ("gamma-flexible-weights", ["graph", "weights", "gamma-flexible.json"]),
    ("gamma-flexible-rigidity", ["graph", "rigidity", "gamma-flexible.json"]),
    ("cross2-validate", ["validate", "cross2-explicit.json"]),
    ("polytope-validate", ["validate", "p2.json"]),
    ("bad-fan-validate", ["validate", "bad-fan.json"]),
    ("split-cube-check", ["split", "check", "split-cube.json"]),
    ("split-cube-multiplicity", ["split", "multiplicity", "split-cube.json"]),
    ("split-cube-boundary", ["split", "check", "split-cube.json", "--eta", "2,1,0"]),
    ("split-cube-outside", ["split", "check", "split-cube.json", "--eta", "3,1,0"]),
    ("split-2d-first-cone", ["split", "cone", "split-2d-first.json", "--seed", "7"]),
    ("split-2d-second-cone", ["split", "cone", "split-2d-second.json", "--seed", "7"]),
    ("split-two-edges-bad", ["split", "check", "split-two-edges-bad.json"]),
    ("split-two-edges-good", ["split", "check", "split-two-edges-good.json"]),
    ("split-half-axis-cone", ["split", "cone", "split-half-axis.json"]),
    ("index-disk", ["index", "index-disk.json"]),
    ("index-edge", ["index", "index-edge.json"]),
    ("divisor-count", ["index", "divisor-count.json"]),
    ("diagonal-p3", ["diagonal", "p3.json", "--eta", "1,2,3"]),
    ("diagonal-p1xp1", ["diagonal", "p1xp1.json"]),
    ("diagonal-f2", ["diagonal", "f2.json"]),
    ("diagonal-p2-wall", ["diagonal", "p2.json", "--eta", "1,1"]),
    ("diagonal-bad-fan", ["diagonal", "bad-fan.json"]),
    ("potential-p2", ["potential", "fiber-p2.json"]),
    ("potential-p1-holonomy", ["potential", "fiber-p1.json", "--holonomy", "2"]),
    ("potential-p1xp1-paper-sign", ["potential", "fiber-p1xp1.json", "--paper-sign"]),
    ("potential-f1", ["potential", "fiber-f1.json"]),
    ("ainfty-toric", ["ainfty", "check", "toric-model.json", "--up-to", "3"]),
    ("ainfty-dga", ["ainfty", "check", "dga.json", "--up-to", "4"]),
    ("ainfty-dga-flipped", ["ainfty", "check", "dga-flipped.json", "--up-to", "3"]),
    ("ainfty-mc", ["ainfty", "mc", "toric-mc.json"]),
    ("ainfty-mc-wrong", ["ainfty", "mc", "toric-mc-wrong.json"]),
    ("ainfty-identity", ["ainfty", "check", "dga-identity.json", "--up-to", "3"]),
    ("ainfty-assembly", ["ainfty", "check", "assembly.json"]),
]


def main():
    (ROOT / "inputs").mkdir(parents=True, exist_ok=True)
    for name, doc in inputs().items():
        (ROOT / "inputs" / f"{name}.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    cases = [{"name": n, "argv": a} for n, a in CASES]
    (ROOT / "cases.json").write_text(json.dumps({"cases": cases}, indent=2) + "\n")


if __name__ == "__main__":
    main()
