"""Command-line front end: JSON documents in, deterministic reports out.

Exit codes: 0 when every check passes, 1 when a check fails, 2 for input
errors (schema violations are reported with JSON-pointer paths).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Mapping, Optional, Sequence

import jsonschema

from . import ainfty as ai
from . import diagonal as dg
from . import exactalg as ea
from . import index_energy as ie
from . import polyhedral as ph
from . import potential as pt
from . import split as sp
from . import tropical as tr
from .scenes import cross_geometry

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
DEFAULT_MAX_DIM = 6


class InputError(Exception):
    def __init__(self, issues: list[dict]):
        super().__init__("; ".join(f"{i['pointer'] or '/'}: {i['message']}" for i in issues))
        self.issues = issues


def _issue(pointer: str, message: str) -> InputError:
    return InputError([{"pointer": pointer, "message": message}])


# ---------------------------------------------------------------- schemas

_RAT = {"type": ["string", "integer"]}
_INTVEC = {"type": "array", "items": {"type": "integer"}}
_RATVEC = {"type": "array", "items": _RAT}
_HALFSPACE = {
    "type": "object",
    "required": ["normal", "constant"],
    "properties": {"normal": _INTVEC, "constant": _RAT},
}
_POLYTOPE = {
    "type": "object",
    "required": ["halfspaces"],
    "properties": {"id": {"type": "string"}, "halfspaces": {"type": "array", "items": _HALFSPACE, "minItems": 1}},
}
_GRAPH = {
    "type": "object",
    "required": ["vertices"],
    "properties": {
        "vertices": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "polytope"],
                "properties": {
                    "id": {"type": "string"},
                    "polytope": {"type": "string"},
                    "sort": {"enum": ["sphere", "disk"]},
                    "chern": {"type": ["array", "null"], "items": {"type": "integer"}},
                    "constant": {"type": "boolean"},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "ends"],
                "properties": {
                    "id": {"type": "string"},
                    "ends": {"type": "array", "minItems": 1, "maxItems": 2, "items": {"type": ["string", "null"]}},
                    "class": {"enum": [tr.INTERIOR_NODE, tr.BOUNDARY_NODE, tr.INTERIOR_LEAF, tr.BOUNDARY_LEAF]},
                    "slope": _INTVEC,
                    "length": {"enum": [None, "zero", "finite", "infinite"]},
                },
            },
        },
        "markings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["edge"],
                "properties": {
                    "edge": {"type": "string"},
                    "tangency": {"type": "integer", "minimum": 1},
                    "number": {"type": "integer"},
                },
            },
        },
        "root": {"type": ["string", "null"]},
    },
}
SCENE_SCHEMA = {
    "type": "object",
    "properties": {
        "version": {"const": 1},
        "geometry": {
            "type": "object",
            "required": ["cross"],
            "properties": {"cross": {"type": "integer", "minimum": 1}},
        },
        "decomposition": {
            "type": "object",
            "required": ["dim", "polytopes"],
            "properties": {
                "dim": {"type": "integer", "minimum": 1},
                "polytopes": {"type": "array", "items": {**_POLYTOPE, "required": ["id", "halfspaces"]}},
                "faces": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
            },
        },
        "gluing": {
            "type": "object",
            "required": ["duals"],
            "properties": {
                "pairing": {"type": "array", "items": _INTVEC},
                "duals": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["polytope", "anchor"],
                        "properties": {
                            "polytope": {"type": "string"},
                            "halfspaces": {"type": "array", "items": _HALFSPACE},
                            "anchor": _RATVEC,
                        },
                    },
                },
            },
        },
        "graph": _GRAPH,
        "split_edges": {"type": "array", "items": {"type": "string"}},
        "base_collapse": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2}},
        "cone_direction": _RATVEC,
        "merged_polytopes": {"type": "object", "additionalProperties": {"type": "string"}},
        "collapse": {"type": "array", "items": {"type": "string"}},
        "morse_indices": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
        "maslov": {"type": "object", "additionalProperties": {"type": "integer"}},
        "tangencies": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 1}},
        "multiplicities": {"type": "object", "additionalProperties": _INTVEC},
        "base_edges": {"type": "array", "items": {"type": "string"}},
        "energy": {
            "type": "object",
            "properties": {
                "horizontal": _RAT,
                "constants": _RATVEC,
                "multiplicities": {"type": "array", "items": _INTVEC},
                "degree": {"type": "integer", "minimum": 1},
                "slopes": {"type": "array", "items": _INTVEC},
                "hofer_constant": _RAT,
            },
        },
    },
    "dependentRequired": {"gluing": ["decomposition"], "decomposition": ["gluing"]},
}
_TERM = {
    "type": "object",
    "required": ["gen"],
    "properties": {"gen": {"type": "string"}, "coeff": _RAT, "exp": _RAT},
}
_ALGEBRA = {
    "type": "object",
    "required": ["cutoff", "generators"],
    "properties": {
        "g": {"type": "integer", "minimum": 2, "multipleOf": 2},
        "cutoff": _RAT,
        "max_arity": {"type": "integer", "minimum": 0},
        "complete": {"type": "boolean"},
        "unit": {"type": "string"},
        "weighted": {"type": "string"},
        "maximum": {"type": "string"},
        "generators": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "degree"],
                "properties": {"name": {"type": "string"}, "degree": {"type": "integer"}},
            },
        },
        "maps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["d", "output"],
                "properties": {
                    "d": {"type": "integer", "minimum": 0},
                    "inputs": {"type": "array", "items": {"type": "string"}},
                    "output": {"type": "array", "items": _TERM},
                },
            },
        },
        "b": {"type": "array", "items": _TERM},
    },
}
MORPHISM_SCHEMA = {
    "type": "object",
    "required": ["source", "components"],
    "properties": {
        "source": _ALGEBRA,
        "target": _ALGEBRA,
        "max_arity": {"type": "integer", "minimum": 1},
        "complete": {"type": "boolean"},
        "components": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["d", "output"],
                "properties": {
                    "d": {"type": "integer", "minimum": 1},
                    "inputs": {"type": "array", "items": {"type": "string"}},
                    "output": {"type": "array", "items": _TERM},
                },
            },
        },
    },
}
_NOVIKOV = {
    "type": "array",
    "items": {"type": "object", "required": ["coeff"], "properties": {"coeff": _RAT, "exp": _RAT}},
}
ASSEMBLY_SCHEMA = {
    "type": "object",
    "required": ["cutoff", "types"],
    "properties": {
        "cutoff": _RAT,
        "types": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["mult"],
                "properties": {
                    "mult": {"type": "integer"},
                    "d_black": {"type": "integer", "minimum": 0},
                    "sign": {"enum": [1, -1]},
                    "factors": {"type": "array", "items": _NOVIKOV},
                },
            },
        },
    },
}
ALGEBRA_SCHEMA = _ALGEBRA
POLYTOPE_SCHEMA = _POLYTOPE
FIBER_SCHEMA = {
    "type": "object",
    "required": ["polytope", "lambda"],
    "properties": {"polytope": _POLYTOPE, "lambda": _RATVEC, "epsilon": _RATVEC},
}


def _pointer(path) -> str:
    parts = [str(p).replace("~", "~0").replace("/", "~1") for p in path]
    return "/" + "/".join(parts) if parts else ""


def check_schema(doc: Any, schema: Mapping) -> None:
    v = jsonschema.Draft202012Validator(schema)
    errs = sorted(v.iter_errors(doc), key=lambda e: (list(map(str, e.absolute_path)), e.message))
    if errs:
        raise InputError([{"pointer": _pointer(e.absolute_path), "message": e.message} for e in errs])


def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise _issue("", f"file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise _issue("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def max_dim() -> int:
    raw = os.environ.get("TROPIKIT_MAX_DIM")
    if raw is None or raw == "":
        return DEFAULT_MAX_DIM
    try:
        val = int(raw)
    except ValueError:
        raise _issue("", f"TROPIKIT_MAX_DIM must be an integer, got {raw!r}") from None
    if val < 1:
        raise _issue("", "TROPIKIT_MAX_DIM must be positive")
    return val


def _guard_dim(n: int, pointer: str) -> None:
    cap = max_dim()
    if n > cap:
        raise _issue(pointer, f"ambient dimension {n} exceeds TROPIKIT_MAX_DIM={cap}")


def parse_rational_list(text: str, pointer: str) -> tuple[Fraction, ...]:
    try:
        return tuple(ea.parse_rational(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise _issue(pointer, f"cannot parse {text!r}: {exc}") from None


# ----------------------------------------------------------------- scenes

class Scene:
    def __init__(self, doc: Mapping):
        check_schema(doc, SCENE_SCHEMA)
        self.doc = doc
        self._geom = None

    @property
    def geometry(self) -> tr.Geometry:
        if self._geom is None:
            doc = self.doc
            if "geometry" in doc:
                n = doc["geometry"]["cross"]
                _guard_dim(n, "/geometry/cross")
                self._geom = cross_geometry(n)
            elif "decomposition" in doc:
                _guard_dim(doc["decomposition"]["dim"], "/decomposition/dim")
                d = ph.decomposition_from_json(doc["decomposition"])
                g = ph.gluing_from_json(doc["gluing"], d)
                self._geom = tr.Geometry(d, g)
            else:
                raise _issue("", "scene needs either 'geometry' or 'decomposition' with 'gluing'")
        return self._geom

    def graph(self) -> tr.TropicalGraph:
        if "graph" not in self.doc:
            raise _issue("", "scene has no 'graph'")
        geom = self.geometry
        g = tr.graph_from_json(self.doc["graph"], geom.n)
        for i, v in enumerate(self.doc["graph"]["vertices"]):
            if v["polytope"] not in geom.decomposition.polytopes:
                raise _issue(f"/graph/vertices/{i}/polytope", f"unknown polytope {v['polytope']}")
        for i, e in enumerate(self.doc["graph"].get("edges", [])):
            if "slope" in e and len(e["slope"]) != geom.n:
                raise _issue(f"/graph/edges/{i}/slope", f"slope must have {geom.n} entries")
            for j, x in enumerate(e["ends"]):
                if x is not None and x not in g.vertices:
                    raise _issue(f"/graph/edges/{i}/ends/{j}", f"unknown vertex {x}")
        return g

    def split_type(self, eta: Optional[Sequence] = None) -> sp.SplitType:
        doc = self.doc
        if "split_edges" not in doc:
            raise _issue("", "scene has no 'split_edges'")
        geom = self.geometry
        g = self.graph()
        direction = eta if eta is not None else doc.get("cone_direction")
        if direction is None:
            raise _issue("/cone_direction", "a cone direction is required (scene field or --eta)")
        if len(direction) != geom.n:
            raise _issue("/cone_direction", f"cone direction must have {geom.n} entries")
        bc = [(a, b) for a, b in doc.get("base_collapse", [])]
        return sp.make_split_type(geom, g, bc, doc["split_edges"], direction, doc.get("merged_polytopes"))


# ---------------------------------------------------------------- reports

def _poly_summary(p: ph.Polytope) -> dict:
    out: dict = {"ambient": p.ambient, "empty": p.is_empty}
    if p.is_empty:
        return out
    v = ph.h_to_v(p)
    out["dim"] = p.dim
    out["vertices"] = [ea.format_vector(x) for x in v["vertices"]]
    out["rays"] = [list(r) for r in v["rays"]]
    out["lineality"] = [list(r) for r in v["lineality"]]
    out["relint_point"] = ea.format_vector(p.relint_point())
    if p.dim == p.ambient and p.vertices and not p.lineality:
        rep = ph.is_delzant(p)
        out["delzant"] = rep.to_json()
        if not p.rays:
            out["face_cones"] = []
            for f in p.faces():
                cone, dual = ph.cone_of_polytope_at_face(p, f)
                out["face_cones"].append(
                    {
                        "face_dim": f.dim,
                        "vertices": [ea.format_vector(x) for x in sorted(f.vertices)],
                        "cone_dim": cone.dim,
                        "dual_rays": [list(r) for r in dual.rays],
                        "dual_relint": ea.format_vector(dual.relint_point()),
                    }
                )
    return out


def cmd_validate(args) -> tuple[dict, bool]:
    doc = load_json(args.scene)
    if isinstance(doc, dict) and "halfspaces" in doc and "dim" not in doc:
        check_schema(doc, POLYTOPE_SCHEMA)
        p = ph.polytope_from_json(doc)
        _guard_dim(p.ambient, "/halfspaces/0/normal")
        rep = _poly_summary(p)
        ok = not p.is_empty and rep.get("delzant", {}).get("delzant", True)
        return {"kind": "polytope", "id": doc.get("id"), **rep, "ok": ok}, ok
    scene = Scene(doc)
    geom = scene.geometry
    d = geom.decomposition
    issues = d.validate()
    glue = ph.validate_gluing(geom.gluing, d)
    members = {}
    for pid in d.ids:
        p = d[pid]
        members[pid] = {
            "dim": p.dim,
            "split_eligible": sp.split_eligible(pid, d),
            "fan": ph.normal_fan(d, pid).to_json(),
            "cell_vertices": [ea.format_vector(v) for v in geom.cell(pid).vertices],
        }
    out = {
        "kind": "scene",
        "dim": d.dim,
        "decomposition_issues": issues,
        "gluing": glue.to_json(),
        "pairing_unimodular": ea.is_unimodular(geom.pairing),
        "members": members,
    }
    ok = not issues and glue.ok and out["pairing_unimodular"]
    if "graph" in scene.doc:
        rep = tr.validate_tropical(scene.graph(), geom)
        out["graph"] = rep.to_json()
        ok = ok and rep.ok
    out["ok"] = ok
    return out, ok


def cmd_graph(args) -> tuple[dict, bool]:
    scene = Scene(load_json(args.scene))
    geom = scene.geometry
    g = scene.graph()
    action = args.action
    if action == "validate":
        rep = tr.validate_tropical(g, geom)
        return rep.to_json(), rep.ok
    if action == "weights":
        wc = tr.weight_cone(g, geom)
        out = {"weights": wc.to_json()}
        ok = not wc.is_empty
        if "collapse" in scene.doc:
            res = tr.collapse_edges(g, scene.doc["collapse"], geom, scene.doc.get("merged_polytopes"))
            rel = tr.relative_weight_cone(g, res.graph, res.kappa, geom)
            out["collapse"] = {
                "graph": res.graph.to_json(),
                "kappa": dict(sorted(res.kappa.items())),
                "trivial": res.trivial,
                "relative_weights": rel.to_json(),
            }
        out["ok"] = ok
        return out, ok
    if action == "symmetry":
        info = tr.symmetry_group(g, geom)
        return {"ok": info.consistent, **info.to_json()}, info.consistent
    if action == "rigidity":
        rigid = tr.is_rigid(g, geom)
        info = tr.symmetry_group(g, geom)
        return {"ok": rigid, "rigid": rigid, "weight_cone_dim": info.dim_identity_component}, rigid
    if action == "balance":
        results, unchecked = {}, []
        ok = True
        for v, vert in g.vertices.items():
            if vert.chern is None and not vert.constant:
                unchecked.append(v)
                continue
            rep = tr.check_balancing(g, v, geom)
            results[v] = rep.to_json()
            ok = ok and rep.ok
        return {"ok": ok, "vertices": results, "unchecked": unchecked}, ok
    raise _issue("", f"unknown graph action {action}")


def _eta_arg(args) -> Optional[tuple]:
    return None if args.eta is None else parse_rational_list(args.eta, "--eta")


def cmd_split(args) -> tuple[dict, bool]:
    scene = Scene(load_json(args.scene))
    s = scene.split_type(_eta_arg(args))
    action = args.action
    if action == "check":
        rep = sp.split_report(s)
        rep["unsigned_relative_weights_dim"] = sp.unsigned_relative_weights(s).dim
        ok = rep["cone_condition"]["ok"] and rep["rigidity"]["rigid"]
        rep["ok"] = ok
        return rep, ok
    if action == "multiplicity":
        rig = sp.split_rigid(s)
        comps = [{"vertices": c, **i.to_json()} for c, i in sp.symmetry_splitting(s)]
        out = {"rigidity": rig.to_json(), "components": comps, "split_symmetry_dim": sp.split_symmetry_dim(s)}
        ok = rig.ok
        if rig.ok:
            ex = sp.exact_sequence_check(s)
            out["framed_multiplicity"] = sp.framed_multiplicity(s)
            out["exact_sequence"] = ex.to_json()
            ok = ex.ok
        out["ok"] = ok
        return out, ok
    if action == "cone":
        dc = sp.discrepancy_cone(s)
        cc = sp.cone_condition(s, dc)
        out = {
            "order": list(s.order),
            "order_ties": [list(t) for t in s.order_ties],
            "discrepancy": dc.to_json(),
            "cone_condition": cc.to_json(),
            "dimension_law": dc.dim == dc.target_dim,
        }
        ok = cc.ok
        if cc.ok:
            fails = sp.strong_cone_samples(s, args.samples, args.seed, dc)
            out["strong_samples"] = {"count": args.samples, "seed": args.seed, "failures": len(fails)}
            ok = not fails and dc.dim == dc.target_dim
        out["ok"] = ok
        return out, ok
    raise _issue("", f"unknown split action {action}")


def cmd_index(args) -> tuple[dict, bool]:
    scene = Scene(load_json(args.scene))
    doc = scene.doc
    out: dict = {}
    ok = True
    if "morse_indices" in doc or "maslov" in doc:
        g = scene.graph()
        for key in ("morse_indices", "maslov"):
            if key not in doc:
                raise _issue("", f"missing field {key}")
        inp = ie.index_input_from_json(doc, g)
        geom = scene.geometry
        for eid in ie.nonzero_interior_nodes(inp.graph):
            if eid not in inp.multiplicities:
                inp.multiplicities[eid] = ie.edge_multiplicities(inp.graph, eid, geom)
        res = ie.expected_dimension(inp)
        out["index"] = res.to_json()
        out["node_multiplicities"] = {k: v for k, v in sorted(inp.multiplicities.items())}
    if "energy" in doc:
        en = doc["energy"]
        energy: dict = {}
        if "constants" in en and "multiplicities" in en:
            area = ie.fiber_area(en.get("horizontal", "0"), en["constants"], en["multiplicities"])
            energy["fiber_area"] = area.to_json()
            if "degree" in en:
                if area.horizontal != 0:
                    raise _issue("/energy/horizontal", "divisor counts need a purely vertical area")
                energy["divisor_count"] = ie.divisor_count(en["degree"], area.vertical)
        if "slopes" in en:
            hb = ie.hofer_bound(en.get("horizontal", "0"), en["slopes"], en.get("hofer_constant"), en.get("constants", ()))
            energy["hofer_bound"] = hb.to_json()
        out["energy"] = energy
    if not out:
        raise _issue("", "scene has neither index data nor energy data")
    out["ok"] = ok
    return out, ok


def _algebra_with_cutoff(doc: Mapping, cutoff: Optional[str]) -> ai.AInftyData:
    if cutoff is not None:
        doc = dict(doc, cutoff=cutoff)
    return ai.algebra_from_json(doc)


def cmd_ainfty(args) -> tuple[dict, bool]:
    doc = load_json(args.algebra)
    if args.action == "check":
        if isinstance(doc, dict) and "types" in doc:
            check_schema(doc, ASSEMBLY_SCHEMA)
            types, cutoff = ai.assembly_from_json(doc)
            total = ai.split_assembly(types, cutoff)
            return {"kind": "assembly", "value": total.to_json(), "valuation": _val(total), "ok": True}, True
        if isinstance(doc, dict) and "source" in doc:
            check_schema(doc, MORPHISM_SCHEMA)
            f = ai.morphism_from_json(doc)
            up = args.up_to if args.up_to is not None else 3
            rep = ai.check_morphism(f, up)
            return {"kind": "morphism", "up_to": up, **rep.to_json()}, rep.ok
        check_schema(doc, ALGEBRA_SCHEMA)
        a = _algebra_with_cutoff(doc, args.cutoff)
        up = args.up_to if args.up_to is not None else (4 if a.complete else max(a.max_arity - 1, 0))
        rep = ai.check_associativity(a, up)
        out = {"kind": "algebra", "up_to": up, "associativity": rep.to_json()}
        ok = rep.ok
        if a.unit is not None:
            u = ai.check_strict_unit(a, a.unit)
            out["strict_unit"] = u.to_json()
            ok = ok and u.ok
        if None not in (a.unit, a.weighted, a.maximum):
            h = ai.check_homotopy_unit_leading(a)
            out["homotopy_unit_leading"] = h.to_json()
            ok = ok and h.ok
        out["ok"] = ok
        return out, ok
    check_schema(doc, ALGEBRA_SCHEMA)
    a = _algebra_with_cutoff(doc, args.cutoff)
    b: ai.Chain = {}
    for i, t in enumerate(doc.get("b", [])):
        if t["gen"] not in a.degrees:
            raise _issue(f"/b/{i}/gen", f"unknown generator {t['gen']}")
        b = ai.chain_add(b, {t["gen"]: ai.Novikov.monomial(t.get("coeff", "1"), t.get("exp", "0"), a.cutoff)})
    res = ai.mc_residual(a, b)
    return {"kind": "maurer-cartan", **res.to_json(), "ok": res.is_projective_solution}, res.is_projective_solution


def _val(x: ai.Novikov):
    v = x.valuation()
    return "inf" if v == ai.VALUATION_INFINITY else ea.format_rational(v)


def cmd_diagonal(args) -> tuple[dict, bool]:
    doc = load_json(args.polytope)
    check_schema(doc, POLYTOPE_SCHEMA)
    p = ph.polytope_from_json(doc)
    _guard_dim(p.ambient, "/halfspaces/0/normal")
    eta = _eta_arg(args) or dg.default_eta(p.ambient)
    if len(eta) != p.ambient:
        raise _issue("--eta", f"η must have {p.ambient} entries")
    dec = dg.diagonal_decomposition(p, eta)
    kun = dg.kunneth_check(p, dec)
    out = {
        "id": doc.get("id"),
        "face_count": len(dg.face_cones(p)),
        **dec.to_json(),
        "pair_count": len(dec.pairs),
        "kunneth": kun.to_json(),
        "ok": kun.ok,
    }
    return out, kun.ok


def cmd_potential(args) -> tuple[dict, bool]:
    doc = load_json(args.fiber)
    check_schema(doc, FIBER_SCHEMA)
    f = pt.fiber_from_json(doc)
    _guard_dim(f.n, "/lambda")
    pot = pt.bg_potential(f, negate_exponents=args.negate_exponents)
    out = {"id": doc.get("id", doc["polytope"].get("id")), **pot.to_json(), "negate_exponents": args.negate_exponents}
    y = parse_rational_list(args.holonomy, "--holonomy") if args.holonomy else (Fraction(1),) * f.n
    if len(y) != f.n:
        raise _issue("--holonomy", f"holonomy must have {f.n} entries")
    cutoff = (
        parse_rational_list(args.cutoff, "--cutoff")[0]
        if args.cutoff
        else max(a for _, a in pt.bg_potential(f).terms) + 1
    )
    if args.holonomy:
        out["holonomy"] = [ea.format_rational(x) for x in y]
    out["cutoff"] = ea.format_rational(cutoff)
    skeletons = pt.leading_disk_types(f, _eta_arg(args))
    out["leading_disks"] = [s.to_json() for s in skeletons]
    rep = pt.verify_unobstructed(f, cutoff, y)
    out["unobstructed"] = rep.to_json()
    ok = rep.ok and all(s.ok for s in skeletons) and len(skeletons) == len(f.facets)
    out["ok"] = ok
    return out, ok


# ------------------------------------------------------------- examples

GOLDEN_PACKAGE = "tropikit.golden"


def golden_dir() -> Path:
    return Path(str(resources.files(GOLDEN_PACKAGE)))


def _golden_cases() -> list[tuple[str, list[str]]]:
    with open(golden_dir() / "cases.json", encoding="utf-8") as fh:
        return [(c["name"], c["argv"]) for c in json.load(fh)["cases"]]


def render(obj: Any, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    lines: list[str] = []
    _text(obj, "", lines)
    return "\n".join(lines) + "\n"


def _text(obj: Any, prefix: str, lines: list[str]) -> None:
    if isinstance(obj, dict):
        if not obj:
            lines.append(f"{prefix}: {{}}" if prefix else "{}")
        for k in sorted(obj):
            _text(obj[k], f"{prefix}.{k}" if prefix else str(k), lines)
    elif isinstance(obj, list) and any(isinstance(x, (dict, list)) for x in obj):
        for i, x in enumerate(obj):
            _text(x, f"{prefix}[{i}]", lines)
    else:
        lines.append(f"{prefix}: {json.dumps(obj, ensure_ascii=False)}")


def run_case(argv: Sequence[str], base: Path) -> tuple[int, str]:
    resolved = [str(base / a) if a.endswith(".json") else a for a in argv]
    args = build_parser().parse_args(resolved)
    code, report = execute(args)
    return code, render(report, "json")


def cmd_examples(args) -> tuple[dict, bool]:
    base = golden_dir()
    results = {}
    ok = True
    write_to = Path(args.write) if args.write else None
    for name, argv in _golden_cases():
        code, text = run_case(argv, base / "inputs")
        payload = json.dumps({"argv": argv, "exit": code, "report": json.loads(text)}, indent=2, sort_keys=True) + "\n"
        target = (write_to or base / "expected") / f"{name}.json"
        if write_to is not None:
            write_to.mkdir(parents=True, exist_ok=True)
            target.write_text(payload, encoding="utf-8")
            results[name] = "written"
            continue
        if not target.exists():
            results[name] = "missing"
            ok = False
            continue
        same = target.read_text(encoding="utf-8") == payload
        results[name] = "identical" if same else "differs"
        ok = ok and same
    return {"cases": results, "ok": ok}, ok


# ---------------------------------------------------------------- driver

COMMANDS: dict[str, Callable] = {
    "validate": cmd_validate,
    "graph": cmd_graph,
    "split": cmd_split,
    "index": cmd_index,
    "ainfty": cmd_ainfty,
    "diagonal": cmd_diagonal,
    "potential": cmd_potential,
    "examples": cmd_examples,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    common.add_argument("--eta", help="cone direction or displacement, e.g. 1/2,3")
    common.add_argument("--cutoff", help="Novikov valuation cutoff")
    common.add_argument("--holonomy", help="holonomy point in the rational torus, e.g. 2,1/3")
    common.add_argument("--paper-sign", dest="negate_exponents", action="store_true", help="report potential exponents with the opposite sign")

    p = argparse.ArgumentParser(prog="tropikit", description="Tropical Fukaya combinatorics toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="validate a scene or a polytope")
    s.add_argument("scene")

    s = sub.add_parser("graph", parents=[common], help="tropical graph checks")
    s.add_argument("action", choices=("validate", "weights", "symmetry", "rigidity", "balance"))
    s.add_argument("scene")

    s = sub.add_parser("split", parents=[common], help="split-type checks")
    s.add_argument("action", choices=("check", "multiplicity", "cone"))
    s.add_argument("scene")
    s.add_argument("--samples", type=int, default=100, help="strong-cone sample count")

    s = sub.add_parser("index", parents=[common], help="expected dimension and energy bookkeeping")
    s.add_argument("scene")

    s = sub.add_parser("ainfty", parents=[common], help="A-infinity relation checks")
    s.add_argument("action", choices=("check", "mc"))
    s.add_argument("algebra")
    s.add_argument("--up-to", type=int, default=None, help="highest relation arity to check")

    s = sub.add_parser("diagonal", parents=[common], help="cone-displacement diagonal decomposition")
    s.add_argument("polytope")

    s = sub.add_parser("potential", parents=[common], help="moment-fiber potential and unobstructedness")
    s.add_argument("fiber")

    s = sub.add_parser("examples", parents=[common], help="recompute the golden corpus and compare")
    s.add_argument("--write", help="write fresh golden outputs into this directory instead of comparing")
    return p


_INPUT_ERRORS = (
    ValueError,
    ZeroDivisionError,
    KeyError,
    TypeError,
)


def execute(args) -> tuple[int, dict]:
    try:
        report, ok = COMMANDS[args.command](args)
    except InputError as exc:
        return EXIT_INPUT, {"ok": False, "error": "input", "issues": exc.issues}
    except _INPUT_ERRORS as exc:
        msg = str(exc) or exc.__class__.__name__
        pointer = msg.split(":", 1)[0] if msg.startswith("/") else ""
        if pointer:
            msg = msg.split(":", 1)[1].strip()
        return EXIT_INPUT, {"ok": False, "error": "input", "issues": [{"pointer": pointer, "message": msg}]}
    return (EXIT_OK if ok else EXIT_FAIL), report


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code, report = execute(args)
    sys.stdout.write(render(report, args.format))
    if code == EXIT_INPUT:
        for issue in report.get("issues", []):
            sys.stderr.write(f"tropikit: {issue['pointer'] or '/'}: {issue['message']}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
