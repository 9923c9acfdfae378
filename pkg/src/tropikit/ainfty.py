"""Truncated Novikov arithmetic and curved A-infinity relation checks.

Chains are dictionaries ``{generator: Novikov}``.  Structure maps are stored
sparsely on generator tuples and extended multilinearly.  The sign in the
associativity relations is ``(-1)^(j + |a_1| + ... + |a_j|)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from . import exactalg as ea

VALUATION_INFINITY = math.inf


class AInftyError(ValueError):
    """Inconsistent algebra data or mismatched cutoffs."""


# ------------------------------------------------------------- Novikov

class Novikov:
    """A finite sum ``Σ c q^e`` with every exponent below the cutoff."""

    __slots__ = ("terms", "cutoff")

    def __init__(self, terms: Mapping = (), cutoff=1):
        self.cutoff = ea.parse_rational(cutoff)
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Fraction, Fraction] = {}
        for e, c in items:
            e = ea.parse_rational(e)
            c = ea.parse_rational(c)
            if e < self.cutoff:
                acc[e] = acc.get(e, Fraction(0)) + c
        self.terms = {e: acc[e] for e in sorted(acc) if acc[e] != 0}

    @classmethod
    def zero(cls, cutoff) -> "Novikov":
        return cls({}, cutoff)

    @classmethod
    def monomial(cls, coeff, exp, cutoff) -> "Novikov":
        return cls({exp: coeff}, cutoff)

    def _same(self, other: "Novikov"):
        if self.cutoff != other.cutoff:
            raise AInftyError(f"cutoff mismatch: {self.cutoff} vs {other.cutoff}")

    def __add__(self, other: "Novikov") -> "Novikov":
        self._same(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, Fraction(0)) + c
        return Novikov(t, self.cutoff)

    def __neg__(self) -> "Novikov":
        return Novikov({e: -c for e, c in self.terms.items()}, self.cutoff)

    def __sub__(self, other: "Novikov") -> "Novikov":
        return self + (-other)

    def __mul__(self, other) -> "Novikov":
        if not isinstance(other, Novikov):
            c = ea.parse_rational(other)
            return Novikov({e: c * v for e, v in self.terms.items()}, self.cutoff)
        self._same(other)
        t: dict[Fraction, Fraction] = {}
        for (e1, c1), (e2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            e = e1 + e2
            if e < self.cutoff:
                t[e] = t.get(e, Fraction(0)) + c1 * c2
        return Novikov(t, self.cutoff)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Novikov) and self.cutoff == other.cutoff and self.terms == other.terms

    def __hash__(self):
        return hash((self.cutoff, tuple(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def valuation(self):
        return min(self.terms) if self.terms else VALUATION_INFINITY

    def truncate(self, cutoff) -> "Novikov":
        cutoff = ea.parse_rational(cutoff)
        if cutoff > self.cutoff:
            raise AInftyError("cannot raise the cutoff of a truncated element")
        return Novikov(self.terms, cutoff)

    def leading(self) -> "Novikov":
        """Terms of valuation zero or less."""
        return Novikov({e: c for e, c in self.terms.items() if e <= 0}, self.cutoff)

    def to_json(self) -> list:
        return [{"coeff": ea.format_rational(c), "exp": ea.format_rational(e)} for e, c in self.terms.items()]

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*q^{e}" for e, c in self.terms.items())


def novikov_from_json(obj: Sequence[Mapping], cutoff) -> Novikov:
    return Novikov([(t.get("exp", "0"), t["coeff"]) for t in obj], cutoff)


# --------------------------------------------------------------- chains

Chain = dict


def chain_add(a: Chain, b: Chain, scale=1) -> Chain:
    out = dict(a)
    for g, c in b.items():
        c = c * scale if scale != 1 else c
        out[g] = out[g] + c if g in out else c
        if not out[g]:
            del out[g]
    return out


def chain_scale(a: Chain, c: Novikov) -> Chain:
    out = {}
    for g, v in a.items():
        w = v * c
        if w:
            out[g] = w
    return out


def chain_clean(a: Chain) -> Chain:
    return {g: v for g, v in sorted(a.items()) if v}


def chain_to_json(a: Chain) -> list:
    out = []
    for g, v in sorted(a.items()):
        for t in v.to_json():
            out.append({"gen": g, **t})
    return out


def chain_valuation(a: Chain):
    return min((v.valuation() for v in a.values()), default=VALUATION_INFINITY)


# --------------------------------------------------------------- algebra

@dataclass
class AInftyData:
    g: int
    cutoff: Fraction
    degrees: dict[str, int]
    maps: dict[tuple, Chain]
    max_arity: int
    complete: bool = False
    unit: Optional[str] = None
    weighted: Optional[str] = None
    maximum: Optional[str] = None

    def __post_init__(self):
        if self.g <= 0 or self.g % 2:
            raise AInftyError("the grading modulus must be a positive even integer")
        self.cutoff = ea.parse_rational(self.cutoff)
        self.degrees = {k: v % self.g for k, v in self.degrees.items()}
        for name in (self.unit, self.weighted, self.maximum):
            if name is not None and name not in self.degrees:
                raise AInftyError(f"designated generator {name} is not a generator")
        for (d, ins), out in self.maps.items():
            if len(ins) != d:
                raise AInftyError(f"map of arity {d} given {len(ins)} inputs")
            if d > self.max_arity:
                raise AInftyError(f"map of arity {d} exceeds the declared maximum arity {self.max_arity}")
            want = (sum(self.degrees[x] for x in ins) + 2 - d) % self.g
            for gen, v in out.items():
                if gen not in self.degrees:
                    raise AInftyError(f"unknown generator {gen}")
                if v.cutoff != self.cutoff:
                    raise AInftyError("coefficient cutoff differs from the algebra cutoff")
                if self.degrees[gen] != want:
                    raise AInftyError(f"m_{d}{ins} -> {gen} breaks degree homogeneity")

    @property
    def generators(self) -> list[str]:
        return list(self.degrees)

    def has_arity(self, d: int) -> bool:
        return d <= self.max_arity or self.complete

    def deg(self, gen: str) -> int:
        return self.degrees[gen]

    def one(self, coeff=1) -> Novikov:
        return Novikov.monomial(coeff, 0, self.cutoff)

    def basis(self, gen: str) -> Chain:
        return {gen: self.one()}

    def m(self, d: int, args: Sequence[Chain]) -> Chain:
        """``m_d`` extended multilinearly to chains."""
        if not self.has_arity(d):
            raise AInftyError(f"structure map m_{d} not supplied")
        return _apply(self.maps, d, args, self.cutoff)

    def to_json(self) -> dict:
        maps = []
        for (d, ins), out in sorted(self.maps.items()):
            maps.append({"d": d, "inputs": list(ins), "output": chain_to_json(out)})
        obj = {
            "g": self.g,
            "cutoff": ea.format_rational(self.cutoff),
            "max_arity": self.max_arity,
            "complete": self.complete,
            "generators": [{"name": k, "degree": v} for k, v in self.degrees.items()],
            "maps": maps,
        }
        for key in ("unit", "weighted", "maximum"):
            if getattr(self, key) is not None:
                obj[key] = getattr(self, key)
        return obj


def _apply(maps, d: int, args: Sequence[Chain], cutoff) -> Chain:
    out: Chain = {}
    if d == 0:
        return dict(maps.get((0, ()), {}))
    for combo in itertools.product(*[sorted(a.items()) for a in args]):
        ins = tuple(g for g, _ in combo)
        val = maps.get((d, ins))
        if not val:
            continue
        coeff = Novikov.monomial(1, 0, cutoff)
        for _, c in combo:
            coeff = coeff * c
        if coeff:
            out = chain_add(out, chain_scale(val, coeff))
    return out


def _chain_from_json(items, cutoff, where: str) -> Chain:
    out: Chain = {}
    for t in items:
        gen = t.get("gen")
        if gen is None:
            raise AInftyError(f"{where}: output term without a generator")
        v = Novikov.monomial(t.get("coeff", "1"), t.get("exp", "0"), cutoff)
        out = chain_add(out, {gen: v})
    return out


def algebra_from_json(obj: Mapping) -> AInftyData:
    cutoff = ea.parse_rational(obj["cutoff"])
    degrees = {}
    for gen in obj["generators"]:
        if gen["name"] in degrees:
            raise AInftyError(f"duplicate generator {gen['name']}")
        degrees[gen["name"]] = int(gen["degree"])
    maps: dict[tuple, Chain] = {}
    top = 0
    for i, m in enumerate(obj.get("maps", [])):
        d = int(m["d"])
        ins = tuple(m.get("inputs", []))
        for x in ins:
            if x not in degrees:
                raise AInftyError(f"/maps/{i}/inputs: unknown generator {x}")
        key = (d, ins)
        maps[key] = chain_add(maps.get(key, {}), _chain_from_json(m.get("output", []), cutoff, f"/maps/{i}"))
        top = max(top, d)
    return AInftyData(
        g=int(obj.get("g", 2)),
        cutoff=cutoff,
        degrees=degrees,
        maps=maps,
        max_arity=int(obj.get("max_arity", top)),
        complete=bool(obj.get("complete", False)),
        unit=obj.get("unit"),
        weighted=obj.get("weighted"),
        maximum=obj.get("maximum"),
    )


# ---------------------------------------------------------------- reports

@dataclass
class RelationReport:
    ok: bool
    failures: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    checked: int = 0
    first_failure_arity: Optional[int] = None

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checked": self.checked,
            "first_failure_arity": self.first_failure_arity,
            "missing": self.missing,
            "failures": [
                {"d": d, "inputs": list(ins), "residual": chain_to_json(r)} for d, ins, r in self.failures
            ],
        }


def _koszul(degs: Sequence[int], j: int) -> int:
    return -1 if (j + sum(degs[:j])) % 2 else 1


def associativity_residual(a: AInftyData, ins: Sequence[str]) -> Chain:
    d = len(ins)
    degs = [a.deg(x) for x in ins]
    basis = [a.basis(x) for x in ins]
    total: Chain = {}
    for k in range(d + 1):
        for j in range(d - k + 1):
            inner = a.m(k, basis[j:j + k])
            if not inner:
                continue
            outer = a.m(d - k + 1, basis[:j] + [inner] + basis[j + k:])
            total = chain_add(total, outer, _koszul(degs, j))
    return chain_clean(total)


def check_associativity(a: AInftyData, up_to_d: int) -> RelationReport:
    rep = RelationReport(ok=True)
    for d in range(up_to_d + 1):
        lacking = [k for k in range(d + 2) if not a.has_arity(k)]
        if lacking:
            rep.missing.append({"d": d, "arities": lacking})
            rep.ok = False
            continue
        for ins in itertools.product(a.generators, repeat=d):
            rep.checked += 1
            r = associativity_residual(a, ins)
            if r:
                rep.failures.append((d, ins, r))
                rep.ok = False
                if rep.first_failure_arity is None:
                    rep.first_failure_arity = d
    return rep


@dataclass
class UnitReport:
    ok: bool
    counterexample: Optional[dict] = None
    exact: Optional[bool] = None

    def to_json(self) -> dict:
        obj = {"ok": self.ok, "counterexample": self.counterexample}
        if self.exact is not None:
            obj["exact"] = self.exact
        return obj


def check_strict_unit(a: AInftyData, e: str) -> UnitReport:
    if e not in a.degrees:
        raise AInftyError(f"unknown generator {e}")
    for x in a.generators:
        want = chain_clean(a.basis(x))
        left = chain_clean(a.m(2, [a.basis(e), a.basis(x)]))
        if left != want:
            return UnitReport(False, {"d": 2, "inputs": [e, x], "got": chain_to_json(left)})
        right = chain_clean(chain_scale(a.m(2, [a.basis(x), a.basis(e)]), a.one(-1 if a.deg(x) % 2 else 1)))
        if right != want:
            return UnitReport(False, {"d": 2, "inputs": [x, e], "got": chain_to_json(right)})
    for d in range(1, a.max_arity + 1):
        if d == 2:
            continue
        for ins in itertools.product(a.generators, repeat=d):
            if e in ins:
                out = chain_clean(a.m(d, [a.basis(x) for x in ins]))
                if out:
                    return UnitReport(False, {"d": d, "inputs": list(ins), "got": chain_to_json(out)})
    return UnitReport(True)


def check_homotopy_unit_leading(a: AInftyData) -> UnitReport:
    """``m_1`` of the weighted generator equals unit minus maximum modulo positive valuation."""
    if None in (a.unit, a.weighted, a.maximum):
        raise AInftyError("unit, weighted and maximum generators must be designated")
    got = a.m(1, [a.basis(a.weighted)])
    want = {a.unit: a.one(), a.maximum: a.one(-1)}
    diff = chain_clean(chain_add(got, want, -1))
    lead = chain_clean({g: v.leading() for g, v in diff.items()})
    if lead:
        return UnitReport(False, {"d": 1, "inputs": [a.weighted], "got": chain_to_json(got)}, exact=False)
    return UnitReport(True, exact=not diff)


# ---------------------------------------------------------- Maurer–Cartan

@dataclass
class MCResult:
    residual: Chain
    is_projective_solution: bool
    potential: Novikov
    arity_used: int
    complete: bool
    vacuous: bool

    def to_json(self) -> dict:
        return {
            "solution": self.is_projective_solution,
            "potential": self.potential.to_json(),
            "residual": chain_to_json(self.residual),
            "arity_used": self.arity_used,
            "complete": self.complete,
            "vacuous": self.vacuous,
        }


def mc_residual(a: AInftyData, b: Chain) -> MCResult:
    """Evaluate ``Σ m_d(b, ..., b)`` and split off the unit component."""
    if a.unit is None:
        raise AInftyError("the algebra has no designated unit")
    for gen in b:
        if a.deg(gen) % 2 == 0:
            raise AInftyError(f"b must be odd, but has a component along {gen}")
        if b[gen].cutoff != a.cutoff:
            raise AInftyError("b has a different cutoff from the algebra")
    val = chain_valuation(b)
    if val != VALUATION_INFINITY and val <= 0:
        raise AInftyError("b must have positive valuation")
    if val == VALUATION_INFINITY:
        top = 0
    else:
        # terms with d * val(b) >= cutoff vanish after truncation
        top = math.ceil(a.cutoff / val) - 1 if a.cutoff > 0 else 0
        top = max(top, 0)
    complete = True
    if top > a.max_arity and not a.complete:
        top = a.max_arity
        complete = False
    total: Chain = {}
    for d in range(top + 1):
        total = chain_add(total, a.m(d, [b] * d))
    total = chain_clean(total)
    w = total.pop(a.unit, Novikov.zero(a.cutoff))
    vacuous = a.cutoff <= 0 or (not w and not total and val != VALUATION_INFINITY and val >= a.cutoff)
    return MCResult(total, complete and not total, w, top, complete, vacuous)


# ------------------------------------------------------------- morphisms

@dataclass
class MorphismData:
    source: AInftyData
    target: AInftyData
    components: dict[tuple, Chain]
    max_arity: int
    complete: bool = False

    def __post_init__(self):
        if self.source.cutoff != self.target.cutoff or self.source.g != self.target.g:
            raise AInftyError("source and target must share cutoff and grading")
        for (d, ins), out in self.components.items():
            if d < 1:
                raise AInftyError("morphism components start in arity 1")
            want = (sum(self.source.deg(x) for x in ins) + 1 - d) % self.source.g
            for gen in out:
                if gen not in self.target.degrees:
                    raise AInftyError(f"unknown target generator {gen}")
                if self.target.deg(gen) != want:
                    raise AInftyError(f"F^{d}{ins} -> {gen} breaks degree homogeneity")

    def has_arity(self, d: int) -> bool:
        return d <= self.max_arity or self.complete

    def f(self, d: int, args: Sequence[Chain]) -> Chain:
        if d == 0:
            return {}
        if not self.has_arity(d):
            raise AInftyError(f"morphism component F^{d} not supplied")
        return _apply(self.components, d, args, self.source.cutoff)


def identity_morphism(a: AInftyData) -> MorphismData:
    comps = {(1, (x,)): a.basis(x) for x in a.generators}
    return MorphismData(a, a, comps, 1, complete=True)


def _compositions(d: int):
    if d == 0:
        yield ()
        return
    for first in range(1, d + 1):
        for rest in _compositions(d - first):
            yield (first,) + rest


def morphism_residual(f: MorphismData, ins: Sequence[str]) -> Chain:
    src, tgt = f.source, f.target
    d = len(ins)
    degs = [src.deg(x) for x in ins]
    basis = [src.basis(x) for x in ins]
    lhs: Chain = {}
    for j in range(d + 1):
        for i in range(d - j + 1):
            inner = src.m(j, basis[i:i + j])
            if not inner:
                continue
            lhs = chain_add(lhs, f.f(d - j + 1, basis[:i] + [inner] + basis[i + j:]), _koszul(degs, i))
    rhs: Chain = {}
    for parts in _compositions(d):
        pieces, pos = [], 0
        for p in parts:
            pieces.append(f.f(p, basis[pos:pos + p]))
            pos += p
        if all(pieces):
            rhs = chain_add(rhs, tgt.m(len(parts), pieces))
    return chain_clean(chain_add(lhs, rhs, -1))


@dataclass
class MorphismReport:
    ok: bool
    relations: RelationReport
    unital: Optional[bool]

    def to_json(self) -> dict:
        return {"ok": self.ok, "relations": self.relations.to_json(), "unital": self.unital}


def check_morphism(f: MorphismData, up_to_d: int) -> MorphismReport:
    rel = RelationReport(ok=True)
    for d in range(up_to_d + 1):
        lacking = [k for k in range(d + 1) if not f.source.has_arity(k)]
        lacking += [k for k in range(1, d + 1) if not f.target.has_arity(k) or not f.has_arity(k)]
        if d == 0 and not f.target.has_arity(0):
            lacking.append(0)
        if lacking:
            rel.missing.append({"d": d, "arities": sorted(set(lacking))})
            rel.ok = False
            continue
        for ins in itertools.product(f.source.generators, repeat=d):
            rel.checked += 1
            r = morphism_residual(f, ins)
            if r:
                rel.failures.append((d, ins, r))
                rel.ok = False
                if rel.first_failure_arity is None:
                    rel.first_failure_arity = d
    unital = None
    e0, e1 = f.source.unit, f.target.unit
    if e0 is not None and e1 is not None:
        unital = chain_clean(f.f(1, [f.source.basis(e0)])) == chain_clean(f.target.basis(e1))
        for d in range(2, f.max_arity + 1):
            for ins in itertools.product(f.source.generators, repeat=d):
                if e0 in ins and chain_clean(f.f(d, [f.source.basis(x) for x in ins])):
                    unital = False
    return MorphismReport(rel.ok and unital is not False, rel, unital)


def morphism_from_json(obj: Mapping) -> MorphismData:
    src = algebra_from_json(obj["source"])
    tgt = algebra_from_json(obj["target"]) if "target" in obj else src
    comps: dict[tuple, Chain] = {}
    top = 0
    for i, c in enumerate(obj.get("components", [])):
        d = int(c["d"])
        ins = tuple(c.get("inputs", []))
        for x in ins:
            if x not in src.degrees:
                raise AInftyError(f"/components/{i}/inputs: unknown generator {x}")
        comps[(d, ins)] = chain_add(comps.get((d, ins), {}), _chain_from_json(c.get("output", []), src.cutoff, f"/components/{i}"))
        top = max(top, d)
    return MorphismData(src, tgt, comps, int(obj.get("max_arity", top)), bool(obj.get("complete", False)))


# ------------------------------------------------------- split assembly

@dataclass(frozen=True)
class SplitContribution:
    mult: int
    d_black: int
    sign: int
    factors: tuple


def split_assembly(types: Iterable, cutoff) -> Novikov:
    """``Σ sign · mult / d_black! · Π factors``."""
    total = Novikov.zero(cutoff)
    for t in types:
        if not isinstance(t, SplitContribution):
            t = SplitContribution(*t)
        if t.sign not in (1, -1):
            raise AInftyError("sign must be +1 or -1")
        if t.d_black < 0:
            raise AInftyError("the number of black markings must be nonnegative")
        term = Novikov.monomial(Fraction(t.sign * t.mult, math.factorial(t.d_black)), 0, cutoff)
        for fac in t.factors:
            term = term * fac
        total = total + term
    return total


def assembly_from_json(obj: Mapping) -> tuple[list[SplitContribution], Fraction]:
    cutoff = ea.parse_rational(obj["cutoff"])
    out = []
    for t in obj["types"]:
        facs = tuple(novikov_from_json(f, cutoff) for f in t.get("factors", []))
        out.append(SplitContribution(int(t["mult"]), int(t.get("d_black", 0)), int(t.get("sign", 1)), facs))
    return out, cutoff


# ---------------------------------------------------------------- models

UNIT, WEIGHTED, MAXIMUM = "unit", "weighted", "max"


def toric_model(w: Novikov, g: int = 2) -> AInftyData:
    """Three-generator model with curvature ``W · max`` and ``m_1(weighted) = unit - max``."""
    cut = w.cutoff
    one = Novikov.monomial(1, 0, cut)
    degrees = {UNIT: 0, WEIGHTED: 1, MAXIMUM: 0}
    maps: dict[tuple, Chain] = {}
    if w:
        maps[(0, ())] = {MAXIMUM: w}
    maps[(1, (WEIGHTED,))] = {UNIT: one, MAXIMUM: -one}
    for x, dx in degrees.items():
        maps[(2, (UNIT, x))] = {x: one}
        maps[(2, (x, UNIT))] = {x: one if dx % 2 == 0 else -one}
    maps[(2, (MAXIMUM, MAXIMUM))] = {MAXIMUM: one}
    return AInftyData(g, cut, degrees, maps, 2, complete=True, unit=UNIT, weighted=WEIGHTED, maximum=MAXIMUM)


def exterior_dga(cutoff=1, flip: Optional[tuple] = None, differential: bool = True) -> AInftyData:
    """Exterior algebra on two odd generators ``t, x``, with ``dt = 1`` unless ``differential`` is off.

    Products enter as ``m_2(a, b) = (-1)^|a| ab``.  ``flip`` negates one
    product entry to produce a broken example.
    """
    one = Novikov.monomial(1, 0, cutoff)
    basis = {(): "e", ("t",): "t", ("x",): "x", ("t", "x"): "tx"}
    degrees = {"e": 0, "t": 1, "x": 1, "tx": 0}
    words = {v: k for k, v in basis.items()}
    maps: dict[tuple, Chain] = {}
    if differential:
        maps[(1, ("t",))] = {"e": one}
        maps[(1, ("tx",))] = {"x": one}
    for a, b in itertools.product(degrees, repeat=2):
        wa, wb = words[a], words[b]
        if set(wa) & set(wb):
            continue
        merged = wa + wb
        perm = sorted(merged)
        inv = sum(1 for i in range(len(merged)) for j in range(i + 1, len(merged)) if merged[i] > merged[j])
        sign = (-1) ** (inv + degrees[a])
        if flip == (a, b):
            sign = -sign
        maps[(2, (a, b))] = {basis[tuple(perm)]: one * sign}
    return AInftyData(2, cutoff, degrees, maps, 2, complete=True, unit="e")
