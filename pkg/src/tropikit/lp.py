"""Exact linear programming over the rationals.

A dense two-phase simplex with Bland's anti-cycling rule.  Adequate for
the small systems produced by the polyhedral and tropical layers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from gmpy2 import mpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def _f(x: mpq) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    row = tab[r]
    p = row[c]
    if p != 1:
        row = [x / p for x in row]
        tab[r] = row
    for i, other in enumerate(tab):
        if i != r:
            f = other[c]
            if f:
                tab[i] = [a - f * b for a, b in zip(other, row)]
    basis[r] = c


def _simplex(tab, basis, obj_row: int, allowed: int) -> bool:
    """Maximize on tableau; row ``obj_row`` holds reduced costs (negated).

    Returns False when unbounded.  Only columns ``< allowed`` may enter.
    """
    m = obj_row
    while True:
        obj = tab[obj_row]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return False
        _pivot(tab, basis, best[1], enter)


def solve_lp(
    c: Sequence,
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nvars: Optional[int] = None,
    maximize: bool = True,
    nonneg: bool = False,
) -> LPResult:
    """Optimize ``c.x`` subject to ``a_ub x <= b_ub`` and ``a_eq x = b_eq``.

    Variables are free unless ``nonneg``.  With ``c`` all zero this is a
    pure feasibility test.
    """
    n = nvars if nvars is not None else len(c)
    c = [_q(x) for x in c] if c else [mpq(0)] * n
    rows = []
    for a, b in zip(a_ub, b_ub):
        rows.append(([_q(x) for x in a], _q(b), True))
    for a, b in zip(a_eq, b_eq):
        rows.append(([_q(x) for x in a], _q(b), False))

    # column layout: [x+ (n)] [x- (n, if free)] [slacks] [artificials]
    nx = n if nonneg else 2 * n
    nslack = sum(1 for r in rows if r[2])
    m = len(rows)
    total = nx + nslack + m
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    s = 0
    for i, (a, b, ub) in enumerate(rows):
        line = [mpq(0)] * (total + 1)
        for j in range(n):
            line[j] = a[j]
            if not nonneg:
                line[n + j] = -a[j]
        if ub:
            line[nx + s] = mpq(1)
            s += 1
        line[-1] = b
        if b < 0:
            line = [-x for x in line]
        line[nx + nslack + i] = mpq(1)
        tab.append(line)
        basis.append(nx + nslack + i)

    # phase 1: maximize -sum(artificials)
    obj = [mpq(0)] * (total + 1)
    for i in range(m):
        for j in range(total + 1):
            if j < nx + nslack or j == total:
                obj[j] -= tab[i][j]
    tab.append(obj)
    _simplex(tab, basis, m, nx + nslack)
    if tab[m][-1] != 0:
        return LPResult(INFEASIBLE)
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= nx + nslack:
            col = next((j for j in range(nx + nslack) if tab[i][j] != 0), None)
            if col is not None:
                _pivot(tab, basis, i, col)
    tab.pop()

    sign = 1 if maximize else -1
    cost = [mpq(0)] * (total + 1)
    for j in range(n):
        cost[j] = sign * c[j]
        if not nonneg:
            cost[n + j] = -sign * c[j]
    obj = [-x for x in cost]
    for i in range(m):
        cb = cost[basis[i]]
        if cb:
            obj = [o + cb * t for o, t in zip(obj, tab[i])]
    tab.append(obj)
    # artificial columns stay out: restrict entering to real columns
    if not _simplex(tab, basis, m, nx + nslack):
        return LPResult(UNBOUNDED)
    vals = [mpq(0)] * total
    for i in range(m):
        vals[basis[i]] = tab[i][-1]
    x = tuple(_f(vals[j] - (0 if nonneg else vals[n + j])) for j in range(n))
    value = sum((_f(ci) * xi for ci, xi in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x, value)


def feasible_point(
    a_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    nvars: int = 0,
) -> Optional[tuple[Fraction, ...]]:
    res = solve_lp([0] * nvars, a_ub, b_ub, a_eq, b_eq, nvars=nvars)
    return res.x if res.status == OPTIMAL else None
