"""Exact rational and integer linear algebra.

Everything here works on plain Python integers and :class:`fractions.Fraction`
values.  Integer matrices are lists of rows.  No floating point is used.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence, Union

Rational = Fraction
IntMatrix = list[list[int]]
Vector = tuple

INFINITE = "infinite"


class ExactAlgError(ValueError):
    """Raised on invalid input to an exact-algebra routine."""


# ---------------------------------------------------------------- rationals

def parse_rational(value) -> Fraction:
    """Parse an int, a Fraction or a string ``"p/q"`` / ``"p"``.

    Floats are refused so that no binary rounding can leak in.
    """
    if isinstance(value, bool):
        raise ExactAlgError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                return Fraction(int(num), int(den))
            return Fraction(int(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ExactAlgError(f"not a rational: {value!r}") from exc
    raise ExactAlgError(f"not a rational: {value!r}")


def format_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_vector(values: Iterable) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v) for v in values)


def format_vector(v: Iterable) -> list[str]:
    return [format_rational(x) for x in v]


# ------------------------------------------------------------ basic helpers

def identity(n: int) -> IntMatrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m: Sequence[Sequence]) -> list[list]:
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    if not bt:
        return [[] for _ in a]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def vec_gcd(v: Iterable[int]) -> int:
    return reduce(gcd, (abs(int(x)) for x in v), 0)


def integer_scale(v: Sequence) -> tuple[int, ...]:
    """Smallest positive multiple of a rational vector that is a primitive
    integer vector (zero stays zero)."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = vec_gcd(ints)
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(x // g for x in ints)


def det(m: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    if any(len(row) != n for row in a):
        raise ExactAlgError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for r in range(col + 1, n):
            f = a[r][col] / p
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return sign * result


def rref(m: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over Q. Returns (rows, pivot_columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(m: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(m, ncols)[1])


def nullspace(m: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of the rational kernel {x : m x = 0}."""
    rows, pivots = rref(m, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            x[p] = -row[f]
        basis.append(tuple(x))
    return basis


def solve(m: Sequence[Sequence], b: Sequence, ncols: int):
    """One rational solution of m x = b, or None if inconsistent."""
    aug = [list(row) + [rhs] for row, rhs in zip(m, b)]
    rows, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(rows, pivots):
        x[p] = row[ncols]
    return tuple(x)


def row_basis(vectors: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    return [tuple(r) for r in rref(vectors, ncols)[0]]


# ------------------------------------------------------- Smith normal form

def smith_normal_form(m: Sequence[Sequence[int]], ncols: int | None = None):
    """Return ``(U, D, V)`` with ``U*m*V == D``.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with non-negative
    entries forming a divisibility chain.
    """
    a = [[int(x) for x in row] for row in m]
    nr = len(a)
    nc = ncols if ncols is not None else (len(a[0]) if a else 0)
    for row in a:
        if len(row) != nc:
            raise ExactAlgError("ragged matrix")
    u = identity(nr)
    v = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        a[dst] = [x + f * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for row in a:
            row[dst] += f * row[src]
        for row in v:
            row[dst] += f * row[src]

    def bezout_rows(i, j, col):
        # unimodular combination of rows i, j putting gcd at (i, col), 0 at (j, col)
        x, y = a[i][col], a[j][col]
        g, s, r = _xgcd(x, y)
        p, q = x // g, y // g
        for mat in (a, u):
            ri, rj = mat[i], mat[j]
            mat[i] = [s * e + r * f for e, f in zip(ri, rj)]
            mat[j] = [-q * e + p * f for e, f in zip(ri, rj)]

    def bezout_cols(i, j, row):
        x, y = a[row][i], a[row][j]
        g, s, r = _xgcd(x, y)
        p, q = x // g, y // g
        for mat in (a, v):
            for line in mat:
                e, f = line[i], line[j]
                line[i] = s * e + r * f
                line[j] = -q * e + p * f

    t = 0
    while t < min(nr, nc):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            for i in range(t + 1, nr):
                if a[i][t]:
                    if a[i][t] % a[t][t] == 0:
                        add_row(i, t, -(a[i][t] // a[t][t]))
                    else:
                        bezout_rows(t, i, t)
            for j in range(t + 1, nc):
                if a[t][j]:
                    if a[t][j] % a[t][t] == 0:
                        add_col(j, t, -(a[t][j] // a[t][t]))
                    else:
                        bezout_cols(t, j, t)
            if any(a[i][t] for i in range(t + 1, nr)):
                continue
            bad = next(
                (i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % a[t][t]),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, a, v


def _xgcd(x: int, y: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*x + t*y == g == gcd(x, y) > 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while y:
        q = x // y
        x, y = y, x - q * y
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


def smith_diagonal(m: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    _, d, _ = smith_normal_form(m, ncols)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0))]


def integer_kernel(m: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Lattice basis of {x in Z^ncols : m x = 0} (always saturated)."""
    if not m:
        return [tuple(r) for r in identity(ncols)]
    _, d, v = smith_normal_form(m, ncols)
    r = sum(1 for i in range(min(len(d), ncols)) if d[i][i] != 0)
    basis = [tuple(v[i][j] for i in range(ncols)) for j in range(r, ncols)]
    return hermite_normal_form(basis, ncols)


def hermite_normal_form(rows: Sequence[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped; pivots are positive and entries above a pivot are
    reduced into ``[0, pivot)``.  The result is a canonical basis.
    """
    a = [[int(x) for x in row] for row in rows]
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        done = False
            if done:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == len(a):
                break
    return [tuple(row) for row in a[:r] if any(row)]


def saturation(gens: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Canonical basis of span_Q(gens) ∩ Z^n."""
    ints = [integer_scale(g) for g in gens if any(x != 0 for x in g)]
    if not ints:
        return []
    perp = integer_kernel(ints, n)
    if not perp:
        return hermite_normal_form(identity(n), n)
    return hermite_normal_form(integer_kernel(perp, n), n)


def annihilator_basis(vectors: Sequence[Sequence], n: int) -> list[tuple[int, ...]]:
    """Canonical lattice basis of {x in Z^n : <v, x> = 0 for all v}."""
    ints = [integer_scale(v) for v in vectors if any(x != 0 for x in v)]
    if not ints:
        return hermite_normal_form(identity(n), n)
    return hermite_normal_form(integer_kernel(ints, n), n)


def lattice_index(gens: Sequence[Sequence[int]], n: int | None = None) -> Union[int, str]:
    """Index of the sublattice generated by the rows ``gens`` in Z^n.

    Returns the string ``"infinite"`` when the generators have rank < n.
    """
    rows = [[int(x) for x in g] for g in gens]
    if n is None:
        if not rows:
            raise ExactAlgError("ambient dimension unknown for an empty generator list")
        n = len(rows[0])
    if n == 0:
        return 1
    if not rows:
        return INFINITE
    diag = smith_diagonal(rows, n)
    nonzero = [d for d in diag if d != 0]
    if len(nonzero) < n:
        return INFINITE
    out = 1
    for d in nonzero:
        out *= d
    return out


def primitive_part(v: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Split ``v = g * p`` with ``p`` primitive and ``g > 0``."""
    g = vec_gcd(v)
    if g == 0:
        raise ExactAlgError("primitive_part of the zero vector")
    return tuple(int(x) // g for x in v), g


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return abs(det(m)) == 1


# --------------------------------------------------------- rational spaces

@dataclass(frozen=True)
class RationalSubspace:
    """A linear subspace of Q^ambient given by an independent basis."""

    ambient: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient: int) -> "RationalSubspace":
        vecs = [tuple(Fraction(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient:
                raise ExactAlgError("vector length does not match the ambient dimension")
        return cls(ambient, tuple(row_basis(vecs, ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_proper(self) -> bool:
        return self.dim < self.ambient

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient:
            raise ExactAlgError("vector length does not match the ambient dimension")
        if all(Fraction(x) == 0 for x in v):
            return True
        return rank(list(self.basis) + [list(v)], self.ambient) == self.dim

    def integer_basis(self) -> list[tuple[int, ...]]:
        return saturation(self.basis, self.ambient)


def is_generic(v: Sequence, forbidden: Sequence[RationalSubspace]) -> bool:
    """True iff ``v`` lies in none of the listed proper subspaces."""
    for sub in forbidden:
        if not sub.is_proper:
            raise ExactAlgError("forbidden subspace must be proper")
        if sub.contains(v):
            return False
    return True


def first_violation(v: Sequence, forbidden: Sequence[RationalSubspace]):
    for i, sub in enumerate(forbidden):
        if sub.is_proper and sub.contains(v):
            return i
    return None


def _coprime_candidates(k: int, rng: random.Random, lo: int, hi: int) -> list[int]:
    chosen: list[int] = []
    while len(chosen) < k:
        x = rng.randint(lo, hi) * rng.choice((1, -1))
        if all(gcd(x, y) == 1 for y in chosen):
            chosen.append(x)
    return chosen


def sample_generic(
    ambient: int,
    forbidden: Sequence[RationalSubspace],
    seed: int = 0,
    lo: int = 1000,
    hi: int = 100000,
    attempts: int = 1000,
) -> tuple[Fraction, ...]:
    """Sample an integer vector with pairwise-coprime coordinates that avoids
    every listed subspace."""
    rng = random.Random(seed)
    for _ in range(attempts):
        v = tuple(Fraction(x) for x in _coprime_candidates(ambient, rng, lo, hi))
        if is_generic(v, forbidden):
            return v
    raise ExactAlgError("failed to sample a generic vector")
