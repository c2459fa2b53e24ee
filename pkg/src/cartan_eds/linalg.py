"""Exact linear algebra over the rationals and prime fields."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Mapping, Sequence

from sympy import nextprime

__all__ = [
    "RationalMatrix",
    "PinConstraint",
    "Infeasible",
    "DegenerateSample",
    "Echelon",
    "rank",
    "rank_mod_p",
    "solve_sample",
    "random_prime",
    "modular_crosscheck",
]


class Infeasible(Exception):
    """The pinned linear system has no solution."""


class DegenerateSample(RuntimeError):
    """Every sampled solution was rejected by the genericity predicate."""


@dataclass
class RationalMatrix:
    """Row-sparse rational matrix. Each row maps column index to a nonzero value."""

    ncols: int
    rows: list[dict[int, Fraction]] = field(default_factory=list)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], ncols: int | None = None) -> "RationalMatrix":
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
            rows.append({j: Fraction(v) for j, v in enumerate(r) if v})
        return cls(ncols, rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Mapping[int, object]], ncols: int) -> "RationalMatrix":
        out = []
        for r in rows:
            row = {}
            for j, v in r.items():
                if not 0 <= j < ncols:
                    raise ValueError(f"column {j} outside 0..{ncols - 1}")
                if v:
                    row[j] = Fraction(v)
            out.append(row)
        return cls(ncols, out)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    def to_dense(self) -> list[list[Fraction]]:
        return [[r.get(j, Fraction(0)) for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "RationalMatrix":
        cols: list[dict[int, Fraction]] = [{} for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return RationalMatrix(len(self.rows), cols)

    def apply(self, v: Sequence) -> list[Fraction]:
        return [sum((c * v[j] for j, c in r.items()), Fraction(0)) for r in self.rows]


@dataclass(frozen=True)
class PinConstraint:
    index: int
    value: Fraction = Fraction(1)


def _primitive(row: Mapping[int, object]) -> dict[int, int]:
    """Scale a rational row to coprime integers with a positive leading entry."""
    if not row:
        return {}
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    ints = {j: int(v * den) for j, v in row.items() if v}
    return _normalize(ints)


def _normalize(ints: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in ints.values():
        g = gcd(g, v)
        if g == 1:
            break
    if not ints:
        return ints
    if ints[min(ints)] < 0:
        g = -g
    if g != 1:
        ints = {j: v // g for j, v in ints.items()}
    return ints


class Echelon:
    """Incremental fraction-free row echelon form.

    Rows are stored as primitive integer vectors keyed by their leading
    column. Each elimination step forms ``b*row - a*pivot`` and divides out
    the content, so entries stay integral without Bareiss's global updates.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, int]] = {}

    def __len__(self) -> int:
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, object]) -> dict[int, int]:
        """Reduce ``row`` against the stored pivots; empty iff it is in the span."""
        r = _primitive(row)
        while r:
            c = min(r)
            p = self.pivots.get(c)
            if p is None:
                return r
            a, b = r[c], p[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            new = {j: v * b for j, v in r.items()}
            for j, v in p.items():
                s = new.get(j, 0) - a * v
                if s:
                    new[j] = s
                else:
                    new.pop(j, None)
            r = _normalize(new)
        return r

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert a row; returns True when it raised the rank."""
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[min(r)] = r
        return True

    def contains(self, row: Mapping[int, object]) -> bool:
        return not self.reduce(row)


def _rows_of(M) -> list[Mapping[int, object]]:
    if isinstance(M, RationalMatrix):
        return M.rows
    return [{j: v for j, v in enumerate(r) if v} for r in M]


def rank(M) -> int:
    """Exact rank of a :class:`RationalMatrix` (or nested sequence)."""
    ech = Echelon()
    for row in _rows_of(M):
        ech.add(row)
    return ech.rank


def rank_mod_p(M, p: int) -> int:
    """Rank of ``M`` reduced modulo the prime ``p``.

    Raises ValueError when ``p`` divides a denominator.
    """
    rows = []
    for row in _rows_of(M):
        r = {}
        for j, v in row.items():
            v = Fraction(v)
            if v.denominator % p == 0:
                raise ValueError(f"prime {p} divides a denominator")
            x = v.numerator * pow(v.denominator, -1, p) % p
            if x:
                r[j] = x
        if r:
            rows.append(r)
    pivots: dict[int, dict[int, int]] = {}
    for r in rows:
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                inv = pow(r[c], -1, p)
                pivots[c] = {j: v * inv % p for j, v in r.items()}
                break
            a = r[c]
            new = dict(r)
            for j, v in piv.items():
                s = (new.get(j, 0) - a * v) % p
                if s:
                    new[j] = s
                else:
                    new.pop(j, None)
            r = new
    return len(pivots)


def random_prime(rng: random.Random, bits: int = 20) -> int:
    """A prime drawn above ``2**bits`` using ``rng``."""
    return int(nextprime(rng.randrange(2 ** bits, 2 ** (bits + 11))))


def modular_crosscheck(M, rng: random.Random, primes: int = 3, bits: int = 20) -> dict:
    """Compare the exact rank with ranks modulo random primes.

    ``ok`` holds when at least two thirds of the primes (2 of 3 by default)
    reproduce the exact rank.
    """
    exact = rank(M)
    used, ranks = [], []
    while len(used) < primes:
        p = random_prime(rng, bits)
        if p in used:
            continue
        try:
            r = rank_mod_p(M, p)
        except ValueError:
            continue
        used.append(p)
        ranks.append(r)
    agree = sum(r == exact for r in ranks)
    return {
        "rank": exact,
        "primes": used,
        "modular_ranks": ranks,
        "agree": agree,
        "ok": 3 * agree >= 2 * primes,
    }


def _rref(rows: list[dict[int, Fraction]], rhs: list[Fraction]):
    """Reduced row echelon form of an augmented system over Fractions.

    Returns ``(pivot_rows, consistent)`` where pivot_rows maps pivot column to
    ``(row, rhs)`` with a unit pivot.
    """
    pivots: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
    for row, b in zip(rows, rhs):
        r, b = dict(row), Fraction(b)
        for c in sorted(pivots):
            if c in r:
                prow, pb = pivots[c]
                a = r[c]
                for j, v in prow.items():
                    s = r.get(j, 0) - a * v
                    if s:
                        r[j] = s
                    else:
                        r.pop(j, None)
                b -= a * pb
        if not r:
            if b:
                return pivots, False
            continue
        c = min(r)
        inv = 1 / r[c]
        r = {j: v * inv for j, v in r.items()}
        b *= inv
        for oc, (orow, ob) in list(pivots.items()):
            a = orow.get(c)
            if a:
                for j, v in r.items():
                    s = orow.get(j, 0) - a * v
                    if s:
                        orow[j] = s
                    else:
                        orow.pop(j, None)
                pivots[oc] = (orow, ob - a * b)
        pivots[c] = (r, b)
    return pivots, True


def solve_sample(
    M: RationalMatrix,
    pins: Iterable[PinConstraint] = (),
    rng: random.Random | None = None,
    value_range: int = 10,
    predicate: Callable[[list[Fraction]], bool] | None = None,
    retries: int = 16,
) -> list[Fraction]:
    """Sample a random solution of ``M v = 0`` with pinned components.

    Free variables of the pinned system are drawn uniformly from
    ``[-value_range, value_range]``; the pivot variables follow. This is a
    particular solution plus a random integer combination of the nullspace
    basis attached to the free columns.

    Raises :class:`Infeasible` if the pins contradict the system and
    :class:`DegenerateSample` if ``retries`` draws are all zero or rejected
    by ``predicate``.
    """
    if rng is None:
        rng = random.Random(0)
    pins = list(pins)
    seen = set()
    for pin in pins:
        if not 0 <= pin.index < M.ncols:
            raise ValueError(f"pin index {pin.index} outside 0..{M.ncols - 1}")
        if pin.index in seen:
            raise ValueError(f"duplicate pin on column {pin.index}")
        seen.add(pin.index)
    rows = [dict(r) for r in M.rows] + [{pin.index: Fraction(1)} for pin in pins]
    rhs = [Fraction(0)] * len(M.rows) + [Fraction(pin.value) for pin in pins]
    pivots, consistent = _rref(rows, rhs)
    if not consistent:
        raise Infeasible("pinned system is inconsistent")
    free = [j for j in range(M.ncols) if j not in pivots]
    for _ in range(retries):
        v = [Fraction(0)] * M.ncols
        for j in free:
            v[j] = Fraction(rng.randint(-value_range, value_range))
        for c, (row, b) in pivots.items():
            s = b
            for j, coef in row.items():
                if j != c:
                    s -= coef * v[j]
            v[c] = s
        if any(v) and (predicate is None or predicate(v)):
            return v
    raise DegenerateSample(f"no acceptable sample after {retries} draws")
