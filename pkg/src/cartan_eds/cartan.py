"""Cartan characters by random integral flags.

A random integer point is drawn, the generators are frozen there, and an
integral flag ``V_1, ..., V_n`` is grown one vector at a time. Each new
vector solves the polar equations of the flag so far, with its independence
components pinned to the next coordinate direction. Polar ranks ``c_k`` give
the characters ``s_k = c_k - c_{k-1}``; the remaining freedom of the last
vector is the gauge count ``s_n = N - n - c_{n-1}``.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .eds import EDSystem
from .exterior import EvaluatedForm, evaluate, interior_product
from .linalg import (
    DegenerateSample,
    Infeasible,
    PinConstraint,
    RationalMatrix,
    modular_crosscheck,
    rank,
    solve_sample,
)

__all__ = [
    "CharacterTable",
    "Flag",
    "FlagRun",
    "CharacterError",
    "GenusError",
    "polar_matrix",
    "sample_point",
    "integral_flag",
    "compute_characters",
    "compute_characters_multi",
    "format_table",
    "parse_table",
]

PRIME_POOL_SIZE = 300


class CharacterError(RuntimeError):
    def __init__(self, message: str, seed: int | None = None):
        super().__init__(message if seed is None else f"seed {seed}: {message}")
        self.seed = seed


class GenusError(CharacterError):
    """The independence condition cannot be met: genus < n."""

    def __init__(self, step: int, seed: int | None = None):
        super().__init__(f"genus < n at step {step}", seed)
        self.step = step


@dataclass(frozen=True)
class CharacterTable:
    N: int
    n: int
    s: tuple[int, ...]
    s_n: int
    cartan_ok: bool
    trials: int = 1
    seeds: tuple[int, ...] = ()
    agreement: bool = True

    @property
    def key(self) -> tuple:
        return (self.N, self.n, self.s, self.s_n, self.cartan_ok)

    def __str__(self) -> str:
        return format_table(self)

    def as_dict(self) -> dict:
        return {
            "N": self.N,
            "n": self.n,
            "characters": list(self.s),
            "gauge": self.s_n,
            "cartan_ok": self.cartan_ok,
            "trials": self.trials,
            "seeds": list(self.seeds),
            "agreement": self.agreement,
            "table": format_table(self),
        }


def format_table(t: CharacterTable) -> str:
    """Compact notation ``N[s_0,...,s_{n-1}]n+s_n``."""
    return f"{t.N}[{','.join(str(s) for s in t.s)}]{t.n}+{t.s_n}"


def parse_table(text: str) -> tuple[int, tuple[int, ...], int, int]:
    """Inverse of :func:`format_table`; whitespace is ignored."""
    t = "".join(text.split())
    head, rest = t.split("[", 1)
    body, tail = rest.split("]", 1)
    n, s_n = tail.split("+")
    s = tuple(int(x) for x in body.split(",")) if body else ()
    return int(head), s, int(n), int(s_n)


@dataclass
class Flag:
    point: list[Fraction]
    vectors: list[list[Fraction]] = field(default_factory=list)


@dataclass
class FlagRun:
    """Everything produced by one trial, kept for inspection and replay."""

    flag: Flag
    ranks: list[int]
    matrices: list[RationalMatrix]
    restarts: int = 0
    crosschecks: list[dict] = field(default_factory=list)


def polar_matrix(gens: Sequence[EvaluatedForm], vectors: Sequence[Sequence], N: int | None = None) -> RationalMatrix:
    """Polar equations of the integral element spanned by ``vectors``.

    One row per generator of degree ``d <= k+1`` and per ``(d-1)``-subset of
    the ``k`` flag vectors: the 1-form left after contracting those vectors.
    """
    if N is None:
        N = gens[0].dim if gens else len(vectors[0])
    k = len(vectors)
    rows = []
    for g in gens:
        d = g.degree
        if d > k + 1:
            continue
        for subset in combinations(range(k), d - 1):
            f = g
            for i in subset:
                f = interior_product(vectors[i], f)
            rows.append({idx[0]: v for idx, v in f.terms.items()})
    return RationalMatrix(N, rows)


def sample_point(N: int, rng: random.Random, value_range: int = 10, values: str = "integers") -> list[Fraction]:
    """Random evaluation point.

    ``values="primes"`` draws each coordinate from the first few hundred
    primes with a random sign instead of from ``[-value_range, value_range]``.
    """
    if values == "integers":
        return [Fraction(rng.randint(-value_range, value_range)) for _ in range(N)]
    if values == "primes":
        pool = _prime_pool()
        return [Fraction(rng.choice(pool) * rng.choice((-1, 1))) for _ in range(N)]
    raise ValueError(f"unknown point sampler {values!r}")


_PRIMES: list[int] = []


def _prime_pool() -> list[int]:
    if not _PRIMES:
        from sympy import prime

        _PRIMES.extend(int(prime(i)) for i in range(1, PRIME_POOL_SIZE + 1))
    return _PRIMES


def _assert_integral(gens: Sequence[EvaluatedForm], vectors: Sequence[Sequence]) -> None:
    # every generator must vanish on every subset containing the newest vector
    k = len(vectors)
    last = vectors[-1]
    for g in gens:
        d = g.degree
        if d > k:
            continue
        for subset in combinations(range(k - 1), d - 1):
            f = interior_product(last, g)
            for i in subset:
                f = interior_product(vectors[i], f)
            if f.terms.get((), 0):
                raise AssertionError("flag is not integral")


def integral_flag(
    eds: EDSystem,
    seed: int,
    value_range: int = 10,
    point_values: str = "integers",
    modular_check: bool = False,
    sample_retries: int = 16,
    max_restarts: int = 8,
) -> FlagRun:
    """Build one random integral flag and record the polar ranks."""
    rng = random.Random(seed)
    N, n = eds.N, eds.n
    indep = eds.independence
    failure: Exception | None = None
    for restart in range(max_restarts + 1):
        point = sample_point(N, rng, value_range, point_values)
        gens = [g for g in (evaluate(f, point) for f in eds.forms()) if not g.is_zero()]
        flag = Flag(point)
        ranks, matrices, checks = [], [], []
        try:
            for k in range(n):
                M = polar_matrix(gens, flag.vectors, N)
                ranks.append(rank(M))
                matrices.append(M)
                if modular_check:
                    checks.append(modular_crosscheck(M, rng))
                pins = [PinConstraint(indep[j], Fraction(int(j == k))) for j in range(n)]
                v = solve_sample(M, pins, rng, value_range, retries=sample_retries)
                flag.vectors.append(v)
                _assert_integral(gens, flag.vectors)
        except Infeasible:
            failure = GenusError(len(flag.vectors), seed)
            continue
        except DegenerateSample as exc:
            failure = CharacterError(f"degenerate sample at step {len(flag.vectors)}: {exc}", seed)
            continue
        return FlagRun(flag, ranks, matrices, restart, checks)
    assert failure is not None
    raise failure


def _table_from_ranks(N: int, n: int, ranks: Sequence[int], seed: int) -> CharacterTable:
    s = []
    prev = 0
    for c in ranks:
        s.append(c - prev)
        prev = c
    s_n = N - n - prev
    cartan_ok = all(x >= 0 for x in s) and s_n >= 0 and N == sum(s) + s_n + n
    return CharacterTable(N, n, tuple(s), s_n, cartan_ok, 1, (seed,), True)


def compute_characters(eds: EDSystem, seed: int = 0, **options) -> CharacterTable:
    """Character table from one random integral flag.

    Options are passed to :func:`integral_flag`.
    """
    run = integral_flag(eds, seed, **options)
    table = _table_from_ranks(eds.N, eds.n, run.ranks, seed)
    if options.get("modular_check") and not all(c["ok"] for c in run.crosschecks):
        raise CharacterError("modular rank cross-check disagreed", seed)
    return table


def compute_characters_multi(eds: EDSystem, seeds: Sequence[int], **options) -> CharacterTable:
    """Run one trial per seed; return the majority table with agreement metadata."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("at least one seed is required")
    tables = []
    for seed in seeds:
        try:
            tables.append(compute_characters(eds, seed, **options))
        except CharacterError:
            raise
        except Exception as exc:
            raise CharacterError(str(exc), seed) from exc
    counts = Counter(t.key for t in tables)
    best_key, _ = counts.most_common(1)[0]
    best = next(t for t in tables if t.key == best_key)
    return CharacterTable(
        best.N, best.n, best.s, best.s_n, best.cartan_ok,
        trials=len(seeds), seeds=tuple(seeds), agreement=len(counts) == 1,
    )
