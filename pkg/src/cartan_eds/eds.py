"""Exterior differential systems: generators, independence, closure and Cauchy checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .exterior import Chart, EvaluatedForm, Form, evaluate, exterior_derivative, interior_product, wedge
from .linalg import Echelon

__all__ = [
    "EDSystem",
    "ClosureCertificate",
    "CheckResult",
    "BudgetExceeded",
    "DEFAULT_BUDGET",
    "ideal_at_point",
    "ideal_dimension",
    "closure_check_certificate",
    "closure_check_pointwise",
    "cauchy_space_dim",
]

DEFAULT_BUDGET = 500_000


class BudgetExceeded(RuntimeError):
    """The requested exterior power has more basis elements than allowed."""


@dataclass(frozen=True)
class ClosureCertificate:
    """Claims ``d(target) = sum(coefficient ^ generator)``."""

    target: str
    combination: tuple[tuple[Form, str], ...] = ()


@dataclass
class CheckResult:
    name: str
    status: str  # "pass", "fail", "unverified", "skipped"
    detail: str = ""
    residual: Form | None = None

    @property
    def ok(self) -> bool:
        return self.status == "pass"


@dataclass
class EDSystem:
    chart: Chart
    generators: list[tuple[str, Form]]
    independence: tuple[int, ...] = ()
    certificates: list[ClosureCertificate] = field(default_factory=list)

    def __post_init__(self):
        self.generators = [(name, f) for name, f in self.generators]
        self.independence = tuple(self.independence)
        names = [name for name, _ in self.generators]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for name, f in self.generators:
            if f.chart != self.chart:
                raise ValueError(f"generator {name!r} lives on another chart")
            if not 1 <= f.degree <= self.chart.N:
                raise ValueError(f"generator {name!r} has degree {f.degree}; need 1..{self.chart.N}")
        if len(set(self.independence)) != len(self.independence):
            raise ValueError("repeated independence coordinate")
        for i in self.independence:
            if not 0 <= i < self.chart.N:
                raise ValueError(f"independence index {i} outside chart")
        for cert in self.certificates:
            self._check_certificate(cert)

    def _check_certificate(self, cert: ClosureCertificate) -> None:
        gens = dict(self.generators)
        if cert.target not in gens:
            raise ValueError(f"certificate for unknown generator {cert.target!r}")
        target_degree = gens[cert.target].degree + 1
        for coeff, name in cert.combination:
            if name not in gens:
                raise ValueError(f"certificate references unknown generator {name!r}")
            if coeff.degree + gens[name].degree != target_degree:
                raise ValueError(f"degree mismatch in certificate for {cert.target!r}")

    @property
    def N(self) -> int:
        return self.chart.N

    @property
    def n(self) -> int:
        return len(self.independence)

    def generator(self, name: str) -> Form:
        return dict(self.generators)[name]

    def forms(self) -> list[Form]:
        return [f for _, f in self.generators]

    def structurally_equal(self, other: "EDSystem") -> bool:
        """Same chart, independence and generator forms in order; names ignored."""
        return (
            self.chart == other.chart
            and self.independence == other.independence
            and self.forms() == other.forms()
        )


def _guard(N: int, k: int, budget: int, force: bool) -> None:
    size = comb(N, k) if 0 <= k <= N else 0
    if size > budget and not force:
        raise BudgetExceeded(
            f"Lambda^{k} over {N} coordinates has {size} basis elements (budget {budget}); "
            "use closure certificates or raise the budget"
        )


def _basis_forms(N: int, k: int):
    from itertools import combinations

    for idx in combinations(range(N), k):
        yield EvaluatedForm._raw(N, k, {idx: 1})


def ideal_at_point(
    eds: EDSystem, point: Sequence, k: int, budget: int = DEFAULT_BUDGET, force: bool = False
) -> list[EvaluatedForm]:
    """Spanning set of the degree-``k`` part of the algebraic ideal at ``point``."""
    N = eds.N
    if not 0 <= k <= N:
        raise ValueError(f"degree {k} outside 0..{N}")
    _guard(N, k, budget, force)
    out = []
    for _, g in eds.generators:
        if g.degree > k:
            continue
        gp = evaluate(g, point)
        if gp.is_zero():
            continue
        for xi in _basis_forms(N, k - g.degree):
            w = gp ^ xi
            if not w.is_zero():
                out.append(w)
    return out


def _echelon(forms: Sequence[EvaluatedForm], col) -> Echelon:
    ech = Echelon()
    for f in forms:
        ech.add({col(key): v for key, v in f.terms.items()})
    return ech


class _Columns:
    """Assigns integer column indices to basis tuples on first use."""

    def __init__(self):
        self.index: dict = {}

    def __call__(self, key) -> int:
        j = self.index.get(key)
        if j is None:
            j = self.index[key] = len(self.index)
        return j


def ideal_dimension(eds: EDSystem, point: Sequence, k: int, budget: int = DEFAULT_BUDGET, force: bool = False) -> int:
    cols = _Columns()
    return _echelon(ideal_at_point(eds, point, k, budget, force), cols).rank


def closure_check_certificate(eds: EDSystem) -> dict[str, CheckResult]:
    """Verify each generator's closure certificate by exact form equality."""
    certs = {c.target: c for c in eds.certificates}
    gens = dict(eds.generators)
    results = {}
    for name, g in eds.generators:
        dg = exterior_derivative(g)
        cert = certs.get(name)
        if cert is None:
            if dg.is_zero():
                results[name] = CheckResult(name, "pass", "d is identically zero")
            else:
                results[name] = CheckResult(name, "unverified", "no certificate")
            continue
        rhs = Form.zero(eds.chart, g.degree + 1)
        for coeff, other in cert.combination:
            rhs = rhs + wedge(coeff, gens[other])
        residual = dg - rhs
        if residual.is_zero():
            results[name] = CheckResult(name, "pass")
        else:
            results[name] = CheckResult(
                name, "fail", f"residual has {len(residual.terms)} terms", residual
            )
    return results


def closure_check_pointwise(
    eds: EDSystem, point: Sequence, budget: int = DEFAULT_BUDGET, force: bool = False
) -> dict[str, CheckResult]:
    """Check that each ``d(generator)`` lies in the ideal at ``point``.

    Generic-point test: a pass at a random point is a probabilistic verdict.
    Raises :class:`BudgetExceeded` before doing any work if a needed
    exterior power is too large.
    """
    degrees = sorted({g.degree + 1 for _, g in eds.generators if g.degree + 1 <= eds.N})
    for k in degrees:
        _guard(eds.N, k, budget, force)
    cols = _Columns()
    echelons = {k: _echelon(ideal_at_point(eds, point, k, budget, force), cols) for k in degrees}
    results = {}
    for name, g in eds.generators:
        dg = evaluate(exterior_derivative(g), point)
        if dg.is_zero():
            results[name] = CheckResult(name, "pass", "d vanishes at point")
            continue
        ech = echelons[g.degree + 1]
        row = {cols(key): v for key, v in dg.terms.items()}
        if ech.contains(row):
            results[name] = CheckResult(name, "pass")
        else:
            results[name] = CheckResult(name, "fail", "d(generator) not in the ideal at point")
    return results


def cauchy_space_dim(eds: EDSystem, point: Sequence, budget: int = DEFAULT_BUDGET, force: bool = False) -> int:
    """Dimension of the Cauchy characteristic space at ``point``.

    ``v`` is characteristic when ``i_v g`` lies in the degree ``deg g - 1``
    ideal for every generator ``g``. Writing ``S_g`` for that ideal and
    ``T_g`` for the rows ``i_{e_j} g``, the rank of ``v -> ([i_v g])_g``
    equals ``rank([S; T]) - rank(S)`` with the ``S_g`` placed block-diagonally.
    """
    N = eds.N
    for _, g in eds.generators:
        _guard(N, g.degree - 1, budget, force)
    cols = _Columns()
    ech = Echelon()
    base_rank = 0
    per_gen = []
    for gi, (_, g) in enumerate(eds.generators):
        gp = evaluate(g, point)
        per_gen.append(gp)
        k = g.degree - 1
        if k == 0:
            continue
        for f in ideal_at_point(eds, point, k, budget, force):
            if ech.add({cols((gi, key)): v for key, v in f.terms.items()}):
                base_rank += 1
    tangent_rows = []
    for j in range(N):
        e = [0] * N
        e[j] = 1
        row = {}
        for gi, gp in enumerate(per_gen):
            for key, v in interior_product(e, gp).terms.items():
                row[cols((gi, key))] = v
        tangent_rows.append(row)
    for row in tangent_rows:
        ech.add(row)
    return N - (ech.rank - base_rank)
