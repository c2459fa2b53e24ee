"""Built-in systems: Maxwell and SU(2) Yang-Mills in n dimensions, and a contact system.

Chart layout is x-block, then A-block, then F-block (F with i < j), all
indices lexicographic and 1-based in names: ``x1``, ``A2`` / ``A1_2``,
``F12`` / ``F1_12``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations
from typing import Callable

from .eds import CheckResult, ClosureCertificate, EDSystem
from .exterior import Chart, Form, Metric, Poly, exterior_derivative, hodge_dual_2form, wedge

__all__ = [
    "StructureConstants",
    "ModelSpec",
    "GaugeFields",
    "build",
    "build_maxwell",
    "build_su2_yang_mills",
    "build_contact_example",
    "gauge_fields",
    "cartan_poincare",
    "essential_identities",
    "maxwell_dimension",
    "su2_dimension",
    "MODELS",
    "GOLDEN_TABLE1",
]

GOLDEN_TABLE1 = {
    "maxwell": {
        3: "9[0,2,3]3+1",
        4: "14[0,1,3,5]4+1",
        5: "20[0,1,2,4,7]5+1",
        6: "27[0,1,2,3,5,9]6+1",
    },
    "su2ym": {
        3: "21[0,6,9]3+3",
        4: "34[0,3,9,15]4+3",
        5: "50[0,3,6,12,21]5+3",
        6: "69[0,3,6,9,15,27]6+3",
    },
}


def maxwell_dimension(n: int) -> int:
    return 2 * n + n * (n - 1) // 2


def su2_dimension(n: int) -> int:
    return 4 * n + 3 * n * (n - 1) // 2


@dataclass(frozen=True)
class StructureConstants:
    """``gamma[a][b][c]`` is gamma^a_{bc}, 0-based group indices."""

    gamma: tuple

    @property
    def m(self) -> int:
        return len(self.gamma)

    @classmethod
    def su2(cls) -> "StructureConstants":
        g = [[[0] * 3 for _ in range(3)] for _ in range(3)]
        for (a, b, c), sign in _levi_civita3().items():
            g[a][b][c] = sign
        return cls(_freeze(g))

    @classmethod
    def from_array(cls, arr) -> "StructureConstants":
        return cls(_freeze(arr))

    def __call__(self, a: int, b: int, c: int):
        return self.gamma[a][b][c]

    def is_totally_antisymmetric(self) -> bool:
        r = range(self.m)
        for a in r:
            for b in r:
                for c in r:
                    g = self.gamma[a][b][c]
                    if g != -self.gamma[a][c][b] or g != self.gamma[b][c][a] or g != self.gamma[c][a][b]:
                        return False
        return True

    def relabeled(self, perm) -> "StructureConstants":
        """Constants after renaming group index ``a`` to ``perm[a]``."""
        m = self.m
        g = [[[0] * m for _ in range(m)] for _ in range(m)]
        for a in range(m):
            for b in range(m):
                for c in range(m):
                    g[perm[a]][perm[b]][perm[c]] = self.gamma[a][b][c]
        return StructureConstants(_freeze(g))


def _freeze(arr):
    if isinstance(arr, (list, tuple)):
        return tuple(_freeze(x) for x in arr)
    return arr


def _levi_civita3() -> dict:
    out = {}
    for p in permutations(range(3)):
        inv = sum(1 for i, j in combinations(range(3), 2) if p[i] > p[j])
        out[p] = -1 if inv % 2 else 1
    return out


@dataclass(frozen=True)
class ModelSpec:
    """A gauge-family model plus its coupling constants.

    The couplings default to the values that make the closure and
    Cartan-Poincare identities hold; changing them yields mutated systems
    for negative tests.
    """

    family: str
    n: int = 4
    metric: Metric | None = None
    gamma: StructureConstants = field(default_factory=StructureConstants.su2)
    theta_coupling: Fraction = Fraction(1, 8)
    psi_coupling: Fraction = Fraction(1, 4)
    lagrangian_coupling: Fraction = Fraction(1, 8)

    def __post_init__(self):
        if self.family not in ("maxwell", "su2ym", "contact"):
            raise ValueError(f"unknown model family {self.family!r}")
        if self.family != "contact":
            if self.n < 3:
                raise ValueError(f"{self.family} needs n >= 3, got {self.n}")
            if self.metric is None:
                object.__setattr__(self, "metric", Metric.lorentz(self.n))
            elif self.metric.n != self.n:
                raise ValueError("metric size does not match n")

    @property
    def colors(self) -> int:
        return 1 if self.family == "maxwell" else self.gamma.m


@dataclass
class GaugeFields:
    chart: Chart
    A: list[Form]
    F: list[Form]
    dual: list[Form]
    theta: list[Form]
    psi: list[Form]


def _chart(n: int, colors: int) -> Chart:
    names = [f"x{i + 1}" for i in range(n)]
    pairs = list(combinations(range(n), 2))
    if colors == 1:
        names += [f"A{i + 1}" for i in range(n)]
        names += [f"F{i + 1}{j + 1}" for i, j in pairs]
    else:
        names += [f"A{a + 1}_{i + 1}" for a in range(colors) for i in range(n)]
        names += [f"F{a + 1}_{i + 1}{j + 1}" for a in range(colors) for i, j in pairs]
    return Chart(tuple(names), tuple(range(n)))


def gauge_fields(spec: ModelSpec) -> GaugeFields:
    """Potentials, field strengths, duals and the theta/psi generators."""
    n, m = spec.n, spec.colors
    chart = _chart(n, m)
    pairs = list(combinations(range(n), 2))
    a_off = n
    f_off = n + m * n
    A, F, dual = [], [], []
    for a in range(m):
        A.append(Form(chart, 1, {(i,): Poly.var(a_off + a * n + i) for i in range(n)}))
        comps = {(i, j): Poly.var(f_off + a * len(pairs) + p) for p, (i, j) in enumerate(pairs)}
        F.append(Form(chart, 2, {(i, j): c for (i, j), c in comps.items()}))
        dual.append(hodge_dual_2form(comps, spec.metric, chart))
    gamma = spec.gamma if spec.family == "su2ym" else None
    theta, psi = [], []
    for a in range(m):
        th = exterior_derivative(A[a]) - F[a]
        ps = -exterior_derivative(dual[a])
        if gamma is not None:
            for b in range(m):
                for c in range(m):
                    if gamma(a, b, c):
                        th = th + wedge(A[b], A[c]) * (spec.theta_coupling * gamma(a, b, c))
                    if gamma(c, a, b):
                        ps = ps - wedge(A[b], dual[c]) * (spec.psi_coupling * gamma(c, a, b))
        theta.append(th)
        psi.append(ps)
    return GaugeFields(chart, A, F, dual, theta, psi)


def build(spec: ModelSpec) -> EDSystem:
    if spec.family == "contact":
        return build_contact_example()
    fields = gauge_fields(spec)
    chart = fields.chart
    m = spec.colors
    suffix = (lambda a: "") if m == 1 else (lambda a: str(a + 1))
    th_names = [f"theta{suffix(a)}" for a in range(m)]
    dth_names = [f"dtheta{suffix(a)}" for a in range(m)]
    psi_names = [f"psi{suffix(a)}" for a in range(m)]
    gens = [(th_names[a], fields.theta[a]) for a in range(m)]
    gens += [(dth_names[a], exterior_derivative(fields.theta[a])) for a in range(m)]
    gens += [(psi_names[a], fields.psi[a]) for a in range(m)]
    one = Form.scalar(chart, 1)
    certs = [ClosureCertificate(th_names[a], ((one, dth_names[a]),)) for a in range(m)]
    certs += [ClosureCertificate(dth_names[a]) for a in range(m)]
    if spec.family == "maxwell":
        certs.append(ClosureCertificate(psi_names[0]))
    else:
        # d psi_a = -1/4 g^c_ab A^b ^ psi_c - 1/4 g^c_ab theta^b ^ *F_c
        quarter = Fraction(-1, 4)
        gamma = spec.gamma
        for a in range(m):
            combo = []
            for c in range(m):
                coeff = Form.zero(chart, 1)
                for b in range(m):
                    if gamma(c, a, b):
                        coeff = coeff + fields.A[b] * (quarter * gamma(c, a, b))
                if coeff:
                    combo.append((coeff, psi_names[c]))
            for b in range(m):
                coeff = Form.zero(chart, spec.n - 2)
                for c in range(m):
                    if gamma(c, a, b):
                        coeff = coeff + fields.dual[c] * (quarter * gamma(c, a, b))
                if coeff:
                    combo.append((coeff, th_names[b]))
            certs.append(ClosureCertificate(psi_names[a], tuple(combo)))
    return EDSystem(chart, gens, chart.base_indices, certs)


def build_maxwell(n: int, metric: Metric | None = None) -> EDSystem:
    return build(ModelSpec("maxwell", n, metric))


def build_su2_yang_mills(n: int, metric: Metric | None = None, **couplings) -> EDSystem:
    return build(ModelSpec("su2ym", n, metric, **couplings))


def build_contact_example() -> EDSystem:
    """``dz - p dx - q dy`` and its exterior derivative on (x, y, z, p, q)."""
    chart = Chart(("x", "y", "z", "p", "q"), (0, 1))
    x, y, z, p, q = range(5)
    th = Form(chart, 1, {(z,): 1, (x,): -Poly.var(p), (y,): -Poly.var(q)})
    dth = exterior_derivative(th)
    return EDSystem(
        chart,
        [("th", th), ("dth", dth)],
        (x, y),
        [ClosureCertificate("th", ((Form.scalar(chart, 1), "dth"),)), ClosureCertificate("dth")],
    )


def _lagrangian(spec: ModelSpec, fields: GaugeFields) -> Form:
    m = spec.colors
    lam = Form.zero(fields.chart, spec.n)
    for a in range(m):
        lam = lam - wedge(fields.dual[a], exterior_derivative(fields.A[a]))
        lam = lam + wedge(fields.F[a], fields.dual[a]) * Fraction(1, 2)
    if spec.family == "su2ym":
        g = spec.gamma
        for a in range(m):
            for b in range(m):
                for c in range(m):
                    if g(c, a, b):
                        term = wedge(wedge(fields.A[a], fields.A[b]), fields.dual[c])
                        lam = lam - term * (spec.lagrangian_coupling * g(c, a, b))
    return lam


def cartan_poincare(spec: ModelSpec) -> tuple[Form, bool]:
    """Cartan form and whether ``d(Lambda) - sum theta^a ^ psi_a`` vanishes exactly."""
    if spec.family == "contact":
        raise ValueError("Cartan-Poincare form is defined for gauge families only")
    fields = gauge_fields(spec)
    lam = _lagrangian(spec, fields)
    residual = exterior_derivative(lam)
    for th, ps in zip(fields.theta, fields.psi):
        residual = residual - wedge(th, ps)
    return lam, residual.is_zero()


def _zero_check(name: str, form: Form) -> CheckResult:
    if form.is_zero():
        return CheckResult(name, "pass")
    return CheckResult(name, "fail", f"residual has {len(form.terms)} terms", form)


def essential_identities(spec: ModelSpec) -> list[CheckResult]:
    """The algebraic identities behind closure of the gauge systems."""
    if spec.family == "contact":
        raise ValueError("essential identities are defined for gauge families only")
    fields = gauge_fields(spec)
    chart = fields.chart
    m = spec.colors
    out = []
    total = Form.zero(chart, spec.n + 2)
    for a in range(m):
        total = total + wedge(exterior_derivative(fields.F[a]), exterior_derivative(fields.dual[a]))
    out.append(_zero_check("dF^d*F", total))
    if spec.family == "su2ym":
        g = spec.gamma
        for a in range(m):
            acc = Form.zero(chart, spec.n)
            for b in range(m):
                for c in range(m):
                    if g(c, a, b):
                        acc = acc + wedge(fields.dual[c], fields.F[b]) * g(c, a, b)
            out.append(_zero_check(f"gamma*F^F[{a + 1}]", acc))
    dtp = Form.zero(chart, spec.n + 2)
    for th, ps in zip(fields.theta, fields.psi):
        dtp = dtp + exterior_derivative(wedge(th, ps))
    out.append(_zero_check("d(theta^psi)", dtp))
    return out


@dataclass(frozen=True)
class ModelInfo:
    family: str
    description: str
    n_range: tuple[int, int]
    builder: Callable[..., EDSystem]


MODELS = {
    "maxwell": ModelInfo("maxwell", "vacuum Maxwell electrodynamics", (3, 8), build_maxwell),
    "su2ym": ModelInfo("su2ym", "SU(2) Yang-Mills", (3, 8), build_su2_yang_mills),
    "contact": ModelInfo("contact", "contact system dz - p dx - q dy", (2, 2), lambda n=2, metric=None: build_contact_example()),
}
