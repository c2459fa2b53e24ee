"""Exact sparse exterior algebra over a coordinate chart.

Forms carry multivariate polynomial coefficients with rational coefficients.
Basis forms are keyed by strictly increasing tuples of coordinate indices, so
structural equality of two forms is dictionary equality.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Iterable, Mapping, Sequence

__all__ = [
    "Chart",
    "Poly",
    "Form",
    "EvaluatedForm",
    "Metric",
    "ChartMismatch",
    "canonical_sign",
    "wedge",
    "exterior_derivative",
    "evaluate",
    "interior_product",
    "hodge_star",
    "hodge_dual_2form",
]


class ChartMismatch(ValueError):
    pass


def canonical_sign(idx: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort a basis index tuple, returning ``(sign, sorted_tuple)``.

    The sign is 0 when an index repeats.
    """
    idx = tuple(idx)
    if len(set(idx)) != len(idx):
        return 0, ()
    inversions = 0
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                inversions += 1
    return (-1 if inversions & 1 else 1), tuple(sorted(idx))


def _merge(i: tuple[int, ...], j: tuple[int, ...]) -> tuple[int, tuple[int, ...]]:
    # i, j sorted; sign of the shuffle taking i+j to sorted order
    if not i:
        return 1, j
    if not j:
        return 1, i
    inversions = 0
    for a in i:
        pos = bisect_left(j, a)
        if pos < len(j) and j[pos] == a:
            return 0, ()
        inversions += pos
    return (-1 if inversions & 1 else 1), tuple(sorted(i + j))


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


@dataclass(frozen=True)
class Chart:
    """Ordered coordinate names; ``base_indices`` are the spacetime coordinates."""

    names: tuple[str, ...]
    base_indices: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "base_indices", tuple(self.base_indices))
        if len(set(self.names)) != len(self.names):
            raise ValueError("coordinate names must be unique")
        if len(set(self.base_indices)) != len(self.base_indices):
            raise ValueError("base indices must be distinct")
        for i in self.base_indices:
            if not 0 <= i < len(self.names):
                raise ValueError(f"base index {i} outside chart of size {len(self.names)}")

    @property
    def N(self) -> int:
        return len(self.names)

    @property
    def n(self) -> int:
        return len(self.base_indices)

    def index(self, name: str) -> int:
        return self.names.index(name)


class Poly:
    """Sparse multivariate polynomial with rational coefficients.

    Monomials are sorted tuples of coordinate indices with repetition, so
    ``x0**2 * x3`` is ``(0, 0, 3)``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, ...], object] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for mono, c in terms.items():
                c = _as_fraction(c)
                if c:
                    key = tuple(sorted(mono))
                    total = clean.get(key, 0) + c
                    if total:
                        clean[key] = total
                    else:
                        clean.pop(key, None)
        self.terms = clean

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def const(cls, c) -> "Poly":
        c = _as_fraction(c)
        return cls._raw({(): c} if c else {})

    @classmethod
    def var(cls, i: int) -> "Poly":
        return cls._raw({(i,): Fraction(1)})

    @staticmethod
    def coerce(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly.const(x)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "Poly":
        other = Poly.coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Poly._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        return self + (-Poly.coerce(other))

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, Form):
            return NotImplemented
        if not isinstance(other, Poly):
            c = _as_fraction(other)
            if not c:
                return Poly()
            return Poly._raw({m: v * c for m, v in self.terms.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Poly._raw(out)

    __rmul__ = __mul__

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def constant(self) -> Fraction | None:
        """The value if this polynomial is constant, else None."""
        if not self.terms:
            return Fraction(0)
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        return None

    def diff(self, i: int) -> "Poly":
        out: dict[tuple[int, ...], Fraction] = {}
        for m, c in self.terms.items():
            e = m.count(i)
            if e:
                pos = m.index(i)
                rest = m[:pos] + m[pos + 1:]
                out[rest] = out.get(rest, 0) + c * e
        return Poly._raw({m: c for m, c in out.items() if c})

    def evaluate(self, values: Sequence) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            for i in m:
                c = c * values[i]
            total += c
        return total

    def variables(self) -> set[int]:
        return {i for m in self.terms for i in m}

    def __repr__(self):
        return f"Poly({self.terms!r})"


class Form:
    """A differential form of fixed degree with polynomial coefficients."""

    __slots__ = ("chart", "degree", "terms")

    def __init__(self, chart: Chart, degree: int, terms: Mapping | None = None):
        if degree < 0:
            raise ValueError("negative form degree")
        self.chart = chart
        self.degree = degree
        out: dict[tuple[int, ...], Poly] = {}
        if terms:
            for idx, coeff in terms.items():
                if len(idx) != degree:
                    raise ValueError(f"basis tuple {idx} does not have length {degree}")
                for i in idx:
                    if not 0 <= i < chart.N:
                        raise ValueError(f"coordinate index {i} outside chart")
                sign, key = canonical_sign(idx)
                if not sign:
                    continue
                coeff = Poly.coerce(coeff)
                if sign < 0:
                    coeff = -coeff
                _accumulate(out, key, coeff)
        self.terms = out

    @classmethod
    def _raw(cls, chart: Chart, degree: int, terms: dict) -> "Form":
        f = cls.__new__(cls)
        f.chart = chart
        f.degree = degree
        f.terms = terms
        return f

    @classmethod
    def zero(cls, chart: Chart, degree: int) -> "Form":
        return cls._raw(chart, degree, {})

    @classmethod
    def scalar(cls, chart: Chart, value) -> "Form":
        p = Poly.coerce(value)
        return cls._raw(chart, 0, {(): p} if p else {})

    @classmethod
    def coordinate(cls, chart: Chart, i: int) -> "Form":
        return cls.scalar(chart, Poly.var(i))

    @classmethod
    def basis(cls, chart: Chart, idx: Sequence[int], coeff=1) -> "Form":
        return cls(chart, len(idx), {tuple(idx): coeff})

    def d(self) -> "Form":
        return exterior_derivative(self)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check(self, other: "Form") -> None:
        if self.chart != other.chart:
            raise ChartMismatch("forms live on different charts")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return (
            self.chart == other.chart
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def __neg__(self) -> "Form":
        return Form._raw(self.chart, self.degree, {k: -v for k, v in self.terms.items()})

    def __add__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        out = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(out, k, v)
        return Form._raw(self.chart, self.degree, out)

    def __sub__(self, other: "Form") -> "Form":
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "Form":
        # multiplication by a scalar polynomial or number
        if isinstance(other, Form):
            return NotImplemented
        p = Poly.coerce(other)
        out = {}
        for k, v in self.terms.items():
            c = v * p
            if c:
                out[k] = c
        return Form._raw(self.chart, self.degree, out)

    __rmul__ = __mul__

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __repr__(self):
        return f"Form(degree={self.degree}, terms={len(self.terms)})"

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        names = self.chart.names
        parts = []
        for idx in sorted(self.terms):
            coeff = _poly_str(self.terms[idx], names)
            basis = "^".join(f"d{names[i]}" for i in idx)
            parts.append(f"({coeff})*{basis}" if basis else coeff)
        return " + ".join(parts)


def _poly_str(p: Poly, names: Sequence[str]) -> str:
    if not p.terms:
        return "0"
    out = []
    for m in sorted(p.terms):
        c = p.terms[m]
        factors = [names[i] for i in m]
        if c != 1 or not factors:
            factors.insert(0, str(c))
        out.append("*".join(factors))
    return " + ".join(out)


def _accumulate(out: dict, key, value) -> None:
    if key in out:
        s = out[key] + value
        if s:
            out[key] = s
        else:
            del out[key]
    elif value:
        out[key] = value


def wedge(a: Form, b: Form) -> Form:
    """Exterior product ``a ^ b``."""
    a._check(b)
    degree = a.degree + b.degree
    out: dict[tuple[int, ...], Poly] = {}
    if degree > a.chart.N:
        return Form.zero(a.chart, degree)
    for i, ci in a.terms.items():
        for j, cj in b.terms.items():
            sign, key = _merge(i, j)
            if not sign:
                continue
            c = ci * cj
            _accumulate(out, key, c if sign > 0 else -c)
    return Form._raw(a.chart, degree, out)


def exterior_derivative(a: Form) -> Form:
    out: dict[tuple[int, ...], Poly] = {}
    if a.degree >= a.chart.N:
        return Form.zero(a.chart, a.degree + 1)
    for idx, coeff in a.terms.items():
        for j in coeff.variables():
            sign, key = _merge((j,), idx)
            if not sign:
                continue
            dc = coeff.diff(j)
            _accumulate(out, key, dc if sign > 0 else -dc)
    return Form._raw(a.chart, a.degree + 1, out)


class EvaluatedForm:
    """A form frozen at a point: a sparse antisymmetric rational tensor."""

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim: int, degree: int, terms: Mapping | None = None):
        self.dim = dim
        self.degree = degree
        out: dict[tuple[int, ...], Fraction] = {}
        for idx, c in (terms or {}).items():
            if len(idx) != degree:
                raise ValueError(f"basis tuple {idx} does not have length {degree}")
            sign, key = canonical_sign(idx)
            if sign:
                _accumulate(out, key, _as_fraction(c) * sign)
        self.terms = out

    @classmethod
    def _raw(cls, dim: int, degree: int, terms: dict) -> "EvaluatedForm":
        f = cls.__new__(cls)
        f.dim, f.degree, f.terms = dim, degree, terms
        return f

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, EvaluatedForm):
            return NotImplemented
        return (self.dim, self.degree, self.terms) == (other.dim, other.degree, other.terms)

    def __neg__(self):
        return EvaluatedForm._raw(self.dim, self.degree, {k: -v for k, v in self.terms.items()})

    def __add__(self, other: "EvaluatedForm") -> "EvaluatedForm":
        if self.degree != other.degree or self.dim != other.dim:
            raise ValueError("incompatible evaluated forms")
        out = dict(self.terms)
        for k, v in other.terms.items():
            _accumulate(out, k, v)
        return EvaluatedForm._raw(self.dim, self.degree, out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c) -> "EvaluatedForm":
        c = _as_fraction(c)
        if not c:
            return EvaluatedForm._raw(self.dim, self.degree, {})
        return EvaluatedForm._raw(self.dim, self.degree, {k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "EvaluatedForm") -> "EvaluatedForm":
        out: dict[tuple[int, ...], Fraction] = {}
        for i, ci in self.terms.items():
            for j, cj in other.terms.items():
                sign, key = _merge(i, j)
                if sign:
                    _accumulate(out, key, ci * cj * sign)
        return EvaluatedForm._raw(self.dim, self.degree + other.degree, out)

    def contract(self, v: Sequence) -> "EvaluatedForm":
        return interior_product(v, self)

    def __call__(self, *vectors: Sequence) -> Fraction:
        """Full evaluation on ``degree`` tangent vectors."""
        if len(vectors) != self.degree:
            raise ValueError(f"expected {self.degree} vectors")
        f = self
        for v in vectors:
            f = interior_product(v, f)
        return f.terms.get((), Fraction(0))

    def __repr__(self):
        return f"EvaluatedForm(degree={self.degree}, terms={self.terms!r})"


def evaluate(a: Form, point: Sequence) -> EvaluatedForm:
    """Substitute coordinate values into every coefficient."""
    if len(point) != a.chart.N:
        raise ValueError(f"point has {len(point)} values, chart has {a.chart.N}")
    out = {}
    for idx, coeff in a.terms.items():
        v = coeff.evaluate(point)
        if v:
            out[idx] = v
    return EvaluatedForm._raw(a.chart.N, a.degree, out)


def interior_product(v: Sequence, a: EvaluatedForm) -> EvaluatedForm:
    """Contraction ``i_v a``: insert ``v`` into the first slot."""
    if a.degree < 1:
        raise ValueError("interior product of a 0-form is undefined")
    out: dict[tuple[int, ...], Fraction] = {}
    for idx, c in a.terms.items():
        for s, i in enumerate(idx):
            vi = v[i]
            if not vi:
                continue
            key = idx[:s] + idx[s + 1:]
            term = c * vi
            _accumulate(out, key, -term if s & 1 else term)
    return EvaluatedForm._raw(a.dim, a.degree - 1, out)


@dataclass(frozen=True)
class Metric:
    """Constant diagonal metric with entries +1 or -1 on the base coordinates."""

    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if any(s not in (1, -1) for s in self.signs):
            raise ValueError("metric signs must be +1 or -1")

    @property
    def n(self) -> int:
        return len(self.signs)

    @property
    def det(self) -> int:
        d = 1
        for s in self.signs:
            d *= s
        return d

    @classmethod
    def lorentz(cls, n: int, signature: str = "mostly-plus") -> "Metric":
        """Lorentz metrics with the timelike axis placed per ``signature``.

        ``mostly-plus`` is diag(+,...,+,-), ``mostly-minus`` is diag(-,...,-,+),
        ``time-first`` is diag(-,+,...,+).
        """
        if signature == "mostly-plus":
            return cls((1,) * (n - 1) + (-1,))
        if signature == "mostly-minus":
            return cls((-1,) * (n - 1) + (1,))
        if signature == "time-first":
            return cls((-1,) + (1,) * (n - 1))
        if signature == "euclidean":
            return cls((1,) * n)
        raise ValueError(f"unknown signature {signature!r}")


def hodge_star(a: Form, metric: Metric) -> Form:
    """Hodge dual of a form supported on the chart's base coordinates.

    Uses epsilon with all indices down, epsilon_{1..n} = +1, indices of the
    input raised with ``metric``.
    """
    chart = a.chart
    base = chart.base_indices
    n = len(base)
    if metric.n != n:
        raise ValueError(f"metric has {metric.n} entries, chart has {n} base coordinates")
    pos = {c: p for p, c in enumerate(base)}
    out: dict[tuple[int, ...], Poly] = {}
    for idx, coeff in a.terms.items():
        try:
            positions = tuple(pos[i] for i in idx)
        except KeyError:
            raise ValueError("hodge_star needs a form on base coordinates only") from None
        comp = tuple(p for p in range(n) if p not in positions)
        sign, _ = canonical_sign(positions + comp)
        for p in positions:
            sign *= metric.signs[p]
        key = tuple(base[p] for p in comp)
        sign2, key = canonical_sign(key)
        _accumulate(out, key, coeff if sign * sign2 > 0 else -coeff)
    return Form._raw(chart, n - a.degree, out)


def hodge_dual_2form(components: Mapping[tuple[int, int], object], metric: Metric, chart: Chart) -> Form:
    """Dual ``(n-2)``-form of the 2-form with components ``F_ij``.

    ``components`` is keyed by pairs of base positions ``0..n-1``; either
    orientation may be given, and if both are, they must be antisymmetric.
    The normalization is 1/(2 (n-2)!) over the full index sum, which equals
    one term per unordered pair.
    """
    n = chart.n
    if n < 3:
        raise ValueError("hodge_dual_2form needs at least 3 base coordinates")
    pairs: dict[tuple[int, int], Poly] = {}
    for (i, j), c in components.items():
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"component ({i}, {j}) outside base range")
        c = Poly.coerce(c)
        if i == j:
            if c:
                raise ValueError("diagonal component of an antisymmetric map")
            continue
        key, val = ((i, j), c) if i < j else ((j, i), -c)
        if key in pairs and pairs[key] != val:
            raise ValueError(f"components for {key} are not antisymmetric")
        pairs[key] = val
    base = chart.base_indices
    F = Form(chart, 2, {(base[i], base[j]): c for (i, j), c in pairs.items()})
    return hodge_star(F, metric)


def basis_tuples(N: int, k: int) -> Iterable[tuple[int, ...]]:
    return combinations(range(N), k)
