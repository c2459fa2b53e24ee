"""Parser and printer for ``.eds`` system definitions.

Example::

    # contact structure
    coords x y z p q;
    let th = d(z) - p*d(x) - q*d(y);
    generators th, d(th);
    indep x y;

``^`` is the wedge product, ``*`` multiplies by a scalar (a number, a
coordinate, or a 0-form name) and binds tighter than ``^``, which binds
tighter than ``+`` and ``-``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .eds import EDSystem
from .exterior import Chart, Form, Poly, exterior_derivative, wedge

__all__ = ["ParseError", "parse", "parse_file", "print_eds", "KEYWORDS"]

KEYWORDS = frozenset({"coords", "let", "generators", "indep", "d"})

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<comment>\#[^\n]*)|(?P<num>\d+(?:/\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[;,=+\-^*()])"
)
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class ParseError(ValueError):
    def __init__(self, message: str, text: str, offset: int, token: str = ""):
        self.message = message
        self.offset = offset
        self.token = token
        self.line = text.count("\n", 0, offset) + 1
        self.column = offset - (text.rfind("\n", 0, offset) + 1) + 1
        where = f"line {self.line}, column {self.column}"
        super().__init__(f"{where}: {message}" + (f" (at {token!r})" if token else ""))


@dataclass
class _Tok:
    kind: str
    value: str
    offset: int


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError("unexpected character", text, pos, text[pos])
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.coords: dict[str, int] = {}
        self.lets: dict[str, Form] = {}
        self.chart: Chart | None = None

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.tok
        return ParseError(message, self.text, tok.offset, tok.value)

    def advance(self) -> _Tok:
        t = self.tok
        self.i += 1
        return t

    def at(self, value: str) -> bool:
        return self.tok.kind in ("op", "ident") and self.tok.value == value

    def expect(self, value: str) -> _Tok:
        if not self.at(value):
            raise self.error(f"expected {value!r}")
        return self.advance()

    def ident(self) -> _Tok:
        if self.tok.kind != "ident" or self.tok.value in KEYWORDS:
            raise self.error("expected an identifier")
        return self.advance()

    def parse(self) -> EDSystem:
        self.expect("coords")
        names = []
        while self.tok.kind == "ident" and not self.at("d") and self.tok.value not in KEYWORDS:
            t = self.advance()
            if t.value in self.coords:
                raise self.error("duplicate coordinate", t)
            self.coords[t.value] = len(names)
            names.append(t.value)
        if not names:
            raise self.error("expected at least one coordinate name")
        self.expect(";")
        self.chart = Chart(tuple(names))

        while self.at("let"):
            self.advance()
            t = self.ident()
            if t.value in self.coords or t.value in self.lets:
                raise self.error("name already defined", t)
            self.expect("=")
            self.lets[t.value] = self.expr()
            self.expect(";")

        self.expect("generators")
        gens: list[tuple[str, Form, _Tok]] = []
        if not self.at(";"):
            gens.append(self.generator())
            while self.at(","):
                self.advance()
                gens.append(self.generator())
        self.expect(";")

        self.expect("indep")
        indep = []
        while self.tok.kind == "ident" and self.tok.value not in KEYWORDS:
            t = self.advance()
            if t.value not in self.coords:
                raise self.error("independence variable is not a coordinate", t)
            if self.coords[t.value] in indep:
                raise self.error("repeated independence variable", t)
            indep.append(self.coords[t.value])
        if not indep:
            raise self.error("expected at least one independence coordinate")
        self.expect(";")
        if self.tok.kind != "eof":
            raise self.error("unexpected text after indep statement")

        chart = Chart(self.chart.names, tuple(indep))
        seen = set()
        out = []
        for name, form, tok in gens:
            if name in seen:
                raise self.error(f"duplicate generator {name!r}", tok)
            seen.add(name)
            out.append((name, Form._raw(chart, form.degree, form.terms)))
        return EDSystem(chart, out, tuple(indep))

    def generator(self) -> tuple[str, Form, _Tok]:
        start = self.tok
        first = self.i
        form = self.expr()
        if self.i == first + 1 and start.kind == "ident":
            name = start.value
        else:
            end = self.tok.offset
            name = "".join(self.text[start.offset:end].split())
        if form.degree < 1:
            raise self.error("generator is a 0-form; degree >= 1 required", start)
        if form.degree > self.chart.N:
            raise self.error(f"generator degree {form.degree} exceeds {self.chart.N} coordinates", start)
        return name, form, start

    def expr(self) -> Form:
        negate = False
        if self.at("-"):
            self.advance()
            negate = True
        left = self.term()
        if negate:
            left = -left
        while self.at("+") or self.at("-"):
            op = self.advance()
            right = self.term()
            if right.degree != left.degree:
                raise self.error(
                    f"cannot add forms of degree {left.degree} and {right.degree}", op
                )
            left = left + right if op.value == "+" else left - right
        return left

    def term(self) -> Form:
        left = self.atom()
        while self.at("^"):
            self.advance()
            left = wedge(left, self.atom())
        return left

    def atom(self) -> Form:
        t = self.tok
        if t.kind == "num":
            self.advance()
            try:
                number = Fraction(t.value)
            except ZeroDivisionError:
                raise self.error("zero denominator", t) from None
            value = Form.scalar(self.chart, number)
            return self.scaled(value, t)
        if self.at("d"):
            self.advance()
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return exterior_derivative(inner)
        if self.at("("):
            self.advance()
            inner = self.expr()
            self.expect(")")
            return inner
        if t.kind == "ident" and t.value not in KEYWORDS:
            self.advance()
            if t.value in self.coords:
                value = Form.scalar(self.chart, Poly.var(self.coords[t.value]))
            elif t.value in self.lets:
                value = self.lets[t.value]
            else:
                raise self.error("undefined name", t)
            return self.scaled(value, t)
        raise self.error("expected a number, name, d(...) or parenthesized expression")

    def scaled(self, value: Form, tok: _Tok) -> Form:
        if not self.at("*"):
            return value
        star = self.advance()
        if value.degree != 0:
            raise self.error(f"left operand of '*' has degree {value.degree}; must be a 0-form", star)
        right = self.atom()
        coeff = value.terms.get((), Poly())
        return right * coeff


def parse(text: str) -> EDSystem:
    """Parse ``.eds`` source into an :class:`EDSystem`. Raises :class:`ParseError`."""
    return _Parser(text).parse()


def parse_file(path) -> EDSystem:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _form_expr(form: Form) -> str:
    names = form.chart.names
    if not form.terms:
        if form.degree == 0:
            return "0"
        return "0*" + "^".join(f"d({names[i]})" for i in range(form.degree))
    pieces: list[tuple[bool, str]] = []
    for idx in sorted(form.terms):
        coeff = form.terms[idx]
        basis = "^".join(f"d({names[i]})" for i in idx)
        for mono in sorted(coeff.terms):
            c = coeff.terms[mono]
            factors = [names[i] for i in mono]
            if abs(c) != 1 or not (factors or basis):
                factors.insert(0, _rational(abs(c)))
            if basis:
                factors.append(basis)
            pieces.append((c < 0, "*".join(factors)))
    out = []
    for k, (neg, s) in enumerate(pieces):
        if k == 0:
            out.append(("-" if neg else "") + s)
        else:
            out.append((" - " if neg else " + ") + s)
    return "".join(out)


def print_eds(eds: EDSystem) -> str:
    """Render ``eds`` as ``.eds`` text that parses back to an equal system."""
    names = eds.chart.names
    for name in names:
        if not _IDENT.match(name) or name in KEYWORDS:
            raise ValueError(f"coordinate name {name!r} is not expressible in .eds syntax")
    taken = set(names)
    lets = []
    for k, (gname, _) in enumerate(eds.generators):
        label = gname if _IDENT.match(gname) and gname not in KEYWORDS else f"g{k}"
        while label in taken:
            label = f"{label}_"
        taken.add(label)
        lets.append(label)
    lines = [f"coords {' '.join(names)};"]
    for label, (_, form) in zip(lets, eds.generators):
        lines.append(f"let {label} = {_form_expr(form)};")
    lines.append(f"generators {', '.join(lets)};")
    lines.append(f"indep {' '.join(names[i] for i in eds.independence)};")
    return "\n".join(lines) + "\n"
