"""Reading and writing presentation files.

The format, informally::

    # comments run to end of line
    generators: g, h;            # required, must come first; may be empty

    relation: 1 <= g*h;          # repeatable, order is kept
    relation: g*h <= 2;

    power_universal: 2 + g;      # optional
    mult_set: h, g*h;            # optional, nonempty expression list
    m_set: all;                  # or a monomial list, or exp(g) <= exp(h)

    family {                     # optional
      param ab in [1, 2];        # rational endpoints, ( ) for open ends
      param b in (0, 2];
      constraint: b <= 2*ab;     # optional, polynomials in the params
      value g = ab / b;          # one per generator; polynomial or ratio
      value h = b;
      floor 1/64;                # optional truncation for open endpoints
    }

Expressions are sums of products of powers over the declared names, with
natural number literals; ``^`` binds tighter than ``*`` which binds tighter
than ``+``.  Parsing produces canonical forms, and ``print_presentation``
emits a canonical text whose reparse is structurally identical, so
print-then-parse is a fixed point.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .expr import Expr, Monomial, mono_degree
from .family import DEFAULT_FLOOR, HomFamily, Interval, RatFun
from .presentation import MSet, Presentation

RESERVED = {
    "generators", "relation", "power_universal", "mult_set", "m_set",
    "family", "param", "in", "constraint", "value", "floor", "all", "exp",
}

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)"
    r"|(?P<comment>#[^\n]*)"
    r"|(?P<nl>\n)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<nat>[0-9]+)"
    r"|(?P<op><=|[()+*^,;:{}/\[\]=])"
)


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int, source: str = "<string>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.line = line
        self.col = col


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str, source: str) -> list[_Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col, source)
        kind = m.lastgroup
        tok = m.group()
        if kind == "nl":
            line += 1
            col = 1
        else:
            if kind == "name":
                tokens.append(_Token("name", tok, line, col))
            elif kind == "nat":
                tokens.append(_Token("nat", tok, line, col))
            elif kind == "op":
                tokens.append(_Token(tok, tok, line, col))
            col += len(tok)
        pos = m.end()
    tokens.append(_Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str, source: str):
        self.tokens = _tokenize(text, source)
        self.pos = 0
        self.source = source

    # -- plumbing --

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at(self, kind: str) -> bool:
        return self.peek().kind == kind

    def accept(self, kind: str) -> _Token | None:
        if self.at(kind):
            return self.next()
        return None

    def expect(self, kind: str, what: str | None = None) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = repr(tok.text) if tok.kind != "eof" else "end of input"
            raise self.error(f"expected {what or kind!r}, found {shown}", tok)
        return self.next()

    def error(self, msg: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(msg, tok.line, tok.col, self.source)

    def keyword(self, word: str) -> _Token:
        tok = self.peek()
        if tok.kind != "name" or tok.text != word:
            raise self.error(f"expected {word!r}")
        return self.next()

    # -- expressions over a fixed name environment --

    def expr(self, names: tuple[str, ...]) -> Expr:
        e = self.term(names)
        while self.accept("+"):
            e = e + self.term(names)
        return e

    def term(self, names: tuple[str, ...]) -> Expr:
        e = self.factor(names)
        while self.accept("*"):
            e = e * self.factor(names)
        return e

    def factor(self, names: tuple[str, ...]) -> Expr:
        e = self.atom(names)
        if self.accept("^"):
            tok = self.expect("nat", "an exponent")
            e = e ** int(tok.text)
        return e

    def atom(self, names: tuple[str, ...]) -> Expr:
        tok = self.peek()
        if tok.kind == "nat":
            self.next()
            return Expr.nat(names, int(tok.text))
        if tok.kind == "name":
            if tok.text in RESERVED:
                raise self.error(f"{tok.text!r} is a reserved word", tok)
            if tok.text not in names:
                raise self.error(f"undeclared name {tok.text!r}", tok)
            self.next()
            return Expr.generator(names, tok.text)
        if tok.kind == "(":
            self.next()
            e = self.expr(names)
            self.expect(")")
            return e
        raise self.error("expected an expression", tok)

    def rational(self) -> Fraction:
        num = int(self.expect("nat", "a number").text)
        if self.accept("/"):
            den = int(self.expect("nat", "a denominator").text)
            if den == 0:
                raise self.error("zero denominator")
            return Fraction(num, den)
        return Fraction(num)

    # -- statements --

    def name_decl(self) -> str:
        tok = self.expect("name", "a name")
        if tok.text in RESERVED:
            raise self.error(f"{tok.text!r} is a reserved word", tok)
        return tok.text

    def presentation(self) -> Presentation:
        first = self.peek()
        if not (first.kind == "name" and first.text == "generators"):
            raise self.error("a presentation must start with 'generators:'", first)
        self.next()
        self.expect(":")
        gens: list[str] = []
        if not self.at(";"):
            gens.append(self.name_decl())
            while self.accept(","):
                gens.append(self.name_decl())
        self.expect(";")
        if len(set(gens)) != len(gens):
            raise self.error("duplicate generator", first)
        genv = tuple(gens)

        relations: list[tuple[Expr, Expr]] = []
        power_universal: Expr | None = None
        mult_set: tuple[Expr, ...] | None = None
        m_set: MSet | None = None
        family: HomFamily | None = None

        while not self.at("eof"):
            tok = self.peek()
            if tok.kind != "name":
                raise self.error("expected a section keyword", tok)
            word = tok.text
            if word == "relation":
                self.next()
                self.expect(":")
                lhs = self.expr(genv)
                self.expect("<=")
                rhs = self.expr(genv)
                self.expect(";")
                relations.append((lhs, rhs))
            elif word == "power_universal":
                if power_universal is not None:
                    raise self.error("duplicate power_universal section", tok)
                self.next()
                self.expect(":")
                power_universal = self.expr(genv)
                self.expect(";")
            elif word == "mult_set":
                if mult_set is not None:
                    raise self.error("duplicate mult_set section", tok)
                self.next()
                self.expect(":")
                items = [self.expr(genv)]
                while self.accept(","):
                    items.append(self.expr(genv))
                self.expect(";")
                mult_set = tuple(items)
            elif word == "m_set":
                if m_set is not None:
                    raise self.error("duplicate m_set section", tok)
                self.next()
                self.expect(":")
                m_set = self.m_set_body(genv)
                self.expect(";")
            elif word == "family":
                if family is not None:
                    raise self.error("duplicate family section", tok)
                self.next()
                family = self.family_body(genv)
            elif word == "generators":
                raise self.error("duplicate generators section", tok)
            else:
                raise self.error(f"unknown section {word!r}", tok)

        return Presentation(
            gens=genv,
            relations=tuple(relations),
            power_universal=power_universal,
            mult_set=mult_set or (),
            m_set=m_set,
            family=family,
        )

    def m_set_body(self, genv: tuple[str, ...]) -> MSet:
        tok = self.peek()
        if tok.kind == "name" and tok.text == "all":
            self.next()
            return MSet("all")
        if tok.kind == "name" and tok.text == "exp":
            self.next()
            self.expect("(")
            lo = self.expect("name").text
            self.expect(")")
            self.expect("<=")
            self.keyword("exp")
            self.expect("(")
            hi = self.expect("name").text
            self.expect(")")
            for g in (lo, hi):
                if g not in genv:
                    raise self.error(f"undeclared name {g!r}", tok)
            return MSet("exp_le", lo_gen=lo, hi_gen=hi)
        monos: list[Monomial] = []
        monos.append(self.monomial(genv))
        while self.accept(","):
            monos.append(self.monomial(genv))
        return MSet("list", monomials=tuple(monos))

    def monomial(self, genv: tuple[str, ...]) -> Monomial:
        tok = self.peek()
        e = self.expr(genv)
        if len(e.terms) != 1 or e.terms[0][1] != 1:
            raise self.error(f"{e} is not a monomial", tok)
        return e.terms[0][0]

    def family_body(self, genv: tuple[str, ...]) -> HomFamily:
        self.expect("{")
        params: list[str] = []
        intervals: list[Interval] = []
        constraints: list[tuple[Expr, Expr]] = []
        values: dict[str, RatFun] = {}
        floor = DEFAULT_FLOOR
        # params must all be declared before they are used, which the
        # undeclared-name check enforces without an ordering rule here
        while not self.at("}"):
            tok = self.peek()
            if tok.kind != "name":
                raise self.error("expected a family statement", tok)
            word = tok.text
            if word == "param":
                self.next()
                name = self.name_decl()
                if name in params:
                    raise self.error(f"duplicate parameter {name!r}", tok)
                self.keyword("in")
                intervals.append(self.interval())
                self.expect(";")
                params.append(name)
            elif word == "constraint":
                self.next()
                self.expect(":")
                lhs = self.expr(tuple(params))
                self.expect("<=")
                rhs = self.expr(tuple(params))
                self.expect(";")
                constraints.append((lhs, rhs))
            elif word == "value":
                self.next()
                gname = self.expect("name").text
                if gname not in genv:
                    raise self.error(f"value for undeclared generator {gname!r}", tok)
                if gname in values:
                    raise self.error(f"duplicate value for {gname!r}", tok)
                self.expect("=")
                num = self.expr(tuple(params))
                if self.accept("/"):
                    den = self.expr(tuple(params))
                else:
                    den = Expr.one(tuple(params))
                self.expect(";")
                values[gname] = RatFun(num, den)
            elif word == "floor":
                self.next()
                floor = self.rational()
                self.expect(";")
            else:
                raise self.error(f"unknown family statement {word!r}", tok)
        self.expect("}")
        missing = [g for g in genv if g not in values]
        if missing:
            raise self.error(f"family gives no value for {missing[0]!r}")
        pt = tuple(params)
        # reparse-stability: constraints and values parsed before the last
        # param was declared would have failed already, so pt is complete here
        return HomFamily(
            gens=genv,
            params=pt,
            intervals=tuple(intervals),
            values=tuple(values[g] for g in genv),
            constraints=tuple(constraints),
            floor=floor,
        )

    def interval(self) -> Interval:
        tok = self.peek()
        if self.accept("["):
            lo_open = False
        elif self.accept("("):
            lo_open = True
        else:
            raise self.error("expected '[' or '(' to open an interval", tok)
        lo = self.rational()
        self.expect(",")
        hi = self.rational()
        if self.accept("]"):
            hi_open = False
        elif self.accept(")"):
            hi_open = True
        else:
            raise self.error("expected ']' or ')' to close an interval")
        return Interval(lo, hi, lo_open, hi_open)


def parse_presentation(text: str, source: str = "<string>") -> Presentation:
    parser = _Parser(text, source)
    return parser.presentation()


def load_presentation(path: str) -> Presentation:
    with open(path, encoding="utf-8") as fh:
        return parse_presentation(fh.read(), source=path)


def parse_expr(text: str, gens: tuple[str, ...], source: str = "<arg>") -> Expr:
    """Parse a standalone expression over the given generators."""
    parser = _Parser(text, source)
    e = parser.expr(gens)
    parser.expect("eof", "end of expression")
    return e


# ---- printing ----


def _frac(q: Fraction) -> str:
    return str(q)


def print_presentation(pres: Presentation) -> str:
    out = []
    out.append("generators: " + ", ".join(pres.gens) + ";")
    if pres.relations:
        out.append("")
        for lhs, rhs in pres.relations:
            out.append(f"relation: {lhs} <= {rhs};")
    if pres.power_universal is not None:
        out.append("")
        out.append(f"power_universal: {pres.power_universal};")
    if pres.mult_set:
        out.append("mult_set: " + ", ".join(str(t) for t in pres.mult_set) + ";")
    if pres.m_set is not None:
        out.append("m_set: " + _m_set_str(pres) + ";")
    if pres.family is not None:
        out.append("")
        out.extend(_family_lines(pres.family))
    return "\n".join(out) + "\n"


def _m_set_str(pres: Presentation) -> str:
    ms = pres.m_set
    if ms.kind == "all":
        return "all"
    if ms.kind == "exp_le":
        return f"exp({ms.lo_gen}) <= exp({ms.hi_gen})"
    return ", ".join(str(Expr.monomial(pres.gens, m)) for m in ms.monomials)


def _family_lines(fam: HomFamily) -> list[str]:
    lines = ["family {"]
    for p, iv in zip(fam.params, fam.intervals):
        lines.append(f"  param {p} in {iv};")
    for lhs, rhs in fam.constraints:
        lines.append(f"  constraint: {lhs} <= {rhs};")
    for g, rf in zip(fam.gens, fam.values):
        lines.append(f"  value {g} = {rf};")
    if fam.floor != DEFAULT_FLOOR:
        lines.append(f"  floor {_frac(fam.floor)};")
    lines.append("}")
    return lines
