"""Text files for certificates, extension certificates, and witnesses.

Every file is self-contained: it embeds the presentation it speaks about,
states its goal, and carries the full evidence.  Re-certifying a file needs
nothing but the file.

Layout, shared by all three kinds:

    kind: certificate;            # or ext-certificate, or witness
    presentation {
    ...                           # presentation grammar, verbatim
    }
    goal: <lhs> <= <rhs>;         # witnesses write <~ instead of <=
    proof:
      <one indented tree>

Derivation trees are indented two spaces per level and every node states
its full concluded inequality after a '::' separator:

    trans :: 1 <= 2*x
      base 0 :: 1 <= x
      mul_cong x :: x <= 2*x
        nat_embed 1 2 :: 1 <= 2

The stated conclusions are what replay checks against, so editing any line
of a tree is detected.  Witness schemas serialize as the rule programs they
are, one line per node with sub-programs and embedded certificates indented
below, never as expanded per-power trees.
"""

from __future__ import annotations

from dataclasses import dataclass

from .asymptotic import (
    AsymptoticError,
    AsymptoticWitness,
    ConstantK,
    Horizon,
    Periodic,
    UniformDoubled,
    verify_witness,
)
from .certificate import Certificate, replay
from .expr import Expr
from .grammar import ParseError, parse_expr, parse_presentation, print_presentation
from .localization import CancelDoubled
from .orderext import ExtCertificate, replay_ext
from .presentation import Presentation


class SerializeError(ValueError):
    """Raised when a file cannot be written or read back faithfully."""


INDENT = "  "

# positional argument kinds for each schema rule, matching the tuple layout
# after the tag
_SCHEMA_ARGS = {
    "pow": ("cert",),
    "pow_div": ("cert", "int"),
    "residues": ("int", "schemas"),
    "shift": ("schema", "int", "cert", "cert", "expr", "expr", "expr", "sched"),
    "raise": ("schema", "sched", "cert"),
    "compose": ("schema", "schema", "expr", "sched"),
    "mul": ("schema", "schema"),
    "mulz": ("schema", "expr"),
    "scale": ("schema", "expr"),
    "addz": ("schema", "expr", "int", "cert"),
    "convert": ("schema", "cert", "expr", "sched"),
    "cancel": ("cert", "cert", "cert", "int", "expr", "expr", "expr", "expr"),
    "small": ("schema", "cert", "cert", "int", "expr", "expr", "expr"),
    "dompow": ("expr", "int", "expr", "int"),
    "inner_uniform": ("schema", "int", "int", "int", "cert"),
    "flatten": (
        "doubled",
        "int",
        "int",
        "int",
        "int",
        "cert",
        "cert",
        "expr",
        "expr",
        "expr",
        "cert",
        "int",
    ),
}


# ---- writing ----


def _conclusion_str(conclusion) -> str:
    return f"{conclusion[0]} <= {conclusion[1]}"


def _cert_lines(cert: Certificate, depth: int, out: list) -> None:
    head = cert.kind
    if cert.kind == "base":
        head = f"base {cert.index}"
    elif cert.kind == "nat_embed":
        head = f"nat_embed {cert.nats[0]} {cert.nats[1]}"
    elif cert.kind in ("add_cong", "mul_cong"):
        head = f"{cert.kind} {cert.context}"
    out.append(f"{INDENT * depth}{head} :: {_conclusion_str(cert.conclusion)}")
    for child in cert.children:
        _cert_lines(child, depth + 1, out)


def _sched_line(sched, depth: int) -> str:
    modulus, ks = sched
    if modulus != len(ks):
        raise SerializeError("schedule modulus disagrees with its table")
    return f"{INDENT * depth}sched {modulus} " + " ".join(str(k) for k in ks)


def _witness_lines(w: AsymptoticWitness, depth: int, out: list) -> None:
    pad = INDENT * depth
    out.append(f"{pad}witness")
    out.append(f"{pad}{INDENT}expr {w.lhs}")
    out.append(f"{pad}{INDENT}expr {w.rhs}")
    out.append(f"{pad}{INDENT}expr {w.u}")
    env = w.envelope
    if isinstance(env, ConstantK):
        out.append(f"{pad}{INDENT}envelope constant {env.k}")
    elif isinstance(env, Periodic):
        out.append(f"{pad}{INDENT}envelope periodic " + " ".join(str(k) for k in env.ks))
    elif isinstance(env, Horizon):
        out.append(f"{pad}{INDENT}envelope horizon")
    else:
        raise SerializeError(f"unknown envelope {type(env).__name__}")
    out.append(f"{pad}{INDENT}cert")
    _cert_lines(w.cert_u, depth + 2, out)
    if isinstance(env, Horizon):
        for (n, k), cert in zip(env.entries, env.certs):
            if cert is None:
                raise SerializeError(
                    f"horizon entry n = {n} has no certificate to record"
                )
            out.append(f"{pad}{INDENT}entry {n} {k}")
            out.append(f"{pad}{INDENT}{INDENT}cert")
            _cert_lines(cert, depth + 3, out)
    else:
        _schema_lines(env.schema, depth + 1, out)


def _schema_lines(schema: tuple, depth: int, out: list) -> None:
    tag = schema[0]
    kinds = _SCHEMA_ARGS.get(tag)
    if kinds is None:
        raise SerializeError(f"unknown schema rule '{tag}'")
    args = schema[1:]
    if len(args) != len(kinds):
        raise SerializeError(f"schema rule '{tag}' carries {len(args)} arguments, expected {len(kinds)}")
    ints = [str(a) for a, kind in zip(args, kinds) if kind == "int"]
    head = f"{INDENT * depth}schema {tag}"
    if ints:
        head += " " + " ".join(ints)
    out.append(head)
    for arg, kind in zip(args, kinds):
        if kind == "int":
            continue
        if kind == "expr":
            out.append(f"{INDENT * (depth + 1)}expr {arg}")
        elif kind == "sched":
            out.append(_sched_line(arg, depth + 1))
        elif kind == "cert":
            out.append(f"{INDENT * (depth + 1)}cert")
            _cert_lines(arg, depth + 2, out)
        elif kind == "schema":
            _schema_lines(arg, depth + 1, out)
        elif kind == "schemas":
            out.append(f"{INDENT * (depth + 1)}schemas {len(arg)}")
            for sub in arg:
                _schema_lines(sub, depth + 2, out)
        elif kind == "doubled":
            _doubled_lines(arg, depth + 1, out)
        else:
            raise SerializeError(f"unknown argument kind '{kind}'")


def _doubled_lines(doubled, depth: int, out: list) -> None:
    pad = INDENT * depth
    if isinstance(doubled, UniformDoubled):
        out.append(f"{pad}doubled uniform {doubled.l_extra}")
        _witness_lines(doubled.base, depth + 1, out)
        return
    if isinstance(doubled, CancelDoubled):
        out.append(f"{pad}doubled cancel {doubled.k_out} {doubled.entry_k}")
        out.append(f"{pad}{INDENT}expr {doubled.x}")
        out.append(f"{pad}{INDENT}expr {doubled.y}")
        out.append(f"{pad}{INDENT}expr {doubled.u}")
        out.append(f"{pad}{INDENT}cert")
        _cert_lines(doubled.cert_u, depth + 2, out)
        out.append(f"{pad}{INDENT}expr {doubled.r}")
        out.append(f"{pad}{INDENT}cert")
        _cert_lines(doubled.entry_inv, depth + 2, out)
        out.append(f"{pad}{INDENT}cert")
        _cert_lines(doubled.entry_dom, depth + 2, out)
        _schema_lines(doubled.base_schema, depth + 1, out)
        return
    raise SerializeError(f"unknown doubled family {type(doubled).__name__}")


def _header(kind: str, pres: Presentation, note: str | None) -> list:
    out = []
    if note:
        for line in note.splitlines():
            out.append(f"# {line}".rstrip())
    out.append(f"kind: {kind};")
    out.append("presentation {")
    out.append(print_presentation(pres).rstrip("\n"))
    out.append("}")
    return out


def write_certificate(pres: Presentation, cert: Certificate, note: str | None = None) -> str:
    """Render a derivation certificate as a self-contained file."""
    out = _header("certificate", pres, note)
    out.append(f"goal: {_conclusion_str(cert.conclusion)};")
    out.append("proof:")
    _cert_lines(cert, 1, out)
    return "\n".join(out) + "\n"


def _ext_depth(ec: ExtCertificate) -> int:
    depth = 1
    while isinstance(ec.inner, ExtCertificate):
        depth += 1
        ec = ec.inner
    return depth


def _layered_relations(ec: ExtCertificate, relations) -> list:
    """Normalize the relations argument to one pair list per extension
    layer, outermost first.  A flat list of pairs is accepted when the
    certificate has a single layer."""
    depth = _ext_depth(ec)
    rel = list(relations)
    flat = all(
        isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], Expr)
        for item in rel
    )
    if flat:
        if depth != 1:
            raise SerializeError(
                f"certificate has {depth} extension layers; pass one pair list per layer"
            )
        return [rel]
    layers = [list(layer) for layer in rel]
    if len(layers) != depth:
        raise SerializeError(
            f"certificate has {depth} extension layers, got {len(layers)} pair lists"
        )
    return layers


def _ext_lines(ec: ExtCertificate, layers: list, depth: int, out: list) -> None:
    pad = INDENT * depth
    out.append(f"{pad}ext :: {_conclusion_str(ec.conclusion)}")
    for x, y in layers[0]:
        out.append(f"{pad}{INDENT}pair {x} ~ {y}")
    for s, x, y in ec.triples:
        out.append(f"{pad}{INDENT}triple {s} ~ {x} ~ {y}")
    out.append(f"{pad}{INDENT}inner")
    if isinstance(ec.inner, ExtCertificate):
        _ext_lines(ec.inner, layers[1:], depth + 2, out)
    else:
        _cert_lines(ec.inner, depth + 2, out)


def write_ext_certificate(
    pres: Presentation, ec: ExtCertificate, relations, note: str | None = None
) -> str:
    """Render an extension certificate together with the relation pairs it
    is judged against.  For nested certificates pass one pair list per
    layer, outermost first; each layer records its own relation."""
    layers = _layered_relations(ec, relations)
    out = _header("ext-certificate", pres, note)
    out.append(f"goal: {_conclusion_str(ec.conclusion)};")
    out.append("proof:")
    _ext_lines(ec, layers, 1, out)
    return "\n".join(out) + "\n"


def write_witness(pres: Presentation, w: AsymptoticWitness, note: str | None = None) -> str:
    """Render an asymptotic witness; the envelope schema is written as a
    rule program."""
    out = _header("witness", pres, note)
    out.append(f"goal: {w.lhs} <~ {w.rhs};")
    out.append("proof:")
    _witness_lines(w, 1, out)
    return "\n".join(out) + "\n"


# ---- reading ----


@dataclass(frozen=True)
class ParsedFile:
    """A deserialized file: which kind it is, the presentation it embeds,
    the goal it states, and the evidence payload.

    payload is a Certificate, a (ExtCertificate, layers) pair where layers
    is one relation pair list per extension layer, or an AsymptoticWitness.
    """

    kind: str
    pres: Presentation
    goal: tuple[Expr, Expr]
    payload: object


@dataclass(frozen=True)
class _Line:
    number: int
    depth: int
    text: str


class _Cursor:
    def __init__(self, lines, source):
        self.lines = lines
        self.pos = 0
        self.source = source

    def peek(self):
        if self.pos < len(self.lines):
            return self.lines[self.pos]
        return None

    def take(self) -> _Line:
        line = self.peek()
        if line is None:
            raise SerializeError(f"{self.source}: unexpected end of file")
        self.pos += 1
        return line

    def expect(self, depth: int, what: str) -> _Line:
        line = self.take()
        if line.depth != depth:
            raise SerializeError(
                f"{self.source}:{line.number}: expected {what} at depth {depth}, "
                f"got '{line.text}' at depth {line.depth}"
            )
        return line


def _tree_cursor(raw_lines, source) -> _Cursor:
    lines = []
    for number, raw in raw_lines:
        stripped = raw.rstrip()
        if not stripped or stripped.lstrip().startswith("#"):
            continue
        spaces = len(stripped) - len(stripped.lstrip(" "))
        if spaces % len(INDENT) != 0:
            raise SerializeError(f"{source}:{number}: indentation is not a multiple of two spaces")
        lines.append(_Line(number, spaces // len(INDENT), stripped.lstrip(" ")))
    return _Cursor(lines, source)


def _split_conclusion(line: _Line, source) -> tuple[str, str]:
    if " :: " not in line.text:
        raise SerializeError(f"{source}:{line.number}: node is missing its ':: conclusion'")
    head, conclusion = line.text.split(" :: ", 1)
    return head, conclusion


def _parse_pair(text: str, gens, source, line, sep: str = " <= ") -> tuple[Expr, Expr]:
    if sep not in text:
        raise SerializeError(f"{source}:{line}: expected '<lhs>{sep}<rhs>', got '{text}'")
    a, b = text.split(sep, 1)
    try:
        return parse_expr(a.strip(), gens, source), parse_expr(b.strip(), gens, source)
    except ParseError as exc:
        raise SerializeError(f"{source}:{line}: {exc}") from exc


def _int_args(tokens, count, source, number) -> list:
    if len(tokens) != count:
        raise SerializeError(f"{source}:{number}: expected {count} integer arguments, got {len(tokens)}")
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise SerializeError(f"{source}:{number}: bad integer: {exc}") from exc


def _parse_cert_node(cur: _Cursor, depth: int, gens) -> Certificate:
    source = cur.source
    line = cur.expect(depth, "a derivation node")
    head, conclusion_text = _split_conclusion(line, source)
    tokens = head.split()
    rule = tokens[0]
    conclusion = _parse_pair(conclusion_text, gens, source, line.number)
    children = []
    while True:
        nxt = cur.peek()
        if nxt is None or nxt.depth <= depth:
            break
        if nxt.depth != depth + 1:
            raise SerializeError(f"{source}:{nxt.number}: child skips an indentation level")
        children.append(_parse_cert_node(cur, depth + 1, gens))
    children = tuple(children)
    size = 1 + sum(c.size for c in children)

    def need_children(n: int):
        if len(children) != n:
            raise SerializeError(
                f"{source}:{line.number}: rule '{rule}' takes {n} sub-derivations, got {len(children)}"
            )

    if rule in ("refl", "zero_one"):
        need_children(0)
        if len(tokens) != 1:
            raise SerializeError(f"{source}:{line.number}: rule '{rule}' takes no arguments")
        return Certificate(rule, conclusion, size=size)
    if rule == "base":
        need_children(0)
        (index,) = _int_args(tokens[1:], 1, source, line.number)
        return Certificate("base", conclusion, index=index, size=size)
    if rule == "nat_embed":
        need_children(0)
        n, m = _int_args(tokens[1:], 2, source, line.number)
        return Certificate("nat_embed", conclusion, nats=(n, m), size=size)
    if rule in ("add_cong", "mul_cong"):
        need_children(1)
        ctx_text = head[len(rule) :].strip()
        if not ctx_text:
            raise SerializeError(f"{source}:{line.number}: rule '{rule}' needs its context expression")
        try:
            ctx = parse_expr(ctx_text, gens, source)
        except ParseError as exc:
            raise SerializeError(f"{source}:{line.number}: {exc}") from exc
        return Certificate(rule, conclusion, children=children, context=ctx, size=size)
    if rule == "trans":
        need_children(2)
        if len(tokens) != 1:
            raise SerializeError(f"{source}:{line.number}: rule 'trans' takes no arguments")
        return Certificate("trans", conclusion, children=children, size=size)
    raise SerializeError(f"{source}:{line.number}: unknown derivation rule '{rule}'")


def _parse_marked_cert(cur: _Cursor, depth: int, gens) -> Certificate:
    line = cur.expect(depth, "'cert'")
    if line.text != "cert":
        raise SerializeError(f"{cur.source}:{line.number}: expected 'cert', got '{line.text}'")
    return _parse_cert_node(cur, depth + 1, gens)


def _parse_expr_line(cur: _Cursor, depth: int, gens) -> Expr:
    line = cur.expect(depth, "'expr'")
    if not line.text.startswith("expr "):
        raise SerializeError(f"{cur.source}:{line.number}: expected 'expr <expression>', got '{line.text}'")
    try:
        return parse_expr(line.text[len("expr ") :], gens, cur.source)
    except ParseError as exc:
        raise SerializeError(f"{cur.source}:{line.number}: {exc}") from exc


def _parse_sched_line(cur: _Cursor, depth: int) -> tuple:
    line = cur.expect(depth, "'sched'")
    tokens = line.text.split()
    if tokens[0] != "sched" or len(tokens) < 2:
        raise SerializeError(f"{cur.source}:{line.number}: expected 'sched <modulus> <ks...>'")
    values = _int_args(tokens[1:], len(tokens) - 1, cur.source, line.number)
    modulus, ks = values[0], tuple(values[1:])
    if modulus != len(ks):
        raise SerializeError(
            f"{cur.source}:{line.number}: schedule states modulus {modulus} but lists {len(ks)} values"
        )
    return (modulus, ks)


def _parse_schema_node(cur: _Cursor, depth: int, gens) -> tuple:
    source = cur.source
    line = cur.expect(depth, "a schema rule")
    tokens = line.text.split()
    if tokens[0] != "schema" or len(tokens) < 2:
        raise SerializeError(f"{source}:{line.number}: expected 'schema <rule>', got '{line.text}'")
    tag = tokens[1]
    kinds = _SCHEMA_ARGS.get(tag)
    if kinds is None:
        raise SerializeError(f"{source}:{line.number}: unknown schema rule '{tag}'")
    ints = _int_args(tokens[2:], sum(1 for k in kinds if k == "int"), source, line.number)
    int_iter = iter(ints)
    args = []
    for kind in kinds:
        if kind == "int":
            args.append(next(int_iter))
        elif kind == "expr":
            args.append(_parse_expr_line(cur, depth + 1, gens))
        elif kind == "sched":
            args.append(_parse_sched_line(cur, depth + 1))
        elif kind == "cert":
            args.append(_parse_marked_cert(cur, depth + 1, gens))
        elif kind == "schema":
            args.append(_parse_schema_node(cur, depth + 1, gens))
        elif kind == "schemas":
            marker = cur.expect(depth + 1, "'schemas'")
            mtok = marker.text.split()
            if mtok[0] != "schemas":
                raise SerializeError(f"{source}:{marker.number}: expected 'schemas <count>'")
            (count,) = _int_args(mtok[1:], 1, source, marker.number)
            args.append(tuple(_parse_schema_node(cur, depth + 2, gens) for _ in range(count)))
        elif kind == "doubled":
            args.append(_parse_doubled(cur, depth + 1, gens))
    return (tag, *args)


def _parse_doubled(cur: _Cursor, depth: int, gens):
    source = cur.source
    line = cur.expect(depth, "'doubled'")
    tokens = line.text.split()
    if tokens[0] != "doubled" or len(tokens) < 2:
        raise SerializeError(f"{source}:{line.number}: expected 'doubled uniform|cancel ...'")
    if tokens[1] == "uniform":
        (l_extra,) = _int_args(tokens[2:], 1, source, line.number)
        base = _parse_witness_node(cur, depth + 1, gens)
        try:
            return UniformDoubled(base, l_extra)
        except AsymptoticError as exc:
            raise SerializeError(f"{source}:{line.number}: {exc}") from exc
    if tokens[1] == "cancel":
        k_out, entry_k = _int_args(tokens[2:], 2, source, line.number)
        x = _parse_expr_line(cur, depth + 1, gens)
        y = _parse_expr_line(cur, depth + 1, gens)
        u = _parse_expr_line(cur, depth + 1, gens)
        cert_u = _parse_marked_cert(cur, depth + 1, gens)
        r = _parse_expr_line(cur, depth + 1, gens)
        entry_inv = _parse_marked_cert(cur, depth + 1, gens)
        entry_dom = _parse_marked_cert(cur, depth + 1, gens)
        base_schema = _parse_schema_node(cur, depth + 1, gens)
        return CancelDoubled(x, y, u, cert_u, k_out, r, entry_k, entry_inv, entry_dom, base_schema)
    raise SerializeError(f"{source}:{line.number}: unknown doubled family '{tokens[1]}'")


def _parse_witness_node(cur: _Cursor, depth: int, gens) -> AsymptoticWitness:
    source = cur.source
    line = cur.expect(depth, "'witness'")
    if line.text != "witness":
        raise SerializeError(f"{source}:{line.number}: expected 'witness', got '{line.text}'")
    lhs = _parse_expr_line(cur, depth + 1, gens)
    rhs = _parse_expr_line(cur, depth + 1, gens)
    u = _parse_expr_line(cur, depth + 1, gens)
    env_line = cur.expect(depth + 1, "'envelope'")
    tokens = env_line.text.split()
    if tokens[0] != "envelope" or len(tokens) < 2:
        raise SerializeError(f"{source}:{env_line.number}: expected 'envelope constant|periodic|horizon'")
    shape = tokens[1]
    cert_u = None
    if shape == "constant":
        (k,) = _int_args(tokens[2:], 1, source, env_line.number)
        cert_u = _parse_marked_cert(cur, depth + 1, gens)
        envelope = ConstantK(k, _parse_schema_node(cur, depth + 1, gens))
    elif shape == "periodic":
        ks = tuple(_int_args(tokens[2:], len(tokens) - 2, source, env_line.number))
        if not ks:
            raise SerializeError(f"{source}:{env_line.number}: periodic envelope lists no values")
        cert_u = _parse_marked_cert(cur, depth + 1, gens)
        envelope = Periodic(ks, _parse_schema_node(cur, depth + 1, gens))
    elif shape == "horizon":
        if len(tokens) != 2:
            raise SerializeError(f"{source}:{env_line.number}: 'envelope horizon' takes no arguments")
        cert_u = _parse_marked_cert(cur, depth + 1, gens)
        entries = []
        certs = []
        while True:
            nxt = cur.peek()
            if nxt is None or nxt.depth <= depth or not nxt.text.startswith("entry "):
                break
            entry = cur.expect(depth + 1, "'entry'")
            n, k = _int_args(entry.text.split()[1:], 2, source, entry.number)
            entries.append((n, k))
            certs.append(_parse_marked_cert(cur, depth + 2, gens))
        envelope = Horizon(tuple(entries), tuple(certs))
    else:
        raise SerializeError(f"{source}:{env_line.number}: unknown envelope shape '{shape}'")
    return AsymptoticWitness(lhs, rhs, u, cert_u, envelope)


def _parse_ext_node(cur: _Cursor, depth: int, gens) -> tuple[ExtCertificate, list]:
    source = cur.source
    line = cur.expect(depth, "'ext'")
    head, conclusion_text = _split_conclusion(line, source)
    if head.strip() != "ext":
        raise SerializeError(f"{source}:{line.number}: expected 'ext :: <goal>', got '{line.text}'")
    conclusion = _parse_pair(conclusion_text, gens, source, line.number)

    def two(text, number):
        parts = text.split(" ~ ")
        if len(parts) != 2:
            raise SerializeError(f"{source}:{number}: expected '<x> ~ <y>'")
        return tuple(parse_expr(p.strip(), gens, source) for p in parts)

    def three(text, number):
        parts = text.split(" ~ ")
        if len(parts) != 3:
            raise SerializeError(f"{source}:{number}: expected '<s> ~ <x> ~ <y>'")
        return tuple(parse_expr(p.strip(), gens, source) for p in parts)

    pairs = []
    triples = []
    while True:
        nxt = cur.peek()
        if nxt is None or nxt.depth != depth + 1:
            break
        if nxt.text.startswith("pair "):
            cur.take()
            pairs.append(two(nxt.text[len("pair ") :], nxt.number))
        elif nxt.text.startswith("triple "):
            cur.take()
            triples.append(three(nxt.text[len("triple ") :], nxt.number))
        else:
            break
    marker = cur.expect(depth + 1, "'inner'")
    if marker.text != "inner":
        raise SerializeError(f"{source}:{marker.number}: expected 'inner', got '{marker.text}'")
    nxt = cur.peek()
    if nxt is not None and nxt.depth == depth + 2 and nxt.text.startswith("ext "):
        inner, inner_layers = _parse_ext_node(cur, depth + 2, gens)
        layers = [pairs] + inner_layers
    else:
        inner = _parse_cert_node(cur, depth + 2, gens)
        layers = [pairs]
    return ExtCertificate(tuple(triples), inner, conclusion), layers


_GOAL_SEPARATORS = {"certificate": " <= ", "ext-certificate": " <= ", "witness": " <~ "}


def parse_certificate_file(text: str, source: str = "<certificate>") -> ParsedFile:
    """Read any of the three file kinds back into live objects."""
    numbered = list(enumerate(text.splitlines(), start=1))
    pos = 0

    def next_meaningful():
        nonlocal pos
        while pos < len(numbered):
            number, raw = numbered[pos]
            stripped = raw.strip()
            pos += 1
            if stripped and not stripped.startswith("#"):
                return number, stripped
        return None, None

    number, line = next_meaningful()
    if line is None or not line.startswith("kind:") or not line.endswith(";"):
        raise SerializeError(f"{source}:{number or 1}: file must open with 'kind: <kind>;'")
    kind = line[len("kind:") : -1].strip()
    if kind not in _GOAL_SEPARATORS:
        raise SerializeError(f"{source}:{number}: unknown file kind '{kind}'")

    number, line = next_meaningful()
    if line != "presentation {":
        raise SerializeError(f"{source}:{number or 1}: expected 'presentation {{'")
    body = []
    level = 1
    while True:
        if pos >= len(numbered):
            raise SerializeError(f"{source}: presentation block is never closed")
        pnum, raw = numbered[pos]
        pos += 1
        stripped = raw.strip()
        if stripped.endswith("{"):
            level += 1
        elif stripped == "}":
            level -= 1
            if level == 0:
                break
        body.append(raw)
    try:
        pres = parse_presentation("\n".join(body) + "\n", source)
    except ParseError as exc:
        raise SerializeError(f"{source}: embedded presentation: {exc}") from exc

    number, line = next_meaningful()
    if line is None or not line.startswith("goal:") or not line.endswith(";"):
        raise SerializeError(f"{source}:{number or 1}: expected 'goal: <lhs> {_GOAL_SEPARATORS[kind].strip()} <rhs>;'")
    goal = _parse_pair(line[len("goal:") : -1].strip(), pres.gens, source, number, _GOAL_SEPARATORS[kind])

    number, line = next_meaningful()
    if line != "proof:":
        raise SerializeError(f"{source}:{number or 1}: expected 'proof:'")

    cur = _tree_cursor(numbered[pos:], source)
    if kind == "certificate":
        payload = _parse_cert_node(cur, 1, pres.gens)
    elif kind == "ext-certificate":
        payload = _parse_ext_node(cur, 1, pres.gens)
    else:
        payload = _parse_witness_node(cur, 1, pres.gens)
    trailing = cur.peek()
    if trailing is not None:
        raise SerializeError(f"{source}:{trailing.number}: unexpected content after the proof")
    return ParsedFile(kind, pres, goal, payload)


# ---- re-certification ----


def _replay_layered(pres: Presentation, ec: ExtCertificate, layers: list):
    if isinstance(ec.inner, ExtCertificate):
        def inner_replay(inner):
            return _replay_layered(pres, inner, layers[1:])

        return replay_ext(pres, layers[0], ec, inner_replay)
    return replay_ext(pres, layers[0], ec)


def certify_file(parsed: ParsedFile, horizon: int = 12) -> str:
    """Replay the evidence a parsed file carries and confirm it concludes
    the stated goal.  Returns a one-line description; raises on any
    mismatch."""
    lhs, rhs = parsed.goal
    if parsed.kind == "certificate":
        got = replay(parsed.pres, parsed.payload)
        if got != parsed.goal:
            raise SerializeError(
                f"certificate concludes {_conclusion_str(got)}, file claims {_conclusion_str(parsed.goal)}"
            )
        return f"certificate replays: {lhs} <= {rhs} (size {parsed.payload.size})"
    if parsed.kind == "ext-certificate":
        ec, layers = parsed.payload
        got = _replay_layered(parsed.pres, ec, layers)
        if got != parsed.goal:
            raise SerializeError(
                f"certificate concludes {_conclusion_str(got)}, file claims {_conclusion_str(parsed.goal)}"
            )
        return f"extension certificate replays: {lhs} <= {rhs} ({_ext_depth(ec)} layer(s))"
    w = parsed.payload
    if (w.lhs, w.rhs) != parsed.goal:
        raise SerializeError(
            f"witness compares ({w.lhs}, {w.rhs}), file claims ({lhs}, {rhs})"
        )
    verify_witness(parsed.pres, w, horizon)
    if isinstance(w.envelope, Horizon):
        ns = ", ".join(str(n) for n, _ in w.envelope.entries)
        return f"witness evidence replays at n = {ns} (no envelope; not conclusive)"
    return f"witness replays to horizon {horizon}: {lhs} <~ {rhs} via {w.u}"


def certify_text(text: str, source: str = "<certificate>", horizon: int = 12) -> str:
    return certify_file(parse_certificate_file(text, source), horizon)
