"""Independent oracles the tests check library answers against.

Nothing here imports the library's search, replay, or evaluation code.
Expressions are re-read from their printed form by a tiny evaluator, and
the preorder closure is rebuilt by brute-force saturation over a bounded
expression universe.  Agreement between two implementations that share no
code is the point.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import product

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z_][A-Za-z_0-9]*|\^|\*|\+)")


def eval_text(text: str, values: dict[str, Fraction]) -> Fraction:
    """Evaluate a printed expression (integers, names, +, *, ^) at rational
    generator values.  Grammar: sum of products of powers."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise ValueError(f"unreadable expression at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()

    def atom(i):
        t = tokens[i]
        if t.isdigit():
            base = Fraction(int(t))
        else:
            if t not in values:
                raise ValueError(f"no value for {t!r}")
            base = values[t]
        i += 1
        if i < len(tokens) and tokens[i] == "^":
            exp = int(tokens[i + 1])
            return base**exp, i + 2
        return base, i

    def term(i):
        total, i = atom(i)
        while i < len(tokens) and tokens[i] == "*":
            nxt, i = atom(i + 1)
            total *= nxt
        return total, i

    total, i = term(0)
    while i < len(tokens) and tokens[i] == "+":
        nxt, i = term(i + 1)
        total += nxt
    if i != len(tokens):
        raise ValueError(f"trailing tokens {tokens[i:]!r}")
    return total


def eval_expr(e, values: dict[str, Fraction]) -> Fraction:
    return eval_text(str(e), values)


def endpoint_gap(a: int, p: int, b: int, q: int) -> Fraction:
    """min over c in {1, 2} of a*c^p - b*c^q, the duality oracle for the
    one-generator box family with endpoints 1 and 2."""
    return min(Fraction(a) * c**p - Fraction(b) * c**q for c in (1, 2))


# ---- brute-force closure over a bounded universe ----


def universe(pres, max_degree: int, max_coeff: int):
    """Every canonical expression over the generators whose monomials stay
    within the degree cap and whose coefficients stay within the coefficient
    cap, as library Expr values (construction only, no ordering logic)."""
    from presemiring.expr import Expr

    gens = pres.gens
    monos = []
    for exps in product(range(max_degree + 1), repeat=len(gens)):
        if sum(exps) <= max_degree:
            monos.append(exps)
    monos.sort()
    out = []
    for coeffs in product(range(max_coeff + 1), repeat=len(monos)):
        e = Expr.zero(gens)
        for mono, c in zip(monos, coeffs):
            if c == 0:
                continue
            term = Expr.nat(gens, c)
            for g, k in zip(gens, mono):
                term = term * Expr.generator(gens, g) ** k
            e = e + term
        out.append(e)
    return out


def saturate(pres, max_degree: int, max_coeff: int):
    """The preorder closure restricted to the bounded universe, computed by
    forward saturation: seed with the rule axioms, then close under the two
    congruences and transitivity until nothing changes.  Derivations that
    would detour through expressions outside the universe are missed, so
    the result is a subset of the true closure; everything it does contain
    is honestly derivable."""
    from presemiring.expr import Expr

    gens = pres.gens
    elems = universe(pres, max_degree, max_coeff)
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    rel = [[False] * n for _ in range(n)]

    def mark(a, b) -> None:
        ia, ib = index.get(a), index.get(b)
        if ia is not None and ib is not None:
            rel[ia][ib] = True

    for e in elems:
        mark(e, e)
    mark(Expr.zero(gens), Expr.one(gens))
    for lo, hi in pres.relations:
        mark(lo, hi)
    nat_values = [(e, e.as_nat()) for e in elems]
    for a, va in nat_values:
        for b, vb in nat_values:
            if va is not None and vb is not None and va <= vb:
                mark(a, b)

    changed = True
    while changed:
        changed = False
        pairs = [(i, j) for i in range(n) for j in range(n) if rel[i][j]]
        for i, j in pairs:
            a, b = elems[i], elems[j]
            for c in elems:
                for left, right in ((a + c, b + c), (a * c, b * c)):
                    il, ir = index.get(left), index.get(right)
                    if il is not None and ir is not None and not rel[il][ir]:
                        rel[il][ir] = True
                        changed = True
        for k in range(n):
            row_k = rel[k]
            for i in range(n):
                if rel[i][k]:
                    row_i = rel[i]
                    for j in range(n):
                        if row_k[j] and not row_i[j]:
                            row_i[j] = True
                            changed = True
    return elems, rel, index
