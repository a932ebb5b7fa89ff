"""Deciding x <= y in a presented preorder by certificate search.

The presented preorder is the closure of the base relations and 0 <= 1 under
reflexivity, transitivity and +/* compatibility.  Every consequence can be
reached by a chain of elementary rewrites

    q*a*mu + d   -->   q*b*mu + d

where a <= b is a base relation (or 0 <= 1), mu a monomial, q a positive
integer and d the untouched remainder.  The search runs breadth first from
both ends over canonical forms, meeting either on equal expressions or on a
coefficientwise-dominated pair (which a padding certificate bridges).

The move set is finite by construction: rewrite multipliers mu are read off
by dividing the current expression's monomials by the relation's, and pad
steps only add monomials that divide one already appearing in the goals, the
relations, or the power universal.  A failed search is therefore only
evidence, never a refutation; refutations come from a separating monotone
homomorphism found in the attached family.  Everything here is deterministic:
frontiers are expanded in canonical expression order and the first meet wins.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .certificate import (
    Certificate,
    add_cong,
    base,
    chain,
    dominance,
    mul_cong,
    nat_embed,
    refl,
    replay,
    zero_one,
)
from .expr import Expr, Monomial, mono_degree, mono_key, mono_sub
from .family import Hom
from .presentation import Budget, Presentation

_VISIT_CAP = 20000


@dataclass(frozen=True)
class Holds:
    """x <= y, with a replayable derivation."""

    certificate: Certificate


@dataclass(frozen=True)
class Refuted:
    """x <= y fails: a verified monotone homomorphism has f(x) > f(y)."""

    hom: Hom
    lhs_value: Fraction
    rhs_value: Fraction


@dataclass(frozen=True)
class Unknown:
    """Neither a derivation nor a separation within the budget."""

    reason: str


Verdict = Holds | Refuted | Unknown


def nat_compare(pres: Presentation, n: int, m: int) -> Verdict:
    """Decide n <= m over a presentation with no generators and no relations."""
    if n <= m:
        return Holds(nat_embed(pres.gens, n, m))
    return Refuted(Hom(pres.gens, ()), Fraction(n), Fraction(m))


def _fits(e: Expr, deg_cap: int, coeff_cap: int) -> bool:
    return e.total_degree() <= deg_cap and e.max_coeff() <= coeff_cap


def _divisors(mono: Monomial) -> list[Monomial]:
    return [tuple(c) for c in product(*(range(e + 1) for e in mono))]


def _pad_monomials(pres: Presentation, x: Expr, y: Expr, deg_cap: int) -> list[Monomial]:
    """Monomials a pad step may add: divisors of those visible in the goals,
    the relations, and the power universal (capped, then plain sources)."""
    sources = set(x.monomials()) | set(y.monomials())
    for lhs, rhs in pres.relations:
        sources |= set(lhs.monomials()) | set(rhs.monomials())
    if pres.power_universal is not None:
        sources |= set(pres.power_universal.monomials())
    sources = {m for m in sources if mono_degree(m) <= deg_cap}
    out = set()
    for m in sorted(sources, key=mono_key):
        divs = _divisors(m)
        if len(out) + len(divs) > 400:
            out = sources | {(0,) * len(pres.gens)}
            break
        out |= set(divs)
    else:
        out |= {(0,) * len(pres.gens)}
    return sorted(out, key=mono_key)


def _rel_moves(
    e: Expr,
    rels: list[tuple[int, Expr, Expr]],
    pads: list[Monomial],
    deg_cap: int,
    coeff_cap: int,
):
    """Forward successors of e: (move, successor) in deterministic order.

    rels lists (index, from_side, to_side); passing the relations flipped
    turns this into the predecessor enumeration for the backward frontier.
    """
    out = []
    for i, a, b in rels:
        if a == b:
            continue
        if a.is_zero():
            mus = pads
        else:
            mus = set()
            lead = a.monomials()[0]
            for m in e.monomials():
                d = mono_sub(m, lead)
                if d is not None:
                    mus.add(d)
            mus = sorted(mus, key=mono_key)
        for mu in mus:
            amu = a * Expr.monomial(e.gens, mu)
            if a.is_zero():
                qmax = 1
            else:
                qmax = min(e.coeff(m) // amu.coeff(m) for m in amu.monomials())
                qmax = min(qmax, coeff_cap)
            for q in range(1, qmax + 1):
                step = Expr.monomial(e.gens, mu, q)
                removed = e.minus(a * step)
                if removed is None:
                    break
                ne = removed + b * step
                if ne == e or not _fits(ne, deg_cap, coeff_cap):
                    continue
                out.append((("rel", i, q, mu), ne))
    return out


def _pad_moves(e: Expr, pads: list[Monomial], deg_cap: int, coeff_cap: int):
    out = []
    for mu in pads:
        ne = e + Expr.monomial(e.gens, mu)
        if _fits(ne, deg_cap, coeff_cap):
            out.append((("pad", mu), ne))
    return out


def _unpad_moves(e: Expr):
    out = []
    for m in e.monomials():
        pred = e.minus(Expr.monomial(e.gens, m))
        out.append((("pad", m), pred))
    return out


def _step_cert(pres: Presentation, before: Expr, move) -> Certificate:
    """The certificate of one elementary rewrite applied to `before`."""
    if move[0] == "pad":
        mu = move[1]
        pad = Expr.monomial(pres.gens, mu)
        c = zero_one(pres.gens)
        if not pad.is_one():
            c = mul_cong(c, pad)
        if not before.is_zero():
            c = add_cong(c, before)
        return c
    _, i, q, mu = move
    a, _ = pres.relations[i]
    ctx = Expr.monomial(pres.gens, mu, q)
    c = base(pres, i)
    if not ctx.is_one():
        c = mul_cong(c, ctx)
    d = before.minus(a * ctx)
    if d is None:
        raise AssertionError("rewrite does not apply where the search said it would")
    if not d.is_zero():
        c = add_cong(c, d)
    return c


def _trace_forward(vis, node) -> list[tuple[Expr, tuple]]:
    steps = []
    cur = node
    while True:
        parent, move = vis[cur]
        if parent is None:
            break
        steps.append((parent, move))
        cur = parent
    steps.reverse()
    return steps


def _trace_backward(vis, node) -> list[tuple[Expr, tuple]]:
    steps = []
    cur = node
    while True:
        succ, move = vis[cur]
        if succ is None:
            break
        steps.append((cur, move))
        cur = succ
    return steps


def find_certificate(
    pres: Presentation, x: Expr, y: Expr, budget: Budget | None = None
) -> Certificate | None:
    """Search only for a derivation of x <= y; None when none is found."""
    verdict = check_preorder(pres, x, y, budget, use_family=False)
    return verdict.certificate if isinstance(verdict, Holds) else None


def check_preorder(
    pres: Presentation,
    x: Expr,
    y: Expr,
    budget: Budget | None = None,
    use_family: bool = True,
) -> Verdict:
    """Decide whether x <= y holds in the presented preorder.

    Returns Holds with a certificate, Refuted with a verified separating
    homomorphism (only when the presentation carries a family), or Unknown.
    """
    budget = budget or Budget()
    if x.gens != pres.gens or y.gens != pres.gens:
        raise ValueError("operands over foreign generators")

    if x == y:
        return Holds(refl(x))

    nx, ny = x.as_nat(), y.as_nat()
    if not pres.gens and not pres.relations and nx is not None and ny is not None:
        return nat_compare(pres, nx, ny)

    deg_cap = max(budget.degree, x.total_degree(), y.total_degree())
    coeff_cap = max(budget.coeff, x.max_coeff(), y.max_coeff())

    if y.dominates(x):
        cert = dominance(x, y)
        if cert.size <= budget.nodes:
            return Holds(cert)
        return Unknown(f"padding proof needs {cert.size} nodes, budget allows {budget.nodes}")

    if use_family and pres.family is not None:
        from .spectrum import separate

        hom = separate(pres, y, x)
        if hom is not None:
            return Refuted(hom, hom.eval(x), hom.eval(y))

    pads = _pad_monomials(pres, x, y, deg_cap)
    fwd_rels = [(i, a, b) for i, (a, b) in enumerate(pres.relations)]
    bwd_rels = [(i, b, a) for i, (a, b) in enumerate(pres.relations)]

    fvis: dict[Expr, tuple[Expr | None, tuple | None]] = {x: (None, None)}
    bvis: dict[Expr, tuple[Expr | None, tuple | None]] = {y: (None, None)}
    ffront, bfront = [x], [y]
    meet: tuple[Expr, Expr] | None = None

    def forward_meet(f: Expr) -> Expr | None:
        if f in bvis:
            return f
        for b in bvis:
            if b.dominates(f):
                return b
        return None

    def backward_meet(b: Expr) -> Expr | None:
        if b in fvis:
            return b
        for f in fvis:
            if b.dominates(f):
                return f
        return None

    rounds = 0
    while ffront and bfront and meet is None:
        rounds += 1
        if rounds > 2 * budget.nodes or len(fvis) + len(bvis) > _VISIT_CAP:
            break
        forward = len(ffront) <= len(bfront)
        frontier = ffront if forward else bfront
        nxt: list[Expr] = []
        for e in sorted(frontier, key=Expr.sort_key):
            if forward:
                moves = _rel_moves(e, fwd_rels, pads, deg_cap, coeff_cap) + _pad_moves(
                    e, pads, deg_cap, coeff_cap
                )
            else:
                moves = _rel_moves(e, bwd_rels, pads, deg_cap, coeff_cap) + _unpad_moves(e)
            for move, ne in moves:
                vis = fvis if forward else bvis
                if ne in vis:
                    continue
                vis[ne] = (e, move)
                nxt.append(ne)
                other = forward_meet(ne) if forward else backward_meet(ne)
                if other is not None:
                    meet = (ne, other) if forward else (other, ne)
                    break
            if meet is not None:
                break
        if forward:
            ffront = nxt
        else:
            bfront = nxt

    if meet is None:
        return Unknown("no derivation within budget; no separating homomorphism found"
                       if use_family and pres.family is not None
                       else "no derivation within budget")

    f_node, b_node = meet
    certs = [_step_cert(pres, before, mv) for before, mv in _trace_forward(fvis, f_node)]
    if f_node != b_node:
        certs.append(dominance(f_node, b_node))
    certs.extend(_step_cert(pres, before, mv) for before, mv in _trace_backward(bvis, b_node))
    cert = chain(certs) if certs else refl(x)
    if cert.size > budget.nodes:
        return Unknown(f"derivation found but needs {cert.size} nodes, budget allows {budget.nodes}")
    got = replay(pres, cert)
    if got != (x, y):
        raise AssertionError(f"search produced a certificate for {got}, wanted ({x}, {y})")
    return Holds(cert)


def degenerate(pres: Presentation, budget: Budget | None = None) -> bool:
    """True when 1 <= 0 is derivable, collapsing the order completely."""
    one = Expr.one(pres.gens)
    zero = Expr.zero(pres.gens)
    return isinstance(check_preorder(pres, one, zero, budget, use_family=False), Holds)
