"""Derivation certificates and their replay kernel.

A certificate is a tree over seven rules:

    refl      x <= x
    zero_one  0 <= 1
    base      lhs_i <= rhs_i          (the i-th relation of a presentation)
    nat_embed n <= m                  (naturals, n <= m)
    add_cong  a + c <= b + c          (from a child a <= b)
    mul_cong  a * c <= b * c          (from a child a <= b)
    trans     a <= c                  (from children a <= b and b <= c)

Every node stores its full concluded inequality, so replay never searches:
it recomputes each conclusion from the rule and the children against a
presentation and insists the stored expressions match exactly.  A
certificate that replays is a proof in the presented preorder no matter how
it was produced.
"""

from __future__ import annotations

from dataclasses import dataclass

from .expr import Expr
from .presentation import Presentation


class CertificateError(ValueError):
    """Raised when a certificate is assembled from mismatched pieces."""


class ReplayError(ValueError):
    """Raised when replay detects a rule violation or a tampered conclusion."""


@dataclass(frozen=True)
class Certificate:
    """One derivation node.  kind is the rule name; which of the remaining
    fields are meaningful depends on the rule."""

    kind: str
    conclusion: tuple[Expr, Expr]
    children: tuple["Certificate", ...] = ()
    context: Expr | None = None  # the c of add_cong / mul_cong
    index: int | None = None  # the relation index of base
    nats: tuple[int, int] | None = None  # the (n, m) of nat_embed
    size: int = 1

    @property
    def lhs(self) -> Expr:
        return self.conclusion[0]

    @property
    def rhs(self) -> Expr:
        return self.conclusion[1]


# ---- constructors (each validates what it can locally) ----


def refl(x: Expr) -> Certificate:
    return Certificate("refl", (x, x))


def zero_one(gens: tuple[str, ...]) -> Certificate:
    return Certificate("zero_one", (Expr.zero(gens), Expr.one(gens)))


def base(pres: Presentation, index: int) -> Certificate:
    if not 0 <= index < len(pres.relations):
        raise CertificateError(f"no relation with index {index}")
    return Certificate("base", pres.relations[index], index=index)


def nat_embed(gens: tuple[str, ...], n: int, m: int) -> Certificate:
    if not 0 <= n <= m:
        raise CertificateError(f"nat_embed requires 0 <= n <= m, got {n}, {m}")
    return Certificate("nat_embed", (Expr.nat(gens, n), Expr.nat(gens, m)), nats=(n, m))


def add_cong(child: Certificate, c: Expr) -> Certificate:
    a, b = child.conclusion
    return Certificate(
        "add_cong", (a + c, b + c), children=(child,), context=c, size=child.size + 1
    )


def mul_cong(child: Certificate, c: Expr) -> Certificate:
    a, b = child.conclusion
    return Certificate(
        "mul_cong", (a * c, b * c), children=(child,), context=c, size=child.size + 1
    )


def trans(left: Certificate, right: Certificate) -> Certificate:
    if left.rhs != right.lhs:
        raise CertificateError(
            f"trans middle mismatch: ... <= {left.rhs} vs {right.lhs} <= ..."
        )
    return Certificate(
        "trans",
        (left.lhs, right.rhs),
        children=(left, right),
        size=left.size + right.size + 1,
    )


def chain(certs: list[Certificate]) -> Certificate:
    """Fold a nonempty list of composable certificates with trans."""
    if not certs:
        raise CertificateError("cannot chain zero certificates")
    out = certs[0]
    for c in certs[1:]:
        out = trans(out, c)
    return out


# ---- combinators ----


def cert_add(c1: Certificate, c2: Certificate) -> Certificate:
    """From a1 <= b1 and a2 <= b2 conclude a1 + a2 <= b1 + b2."""
    if c1.conclusion == c2.conclusion and c1.lhs == c1.rhs:
        return refl(c1.lhs + c2.lhs)
    step1 = add_cong(c1, c2.lhs)
    step2 = add_cong(c2, c1.rhs)
    return trans(step1, step2)


def cert_mul(c1: Certificate, c2: Certificate) -> Certificate:
    """From a1 <= b1 and a2 <= b2 conclude a1 * a2 <= b1 * b2."""
    step1 = mul_cong(c1, c2.lhs)
    step2 = mul_cong(c2, c1.rhs)
    if step1.rhs == step2.lhs and step1.lhs == step2.rhs:
        # both factors were reflexive; avoid a pointless two-step loop
        return refl(step1.lhs)
    return trans(step1, step2)


def cert_sum(certs: list[Certificate], gens: tuple[str, ...]) -> Certificate:
    if not certs:
        return refl(Expr.zero(gens))
    out = certs[0]
    for c in certs[1:]:
        out = cert_add(out, c)
    return out


def cert_pow(c: Certificate, n: int) -> Certificate:
    """From a <= b conclude a^n <= b^n (n = 0 gives 1 <= 1)."""
    gens = c.lhs.gens
    if n < 0:
        raise CertificateError("negative power")
    if n == 0:
        return refl(Expr.one(gens))
    out = c
    for _ in range(n - 1):
        out = cert_mul(out, c)
    return out


def scale_cert(c: Certificate, q: int, gens: tuple[str, ...]) -> Certificate:
    """From a <= b conclude q*a <= q*b."""
    return mul_cong(c, Expr.nat(gens, q)) if q != 1 else c


def dominance(x: Expr, y: Expr) -> Certificate:
    """Certificate for x <= y when y - x has no negative coefficients.

    Built by padding: each missing term q*mu enters through
    0 <= 1, mul_cong by q*mu, add_cong by what is already there.
    """
    diff = y.minus(x)
    if diff is None:
        raise CertificateError(f"{y} does not dominate {x}")
    if diff.is_zero():
        return refl(x)
    gens = x.gens
    cur = x
    steps = []
    for mono, q in diff.terms:
        pad = Expr.monomial(gens, mono, q)
        node = zero_one(gens)
        if not pad.is_one():
            node = mul_cong(node, pad)
        if not cur.is_zero():
            node = add_cong(node, cur)
        steps.append(node)
        cur = cur + pad
    return chain(steps)


def nat_le(gens: tuple[str, ...], n: int, m: int) -> Certificate:
    """n <= m for naturals via the single embedding rule."""
    return nat_embed(gens, n, m)


# ---- replay ----


def replay(pres: Presentation, cert: Certificate) -> tuple[Expr, Expr]:
    """Recompute and verify every node's conclusion; return the root's.

    Raises ReplayError (with a path like 'root.0.1') on the first node whose
    stored conclusion does not follow from its rule and children.
    """

    def walk(node: Certificate, path: str) -> tuple[Expr, Expr]:
        kind = node.kind
        if kind == "refl":
            expect = (node.lhs, node.lhs)
        elif kind == "zero_one":
            expect = (Expr.zero(pres.gens), Expr.one(pres.gens))
        elif kind == "base":
            if node.index is None or not 0 <= node.index < len(pres.relations):
                raise ReplayError(f"{path}: base cites missing relation {node.index}")
            expect = pres.relations[node.index]
        elif kind == "nat_embed":
            if node.nats is None or not 0 <= node.nats[0] <= node.nats[1]:
                raise ReplayError(f"{path}: nat_embed with invalid pair {node.nats}")
            expect = (Expr.nat(pres.gens, node.nats[0]), Expr.nat(pres.gens, node.nats[1]))
        elif kind in ("add_cong", "mul_cong"):
            if len(node.children) != 1 or node.context is None:
                raise ReplayError(f"{path}: malformed {kind}")
            a, b = walk(node.children[0], f"{path}.0")
            if kind == "add_cong":
                expect = (a + node.context, b + node.context)
            else:
                expect = (a * node.context, b * node.context)
        elif kind == "trans":
            if len(node.children) != 2:
                raise ReplayError(f"{path}: malformed trans")
            a, b = walk(node.children[0], f"{path}.0")
            b2, c = walk(node.children[1], f"{path}.1")
            if b != b2:
                raise ReplayError(f"{path}: trans middle mismatch: {b} vs {b2}")
            expect = (a, c)
        else:
            raise ReplayError(f"{path}: unknown rule {kind!r}")
        if expect != node.conclusion:
            raise ReplayError(
                f"{path}: stored conclusion {node.lhs} <= {node.rhs} "
                f"does not match derived {expect[0]} <= {expect[1]}"
            )
        for e in node.conclusion:
            if e.gens != pres.gens:
                raise ReplayError(f"{path}: conclusion over foreign generators")
        return node.conclusion

    return walk(cert, "root")
