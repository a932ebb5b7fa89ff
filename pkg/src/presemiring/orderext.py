"""Forcing relations into a preorder.

Given a relation set R, the extended preorder puts a below b exactly when
some finite combination a + s1*y1 + ... + sn*yn <= b + s1*x1 + ... + sn*xn
holds in the base preorder, with every (xi, yi) drawn from R.  Certificates
here are that data: the triples plus an inner derivation certificate for the
displayed inequality.  The inner slot may itself hold an extension
certificate, which is how the iterated construction (first force R1, then
R2) is represented.

The relation can also be induced by a spectral point: R_f relates x to y
whenever f(x) <= f(y), for f a homomorphism on a designated subsemiring with
exact rational values.  That relation is infinite, so the searcher draws
candidate pairs from the subsemiring up to a degree and coefficient bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .certificate import Certificate, refl, replay
from .expr import Expr
from .presentation import Budget, Presentation
from .search import Holds, Unknown, check_preorder
from .spectrum import SliceHom, verify_slice_hom


class OrderExtensionError(ValueError):
    pass


@dataclass(frozen=True)
class RfSpec:
    """The relation induced by a homomorphism on a subsemiring: x relates to
    y when both evaluate under f and f(x) <= f(y)."""

    f: SliceHom

    def contains(self, x: Expr, y: Expr) -> bool:
        vx = self.f.eval(x)
        vy = self.f.eval(y)
        return vx is not None and vy is not None and vx <= vy


Relation = "list[tuple[Expr, Expr]] | tuple[tuple[Expr, Expr], ...] | RfSpec"


def _member(R, x: Expr, y: Expr) -> bool:
    if isinstance(R, RfSpec):
        return R.contains(x, y)
    return any(x == p and y == q for p, q in R)


@dataclass(frozen=True)
class ExtCertificate:
    """Triples (s, x, y) with each (x, y) in R, plus an inner certificate for
    lhs + sum(s*y) <= rhs + sum(s*x).  The inner slot holds a plain
    derivation certificate, or another ExtCertificate when the base preorder
    is itself an extension."""

    triples: tuple[tuple[Expr, Expr, Expr], ...]
    inner: object
    conclusion: tuple[Expr, Expr]

    @property
    def n(self) -> int:
        return len(self.triples)

    @property
    def lhs(self) -> Expr:
        return self.conclusion[0]

    @property
    def rhs(self) -> Expr:
        return self.conclusion[1]

    def displayed(self) -> tuple[Expr, Expr]:
        """The inequality the inner certificate must prove."""
        a, b = self.conclusion
        gens = a.gens
        left = a + _weighted_sum(gens, self.triples, side=2)
        right = b + _weighted_sum(gens, self.triples, side=1)
        return (left, right)

    def support(self) -> tuple[tuple[Expr, Expr], ...]:
        """The distinct relation members the certificate cites, in first-use
        order; nested inner certificates contribute nothing here because
        they cite a different relation."""
        seen = []
        for _, x, y in self.triples:
            if (x, y) not in seen:
                seen.append((x, y))
        return tuple(seen)


def _weighted_sum(gens, triples, side: int) -> Expr:
    total = Expr.zero(gens)
    for t in triples:
        total = total + t[0] * t[side]
    return total


@dataclass(frozen=True)
class ExtHolds:
    certificate: ExtCertificate


# ---- construction ----


def from_plain(cert: Certificate) -> ExtCertificate:
    """A base-preorder derivation is an extension certificate with no
    triples."""
    return ExtCertificate((), cert, cert.conclusion)


def from_pair(x: Expr, y: Expr) -> ExtCertificate:
    """The canonical certificate that a relation member (x, y) is ordered:
    one triple (1, x, y) whose displayed inequality x + y <= y + x is
    reflexive."""
    one = Expr.one(x.gens)
    return ExtCertificate(((one, x, y),), refl(x + y), (x, y))


def add_ext(ec: ExtCertificate, c: Expr) -> ExtCertificate:
    """Congruence with addition: same triples, inner shifted by c."""
    from .certificate import add_cong

    a, b = ec.conclusion
    if isinstance(ec.inner, ExtCertificate):
        inner = add_ext(ec.inner, c)
    else:
        inner = add_cong(ec.inner, c)
    return ExtCertificate(ec.triples, inner, (a + c, b + c))


def mul_ext(ec: ExtCertificate, c: Expr) -> ExtCertificate:
    """Congruence with multiplication: the weights pick up the factor c."""
    from .certificate import mul_cong

    a, b = ec.conclusion
    if isinstance(ec.inner, ExtCertificate):
        inner = mul_ext(ec.inner, c)
    else:
        inner = mul_cong(ec.inner, c)
    triples = tuple((s * c, x, y) for s, x, y in ec.triples)
    return ExtCertificate(triples, inner, (a * c, b * c))


def trans_ext(ec1: ExtCertificate, ec2: ExtCertificate) -> ExtCertificate:
    """Transitivity: pad each inner inequality with the other certificate's
    weighted sums, then chain."""
    from .certificate import add_cong, trans

    if ec1.rhs != ec2.lhs:
        raise OrderExtensionError(
            f"certificates do not chain: ({ec1.rhs}) vs ({ec2.lhs})"
        )
    if isinstance(ec1.inner, ExtCertificate) or isinstance(ec2.inner, ExtCertificate):
        raise OrderExtensionError("transitivity over nested certificates is not supported")
    gens = ec1.lhs.gens
    pad1 = _weighted_sum(gens, ec2.triples, side=2)
    pad2 = _weighted_sum(gens, ec1.triples, side=1)
    left = add_cong(ec1.inner, pad1)
    right = add_cong(ec2.inner, pad2)
    return ExtCertificate(
        ec1.triples + ec2.triples,
        trans(left, right),
        (ec1.lhs, ec2.rhs),
    )


# ---- replay ----


def replay_ext(pres: Presentation, R, ec: ExtCertificate, inner_replay=None) -> tuple[Expr, Expr]:
    """Re-derive the conclusion: check every cited pair is in R, replay the
    inner certificate, and peel the weighted sums off both sides."""
    for s, x, y in ec.triples:
        if not _member(R, x, y):
            raise OrderExtensionError(f"cited pair ({x}, {y}) is not in the relation")
    if isinstance(ec.inner, ExtCertificate):
        if inner_replay is None:
            raise OrderExtensionError(
                "inner certificate is itself an extension certificate; "
                "an inner replay procedure is required"
            )
        left, right = inner_replay(ec.inner)
    else:
        left, right = replay(pres, ec.inner)
    gens = left.gens
    a = left.minus(_weighted_sum(gens, ec.triples, side=2))
    b = right.minus(_weighted_sum(gens, ec.triples, side=1))
    if a is None or b is None:
        raise OrderExtensionError(
            "inner conclusion does not contain the declared weighted sums"
        )
    if (a, b) != ec.conclusion:
        raise OrderExtensionError(
            f"replay concludes ({a}, {b}), certificate claims "
            f"({ec.conclusion[0]}, {ec.conclusion[1]})"
        )
    return ec.conclusion


# ---- search ----


def _candidate_weights(pres: Presentation, degree: int, coeff: int) -> list[Expr]:
    out = [Expr.nat(pres.gens, c) for c in range(1, coeff + 1)]
    for mono in _monomials(pres.gens, degree):
        e = Expr.monomial(pres.gens, mono)
        if e.as_nat() is None:
            out.append(e)
    return out


def _monomials(gens: tuple[str, ...], max_degree: int):
    singles = list(range(len(gens)))
    for d in range(0, max_degree + 1):
        for combo in combinations_with_replacement(singles, d):
            exps = [0] * len(gens)
            for i in combo:
                exps[i] += 1
            yield tuple(exps)


def _slice_pool(rf: RfSpec, degree: int, coeff: int) -> list[tuple[Expr, Fraction]]:
    """Elements of the subsemiring up to the bound, with their values."""
    gens = rf.f.gens
    pool: list[tuple[Expr, Fraction]] = []
    for c in range(0, coeff + 1):
        pool.append((Expr.nat(gens, c), Fraction(c)))
    products: list[tuple[Expr, Fraction]] = [(Expr.one(gens), Fraction(1))]
    for d in range(1, degree + 1):
        for combo in combinations_with_replacement(range(len(rf.f.slice_gens)), d):
            e = Expr.one(gens)
            v = Fraction(1)
            for i in combo:
                e = e * rf.f.slice_gens[i]
                v = v * rf.f.values[i]
            products.append((e, v))
    for e, v in products[1:]:
        for c in range(1, coeff + 1):
            pool.append((e.scale(c), v * c))
    seen = set()
    out = []
    for e, v in pool:
        if e not in seen:
            seen.add(e)
            out.append((e, v))
    return out


def _relation_pairs(pres: Presentation, R, degree: int, coeff: int):
    if isinstance(R, RfSpec):
        pool = _slice_pool(R, degree, coeff)
        pairs = []
        for (x, vx) in pool:
            for (y, vy) in pool:
                if x != y and vx <= vy:
                    pairs.append((x, y))
        pairs.sort(key=lambda p: (p[0].sort_key(), p[1].sort_key()))
        return pairs
    return list(R)


def check_ext(
    pres: Presentation,
    R,
    a: Expr,
    b: Expr,
    budget: Budget | None = None,
    inner_check=None,
    pool_degree: int = 2,
    pool_coeff: int = 4,
    max_probes: int = 200,
) -> ExtHolds | Unknown:
    """Search for an extension certificate of a below b.

    The zero-triple case delegates straight to the base preorder.  When the
    goal pair itself lies in R, the canonical one-triple certificate closes
    it immediately.  Otherwise candidate triples are enumerated up to the
    pool bounds, each one checked by handing the displayed inequality to the
    base preorder.  inner_check replaces the base-preorder search, which is
    how the iterated extension is queried.
    """
    if isinstance(R, RfSpec) and not verify_slice_hom(pres, R.f):
        raise OrderExtensionError("the inducing homomorphism fails monotonicity on the slice")

    def solve(lhs: Expr, rhs: Expr):
        if inner_check is not None:
            v = inner_check(lhs, rhs)
        else:
            v = check_preorder(pres, lhs, rhs, budget)
        if isinstance(v, (Holds, ExtHolds)):
            return v.certificate
        return None

    direct = solve(a, b)
    if direct is not None:
        return ExtHolds(ExtCertificate((), direct, (a, b)))

    one = Expr.one(pres.gens)
    if _member(R, a, b):
        inner = solve(a + b, b + a)
        if inner is not None:
            return ExtHolds(ExtCertificate(((one, a, b),), inner, (a, b)))

    pairs = _relation_pairs(pres, R, pool_degree, pool_coeff)
    weights = _candidate_weights(pres, pool_degree, pool_coeff)
    probes = 0
    for x, y in pairs:
        for s in weights:
            if probes >= max_probes:
                return Unknown(f"no certificate within {max_probes} probes")
            probes += 1
            inner = solve(a + s * y, b + s * x)
            if inner is not None:
                ec = ExtCertificate(((s, x, y),), inner, (a, b))
                return ExtHolds(ec)
    for (x1, y1), (x2, y2) in combinations_with_replacement(pairs, 2):
        for s1 in weights[: max(2, len(weights) // 2)]:
            for s2 in weights[: max(2, len(weights) // 2)]:
                if probes >= max_probes:
                    return Unknown(f"no certificate within {max_probes} probes")
                probes += 1
                inner = solve(a + s1 * y1 + s2 * y2, b + s1 * x1 + s2 * x2)
                if inner is not None:
                    ec = ExtCertificate(((s1, x1, y1), (s2, x2, y2)), inner, (a, b))
                    return ExtHolds(ec)
    return Unknown(f"no certificate after {probes} probes at the pool bounds")


# ---- union factorization ----


def flatten_union(ec: ExtCertificate) -> ExtCertificate:
    """Regroup an iterated certificate (R2 over R1) as a single certificate
    over the union: the two weighted sums concatenate."""
    if not isinstance(ec.inner, ExtCertificate):
        return ec
    inner = flatten_union(ec.inner)
    return ExtCertificate(inner.triples + ec.triples, inner.inner, ec.conclusion)


def split_union(ec: ExtCertificate, R1, R2) -> ExtCertificate:
    """Regroup a union certificate as R2 over R1, sending each triple to the
    layer whose relation contains it (R1 preferred)."""
    if isinstance(ec.inner, ExtCertificate):
        raise OrderExtensionError("certificate is already layered")
    t1 = []
    t2 = []
    for s, x, y in ec.triples:
        if _member(R1, x, y):
            t1.append((s, x, y))
        elif _member(R2, x, y):
            t2.append((s, x, y))
        else:
            raise OrderExtensionError(f"cited pair ({x}, {y}) is in neither relation")
    a, b = ec.conclusion
    gens = a.gens
    mid_l = a + _weighted_sum(gens, tuple(t2), side=2)
    mid_r = b + _weighted_sum(gens, tuple(t2), side=1)
    inner = ExtCertificate(tuple(t1), ec.inner, (mid_l, mid_r))
    return ExtCertificate(tuple(t2), inner, (a, b))


@dataclass(frozen=True)
class UnionRow:
    goal: tuple[Expr, Expr]
    union_holds: bool
    nested_holds: bool
    conversions_ok: bool


@dataclass(frozen=True)
class UnionReport:
    rows: tuple[UnionRow, ...]

    @property
    def consistent(self) -> bool:
        return all(
            r.union_holds == r.nested_holds and (not r.union_holds or r.conversions_ok)
            for r in self.rows
        )

    def describe(self) -> str:
        lines = [f"union factorization: {len(self.rows)} goals"]
        for r in self.rows:
            a, b = r.goal
            status = []
            status.append("union " + ("holds" if r.union_holds else "unknown"))
            status.append("nested " + ("holds" if r.nested_holds else "unknown"))
            if r.union_holds and r.nested_holds:
                status.append("conversions " + ("ok" if r.conversions_ok else "FAILED"))
            lines.append(f"  ({a}) <= ({b}): " + ", ".join(status))
        return "\n".join(lines)


def union_factorization_check(
    pres: Presentation,
    R1,
    R2,
    goals: list[tuple[Expr, Expr]],
    budget: Budget | None = None,
) -> UnionReport:
    """Compare forcing R1 and R2 at once against forcing R1 first and R2 on
    top, converting certificates both directions when both searches close."""
    if isinstance(R1, RfSpec) or isinstance(R2, RfSpec):
        raise OrderExtensionError("union factorization needs finite relation lists")
    union = list(R1) + [p for p in R2 if p not in R1]
    rows = []
    for a, b in goals:
        vu = check_ext(pres, union, a, b, budget)
        vn = check_ext(
            pres,
            R2,
            a,
            b,
            budget,
            inner_check=lambda lhs, rhs: check_ext(pres, R1, lhs, rhs, budget),
        )
        ok = False
        if isinstance(vu, ExtHolds) and isinstance(vn, ExtHolds):
            try:
                flat = flatten_union(vn.certificate)
                replay_ext(pres, union, flat)
                layered = split_union(vu.certificate, R1, R2)
                replay_ext(
                    pres,
                    R2,
                    layered,
                    inner_replay=lambda e: replay_ext(pres, R1, e),
                )
                ok = True
            except OrderExtensionError:
                ok = False
        rows.append(UnionRow((a, b), isinstance(vu, ExtHolds), isinstance(vn, ExtHolds), ok))
    return UnionReport(tuple(rows))


# ---- telescoping ----


def telescoping(
    pres: Presentation,
    base: ExtCertificate,
    a: Expr,
    b: Expr,
    s: Expr,
    x: Expr,
    y: Expr,
    n: int,
) -> ExtCertificate:
    """Level n of the telescoping derivation: from the base inequality
    a + s*y <= b + s*x, produce a*(sum of x^m y^(n-m)) + s*y^(n+1) below
    b*(same sum) + s*x^(n+1), by one congruence on the previous level, one
    congruence on the base, and a transitivity joining them."""
    if base.conclusion != (a + s * y, b + s * x):
        raise OrderExtensionError(
            f"base concludes ({base.lhs}, {base.rhs}), need "
            f"({a + s * y}, {b + s * x})"
        )
    level = base
    for m in range(1, n + 1):
        partial = _telescope_sum(x, y, m - 1)
        step_prev = add_ext(mul_ext(level, y), a * (x**m))
        step_base = add_ext(mul_ext(base, x**m), b * (y * partial))
        level = trans_ext(step_prev, step_base)
    return level


def _telescope_sum(x: Expr, y: Expr, n: int) -> Expr:
    total = Expr.zero(x.gens)
    for m in range(0, n + 1):
        total = total + (x**m) * (y ** (n - m))
    return total


def telescoping_schema(pres, base, a, b, s, x, y, levels: int):
    """The lazy family: certificates for levels 0 through the bound."""
    for n in range(0, levels + 1):
        yield telescoping(pres, base, a, b, s, x, y, n)


# ---- spectrum pinning through the induced relation ----


@dataclass(frozen=True)
class SandwichRow:
    element: Expr
    value: Fraction
    lower_holds: bool
    upper_holds: bool


@dataclass(frozen=True)
class SandwichReport:
    rows: tuple[SandwichRow, ...]
    pinned: tuple[tuple[str, bool, bool], ...]

    @property
    def all_certified(self) -> bool:
        return all(r.lower_holds and r.upper_holds for r in self.rows)

    def describe(self) -> str:
        lines = [f"sandwich: {len(self.rows)} samples"]
        for r in self.rows:
            lines.append(
                f"  floor({r.value}) <= {r.element} <= ceil({r.value}): "
                + ("both certified" if r.lower_holds and r.upper_holds else "INCOMPLETE")
            )
        for name, agrees, violates in self.pinned:
            verdict = "consistent" if agrees != violates else "UNEXPECTED"
            lines.append(
                f"  {name}: agrees with f = {agrees}, violates a sandwich = {violates} ({verdict})"
            )
        return "\n".join(lines)


def sandwich_check(
    pres: Presentation,
    rf: RfSpec,
    samples: list[Expr],
    others=(),
    budget: Budget | None = None,
) -> SandwichReport:
    """Certify floor(f(e)) <= e <= ceil(f(e)) under the induced relation for
    each sample, then test candidate full homomorphisms against the certified
    conclusions: one that disagrees with f on the subsemiring must violate a
    sandwich side numerically, one that agrees never does."""
    gens = pres.gens
    rows = []
    conclusions: list[tuple[Expr, Expr]] = []
    for e in samples:
        v = rf.f.eval(e)
        if v is None:
            raise OrderExtensionError(f"sample {e} does not decompose in the subsemiring")
        lo = Expr.nat(gens, v.numerator // v.denominator)
        hi_val = -((-v.numerator) // v.denominator)
        hi = Expr.nat(gens, hi_val)
        vl = check_ext(pres, rf, lo, e, budget)
        vu = check_ext(pres, rf, e, hi, budget)
        if isinstance(vl, ExtHolds):
            conclusions.append(vl.certificate.conclusion)
        if isinstance(vu, ExtHolds):
            conclusions.append(vu.certificate.conclusion)
        rows.append(SandwichRow(e, v, isinstance(vl, ExtHolds), isinstance(vu, ExtHolds)))
    pinned = []
    for g in others:
        agrees = all(g.eval(sg) == val for sg, val in zip(rf.f.slice_gens, rf.f.values))
        violates = any(g.eval(l) > g.eval(r) for l, r in conclusions)
        pinned.append((g.describe(), agrees, violates))
    return SandwichReport(tuple(rows), tuple(pinned))
