"""Localization at a multiplicative set.

Fractions over a presentation keep explicit representatives: there is no gcd
in a semiring, so nothing is ever reduced.  The localized preorder compares
s1/t1 against s2/t2 through a witness r in T with r*s1*t2 ordered against
r*s2*t1 in the base semiring; certificates carry that r together with its
T-membership (a product decomposition over the declared generators of T) and
the inner derivation.

Equality of fractions is the same shape with exact equality inside, since
equality of canonical forms is decidable.  Asymptotic claims move along the
canonical map in both directions: lifting is free (r = 1), lowering cancels
the witness factor and flattens the resulting doubled claim.
"""

from __future__ import annotations

from dataclasses import dataclass

from .asymptotic import (
    AsymptoticError,
    AsymptoticWitness,
    ConstantK,
    Horizon,
    Periodic,
    PowerUniversalWitness,
    schema_certificate,
    weaken_to_constant,
)
from .certificate import Certificate, add_cong, mul_cong, replay, trans
from .expr import Expr
from .family import Hom
from .presentation import Budget, Presentation
from .search import Holds, Unknown, check_preorder


class LocalizationError(ValueError):
    pass


@dataclass(frozen=True)
class Frac:
    num: Expr
    den: Expr

    def __str__(self) -> str:
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class NotEqual:
    hom: Hom
    lhs_value: object
    rhs_value: object


@dataclass(frozen=True)
class LocCertificate:
    """Witness r (a product of T's generators, with the exponents recorded)
    plus the inner fact about r-cleared numerators.  For order claims the
    inner slot is a derivation certificate; for equality claims it is None
    and the cleared sides must be equal on the nose."""

    r: Expr
    r_powers: tuple[int, ...]
    inner: Certificate | None
    conclusion: tuple[Frac, Frac]

    @property
    def is_equality(self) -> bool:
        return self.inner is None


@dataclass(frozen=True)
class LocHolds:
    certificate: LocCertificate


@dataclass(frozen=True)
class Localized:
    """Fraction arithmetic over a presentation, relative to the
    multiplicative set generated by t_gens (1 is always a member)."""

    pres: Presentation
    t_gens: tuple[Expr, ...]

    def __post_init__(self):
        for t in self.t_gens:
            if t.gens != self.pres.gens:
                raise LocalizationError("T generator over foreign generators")
            if t.is_zero():
                raise LocalizationError("0 cannot generate a multiplicative set")

    @property
    def one(self) -> Expr:
        return Expr.one(self.pres.gens)

    def t_products(self, max_degree: int):
        """All products of T generators with total multiplicity up to the
        bound, in graded order starting from 1, with their exponents."""
        gens = self.t_gens
        def go(i, remaining):
            if i == len(gens):
                yield ()
                return
            for e in range(0, remaining + 1):
                for rest in go(i + 1, remaining - e):
                    yield (e,) + rest
        seen = set()
        for d in range(0, max_degree + 1):
            for powers in go(0, d):
                if sum(powers) != d:
                    continue
                e = self.one
                for t, p in zip(gens, powers):
                    e = e * (t**p)
                if e not in seen:
                    seen.add(e)
                    yield e, powers

    def t_membership(self, e: Expr, max_degree: int = 6) -> tuple[int, ...] | None:
        for prod, powers in self.t_products(max_degree):
            if prod == e:
                return powers
        return None

    def frac(self, num: Expr, den: Expr, max_degree: int = 6) -> Frac:
        if self.t_membership(den, max_degree) is None:
            raise LocalizationError(
                f"denominator ({den}) is not a recognized product of the T generators"
            )
        return Frac(num, den)

    def canonical(self, s: Expr) -> Frac:
        return Frac(s, self.one)

    def add(self, a: Frac, b: Frac) -> Frac:
        return Frac(a.num * b.den + b.num * a.den, a.den * b.den)

    def mul(self, a: Frac, b: Frac) -> Frac:
        return Frac(a.num * b.num, a.den * b.den)


def localize(pres: Presentation, t_gens: tuple[Expr, ...] | None = None) -> Localized:
    if t_gens is None:
        t_gens = pres.mult_set
    return Localized(pres, tuple(t_gens))


# ---- equality and order ----


def _cleared(a: Frac, b: Frac, r: Expr) -> tuple[Expr, Expr]:
    return (r * a.num * b.den, r * b.num * a.den)


def frac_eq(
    pres: Presentation,
    loc: Localized,
    a: Frac,
    b: Frac,
    budget: Budget | None = None,
    r_degree: int = 3,
) -> LocCertificate | NotEqual | Unknown:
    """Equality of fractions: some r in T makes the cross products equal on
    the nose.  A homomorphism positive on T with different values on the two
    fractions shows they can never be identified."""
    for r, powers in loc.t_products(r_degree):
        left, right = _cleared(a, b, r)
        if left == right:
            return LocCertificate(r, powers, None, (a, b))
    fam = pres.family
    if fam is not None:
        for pt in fam.grid(3):
            if not fam.feasible(pt):
                continue
            hom = fam.at(pt)
            if any(hom.eval(t) == 0 for t in loc.t_gens):
                continue
            da = hom.eval(a.den)
            db = hom.eval(b.den)
            if da == 0 or db == 0:
                continue
            va = hom.eval(a.num) / da
            vb = hom.eval(b.num) / db
            if va != vb:
                return NotEqual(hom, va, vb)
    if not pres.gens:
        na, da = a.num.as_nat(), a.den.as_nat()
        nb, db = b.num.as_nat(), b.den.as_nat()
        if None not in (na, da, nb, db) and na * db != nb * da:
            return NotEqual(Hom(pres.gens, ()), na * db, nb * da)
    return Unknown(f"no witness r up to degree {r_degree}, no separating point found")


def frac_le(
    pres: Presentation,
    loc: Localized,
    a: Frac,
    b: Frac,
    budget: Budget | None = None,
    r_degree: int = 3,
) -> LocHolds | Unknown:
    """Order on fractions: search r over T products by total degree and hand
    each cleared inequality to the base search."""
    reasons = None
    for r, powers in loc.t_products(r_degree):
        left, right = _cleared(a, b, r)
        v = check_preorder(pres, left, right, budget)
        if isinstance(v, Holds):
            return LocHolds(LocCertificate(r, powers, v.certificate, (a, b)))
        if reasons is None:
            reasons = getattr(v, "reason", "refuted at r = 1")
    return Unknown(f"no witness r up to degree {r_degree} ({reasons})")


def replay_loc(pres: Presentation, loc: Localized, lc: LocCertificate) -> tuple[Frac, Frac]:
    """Re-derive: r must be the declared product of T generators, and the
    inner fact must be exactly the cleared comparison."""
    if len(lc.r_powers) != len(loc.t_gens):
        raise LocalizationError("membership witness length does not match T")
    prod = loc.one
    for t, p in zip(loc.t_gens, lc.r_powers):
        prod = prod * (t**p)
    if prod != lc.r:
        raise LocalizationError(f"r = {lc.r} is not the declared product of T generators")
    a, b = lc.conclusion
    left, right = _cleared(a, b, lc.r)
    if lc.inner is None:
        if left != right:
            raise LocalizationError(
                f"equality certificate cleared sides differ: ({left}) vs ({right})"
            )
        return lc.conclusion
    got = replay(pres, lc.inner)
    if got != (left, right):
        raise LocalizationError(
            f"inner certificate concludes ({got[0]}, {got[1]}), "
            f"cleared comparison is ({left}, {right})"
        )
    return lc.conclusion


# ---- structural conversions ----


def lift_plain(loc: Localized, cert: Certificate) -> LocCertificate:
    """The canonical map is monotone: a base derivation becomes a localized
    certificate with r = 1."""
    x, y = cert.conclusion
    zeros = (0,) * len(loc.t_gens)
    return LocCertificate(loc.one, zeros, cert, (Frac(x, loc.one), Frac(y, loc.one)))


def loc_trans(loc: Localized, lc1: LocCertificate, lc2: LocCertificate) -> LocCertificate:
    """Transitivity: with witnesses r and q, the product q*r*t2 clears the
    outer comparison; the two inner certificates chain after multiplying by
    the complementary factors."""
    if lc1.is_equality or lc2.is_equality:
        raise LocalizationError("transitivity needs order certificates")
    a, b = lc1.conclusion
    b2, c = lc2.conclusion
    if b != b2:
        raise LocalizationError(f"certificates do not chain: {b} vs {b2}")
    r, q = lc1.r, lc2.r
    new_r = q * r * b.den
    left = mul_cong(lc1.inner, q * c.den)
    right = mul_cong(lc2.inner, r * a.den)
    inner = trans(left, right)
    powers = tuple(
        p1 + p2 + pb
        for p1, p2, pb in zip(
            lc1.r_powers, lc2.r_powers, _require_powers(loc, b.den)
        )
    )
    return LocCertificate(new_r, powers, inner, (a, c))


def _require_powers(loc: Localized, e: Expr) -> tuple[int, ...]:
    powers = loc.t_membership(e)
    if powers is None:
        raise LocalizationError(f"({e}) is not a recognized product of the T generators")
    return powers


def loc_add(loc: Localized, lc: LocCertificate, e: Frac) -> LocCertificate:
    """Congruence with addition: the shared summand contributes the same
    term to both cleared sides."""
    if lc.is_equality:
        raise LocalizationError("congruence needs an order certificate")
    a, b = lc.conclusion
    shared = lc.r * e.num * a.den * b.den * e.den
    inner = add_cong(mul_cong(lc.inner, e.den * e.den), shared)
    new_a = loc.add(a, e)
    new_b = loc.add(b, e)
    return LocCertificate(lc.r, lc.r_powers, inner, (new_a, new_b))


def loc_mul(loc: Localized, lc: LocCertificate, e: Frac) -> LocCertificate:
    """Congruence with multiplication."""
    if lc.is_equality:
        raise LocalizationError("congruence needs an order certificate")
    a, b = lc.conclusion
    inner = mul_cong(lc.inner, e.num * e.den)
    return LocCertificate(lc.r, lc.r_powers, inner, (loc.mul(a, e), loc.mul(b, e)))


def convert_representatives(
    loc: Localized,
    lc: LocCertificate,
    a_new: Frac,
    qa: Expr,
    b_new: Frac,
    qb: Expr,
) -> LocCertificate:
    """Move a certificate to different representatives of the same fractions.

    qa and qb witness the equalities qa*a.num*a_new.den = qa*a_new.num*a.den
    and likewise for b.  The new witness is qa*qb*a.den*b.den*r, which stays
    inside T; multiplying the inner certificate by qa*qb*a_new.den*b_new.den
    clears to the new representatives through exact identities of canonical
    forms.
    """
    if lc.is_equality:
        raise LocalizationError("representative conversion needs an order certificate")
    a, b = lc.conclusion
    if qa * a.num * a_new.den != qa * a_new.num * a.den:
        raise LocalizationError("qa does not witness the first representative equality")
    if qb * b.num * b_new.den != qb * b_new.num * b.den:
        raise LocalizationError("qb does not witness the second representative equality")
    new_r = qa * qb * a.den * b.den * lc.r
    inner = mul_cong(lc.inner, qa * qb * a_new.den * b_new.den)
    got = inner.conclusion
    want = _cleared(a_new, b_new, new_r)
    if got != want:
        raise LocalizationError(
            "converted certificate does not clear to the new representatives"
        )
    powers = [
        pa + pb + p1 + p2 + pr
        for pa, pb, p1, p2, pr in zip(
            _require_powers(loc, qa),
            _require_powers(loc, qb),
            _require_powers(loc, a.den),
            _require_powers(loc, b.den),
            lc.r_powers,
        )
    ]
    return LocCertificate(new_r, tuple(powers), inner, (a_new, b_new))


# ---- power universality in the localization ----


def localized_power_universal(
    loc: Localized,
    pu: PowerUniversalWitness,
    x: Frac,
) -> tuple[int, LocCertificate, LocCertificate]:
    """u/1 is power universal: with exponents k_s for the numerator and k_t
    for the denominator, k = k_s + k_t bounds the fraction both ways via the
    chains s <= u^(k_s) <= u^(k_s+k_t) t and t <= u^(k_t) <= u^(k_s+k_t) s."""
    entry_s = pu.require(x.num)
    entry_t = pu.require(x.den)
    u = pu.u
    k = entry_s.k + entry_t.k
    zeros = (0,) * len(loc.t_gens)
    one = loc.one

    dom_chain = trans(entry_s.dom, mul_cong(entry_t.inv, u**entry_s.k))
    u_frac = Frac(u**k, one)
    dom = LocCertificate(one, zeros, dom_chain, (x, u_frac))

    inv_chain = trans(entry_t.dom, mul_cong(entry_s.inv, u**entry_t.k))
    target = Frac((u**k) * x.num, x.den)
    inv = LocCertificate(one, zeros, inv_chain, (Frac(one, one), target))
    return k, dom, inv


# ---- asymptotic round trip ----


@dataclass(frozen=True)
class LocAsymptoticWitness:
    """An asymptotic claim between fractions, certified per power with one
    shared witness r: the inner schema at n concludes the cleared comparison
    of lhs^n against u^(k(n)) * rhs^n multiplied by r."""

    lhs: Frac
    rhs: Frac
    u: Expr
    cert_u: Certificate
    r: Expr
    r_powers: tuple[int, ...]
    envelope: ConstantK | Periodic

    def k_at(self, n: int) -> int:
        return self.envelope.ks[n % self.envelope.modulus]

    def certificate_at(self, n: int) -> LocCertificate:
        inner = schema_certificate(self.envelope.schema, n)
        lhs_n = Frac(self.lhs.num**n, self.lhs.den**n)
        rhs_n = Frac(
            (self.u ** self.k_at(n)) * (self.rhs.num**n), self.rhs.den**n
        )
        return LocCertificate(self.r, self.r_powers, inner, (lhs_n, rhs_n))


def verify_loc_witness(
    pres: Presentation, loc: Localized, w: LocAsymptoticWitness, horizon: int = 12
) -> bool:
    for n in range(1, horizon + 1):
        replay_loc(pres, loc, w.certificate_at(n))
    return True


def lift_asymptotic(loc: Localized, w: AsymptoticWitness) -> LocAsymptoticWitness:
    """x asymptotically below y in S gives x/1 below y/1 with r = 1 and the
    very same schema."""
    if isinstance(w.envelope, Horizon):
        raise AsymptoticError("horizon evidence carries no claim to lift")
    zeros = (0,) * len(loc.t_gens)
    return LocAsymptoticWitness(
        loc.canonical(w.lhs),
        loc.canonical(w.rhs),
        w.u,
        w.cert_u,
        loc.one,
        zeros,
        w.envelope,
    )


@dataclass(frozen=True)
class CancelDoubled:
    """The doubled family arising from lowering: for each n the cleared
    powers compare after cancelling r, with a constant inner envelope from
    the cancellation bound."""

    x: Expr
    y: Expr
    u: Expr
    cert_u: Certificate
    k_out: int
    r: Expr
    entry_k: int
    entry_inv: Certificate
    entry_dom: Certificate
    base_schema: tuple

    def at(self, n: int) -> AsymptoticWitness:
        inner = schema_certificate(self.base_schema, n)
        xn = (self.u**self.k_out) * (self.x**n)
        yn = self.y**n
        schema = (
            "cancel",
            inner,
            self.entry_inv,
            self.entry_dom,
            self.entry_k,
            self.r,
            xn,
            yn,
            self.u,
        )
        return AsymptoticWitness(
            yn, xn, self.u, self.cert_u, ConstantK(2 * self.entry_k, schema)
        )


def lower_asymptotic(
    pres: Presentation,
    loc: Localized,
    w: LocAsymptoticWitness,
    pu: PowerUniversalWitness,
    horizon: int = 12,
) -> AsymptoticWitness:
    """Bring a claim between canonical fractions back to the base semiring.

    With r = 1 the cleared certificates already are base certificates and
    the witness transfers unchanged.  Otherwise each power's certificate has
    the shape r*lhs^n <= r*u^K*rhs^n; cancelling r gives a doubled claim
    whose inner envelope is the cancellation constant, and flattening that
    doubled claim yields the base witness.
    """
    from .asymptotic import flatten

    if w.lhs.den != loc.one or w.rhs.den != loc.one:
        raise LocalizationError("lowering needs canonical fractions s/1")
    x = w.rhs.num
    y = w.lhs.num
    if w.r == loc.one:
        return AsymptoticWitness(y, x, w.u, w.cert_u, w.envelope)

    if isinstance(w.envelope, Periodic):
        flat = LocAsymptoticWitness(
            w.lhs, w.rhs, w.u, w.cert_u, w.r, w.r_powers,
            _constant_envelope(w),
        )
        w = flat
    env = w.envelope
    entry = pu.require(w.r)
    doubled = CancelDoubled(
        x,
        y,
        w.u,
        w.cert_u,
        env.k,
        w.r,
        entry.k,
        entry.inv,
        entry.dom,
        env.schema,
    )
    return flatten(pres, doubled, pu, horizon)


def _constant_envelope(w: LocAsymptoticWitness) -> ConstantK:
    """Pad a periodic localized envelope up to its maximum constant."""
    env = w.envelope
    top = max(env.ks)
    deltas = tuple(top - v for v in env.ks)
    cu = w.cert_u
    return ConstantK(top, ("raise", env.schema, (env.modulus, deltas), cu))
