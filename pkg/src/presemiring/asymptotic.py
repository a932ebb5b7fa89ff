"""Asymptotic order witnesses: x is asymptotically below y when u^(k_n) * y^n
dominates x^n for a sublinear exponent sequence k_n.

The certifiable class here is the eventually-constant one: envelopes are
either a single constant K or periodic constants K_r indexed by n mod m.
A witness carries a schema, a small rule program from which the derivation
certificate for any concrete power n can be rebuilt and replayed; nothing
asymptotic is ever accepted on the strength of finitely many checks alone.
Horizon evidence (per-n certificates up to a cutoff with no schema behind
them) is kept deliberately second-class: it never upgrades to a positive
verdict.

The constructions mirror the closure properties of the asymptotic relation:
direct lifting, change of the power universal element, transitivity,
congruence with sums and products, cancellation of a common factor, absorbing
fixed small factors, and flattening a doubled (asymptotic-of-asymptotic)
witness back to a plain one.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .certificate import (
    Certificate,
    cert_mul,
    cert_pow,
    cert_sum,
    chain,
    mul_cong,
    refl,
    scale_cert,
    trans,
)
from .expr import Expr
from .presentation import Budget, Presentation
from .search import Holds, Refuted, Unknown, check_preorder


class AsymptoticError(ValueError):
    pass


# ---- power universal witnesses ----


@dataclass(frozen=True)
class PUEntry:
    element: Expr
    k: int
    dom: Certificate
    inv: Certificate


@dataclass(frozen=True)
class PowerUniversalWitness:
    """u >= 1 together with per-element exponents: element <= u^k and
    1 <= u^k * element, both certified at the same k."""

    u: Expr
    cert_ge_one: Certificate
    entries: tuple[PUEntry, ...]

    def entry_for(self, e: Expr) -> PUEntry | None:
        for entry in self.entries:
            if entry.element == e:
                return entry
        return None

    def require(self, e: Expr) -> PUEntry:
        entry = self.entry_for(e)
        if entry is None:
            raise AsymptoticError(f"power universal witness does not cover {e}")
        return entry


def check_power_universal(
    pres: Presentation,
    u: Expr | None = None,
    coverage: list[Expr] | None = None,
    k_max: int = 6,
    budget: Budget | None = None,
) -> PowerUniversalWitness | Unknown:
    """Certify that u is power universal for the covered elements, finding the
    least exponent k <= k_max per element by incremental search."""
    if u is None:
        u = pres.power_universal
    if u is None:
        raise AsymptoticError("no power universal element given or declared")
    one = Expr.one(pres.gens)
    base = check_preorder(pres, one, u, budget)
    if not isinstance(base, Holds):
        return Unknown(f"could not certify 1 <= {u}")
    if coverage is None:
        coverage = [one] + [Expr.generator(pres.gens, g) for g in pres.gens]
    entries = []
    for x in coverage:
        found = None
        for k in range(0, k_max + 1):
            uk = u**k
            dom = check_preorder(pres, x, uk, budget)
            if not isinstance(dom, Holds):
                continue
            inv = check_preorder(pres, one, uk * x, budget)
            if isinstance(inv, Holds):
                found = PUEntry(x, k, dom.certificate, inv.certificate)
                break
        if found is None:
            return Unknown(f"no k <= {k_max} with ({x}) <= u^k and 1 <= u^k*({x})")
        entries.append(found)
    return PowerUniversalWitness(u, base.certificate, tuple(entries))


# ---- witnesses and envelopes ----


@dataclass(frozen=True)
class ConstantK:
    k: int
    schema: tuple

    @property
    def modulus(self) -> int:
        return 1

    @property
    def ks(self) -> tuple[int, ...]:
        return (self.k,)


@dataclass(frozen=True)
class Periodic:
    ks: tuple[int, ...]
    schema: tuple

    @property
    def modulus(self) -> int:
        return len(self.ks)


@dataclass(frozen=True)
class Horizon:
    """Per-n evidence with no generating schema.  Never conclusive."""

    entries: tuple[tuple[int, int], ...]
    certs: tuple[Certificate, ...]


@dataclass(frozen=True)
class AsymptoticWitness:
    """Claim: lhs^n <= u^(k(n)) * rhs^n for every n >= 1, where k(n) is read
    off the envelope and the certificate for each n is rebuilt from the
    envelope's schema."""

    lhs: Expr
    rhs: Expr
    u: Expr
    cert_u: Certificate
    envelope: ConstantK | Periodic | Horizon

    def k_at(self, n: int) -> int:
        env = self.envelope
        if isinstance(env, Horizon):
            for m, k in env.entries:
                if m == n:
                    return k
            raise AsymptoticError(f"horizon evidence has no entry for n = {n}")
        return env.ks[n % env.modulus]

    @property
    def max_envelope(self) -> int:
        env = self.envelope
        if isinstance(env, Horizon):
            return max((k for _, k in env.entries), default=0)
        return max(env.ks)

    def certificate_at(self, n: int) -> Certificate:
        env = self.envelope
        if isinstance(env, Horizon):
            for (m, _), cert in zip(env.entries, env.certs):
                if m == n:
                    return cert
            raise AsymptoticError(f"horizon evidence has no certificate for n = {n}")
        return schema_certificate(env.schema, n)

    def conclusion_at(self, n: int) -> tuple[Expr, Expr]:
        return (self.lhs**n, (self.u ** self.k_at(n)) * (self.rhs**n))


def is_conclusive(w: AsymptoticWitness) -> bool:
    return not isinstance(w.envelope, Horizon)


# ---- schema interpreter ----


def _sched_at(sched: tuple[int, tuple[int, ...]], n: int) -> int:
    modulus, ks = sched
    return ks[n % modulus]


def _raise_cert(cert: Certificate, delta: int, cert_u: Certificate) -> Certificate:
    """From a <= b derive a <= u^delta * b using 1 <= u."""
    if delta == 0:
        return cert
    lift = mul_cong(cert_pow(cert_u, delta), cert.rhs)
    return trans(cert, lift)


def schema_certificate(schema: tuple, n: int) -> Certificate:
    """Rebuild the derivation certificate for power n from a rule program.

    Every node carries the data its rule needs; sub-conclusions are read off
    the rebuilt child certificates rather than recomputed, so a malformed
    program fails loudly at certificate construction or replay.
    """
    if n < 1:
        raise AsymptoticError("schemas are defined for n >= 1")
    tag = schema[0]

    if tag == "pow":
        _, cert = schema
        return cert_pow(cert, n)

    if tag == "pow_div":
        _, cert, d = schema
        if n % d != 0:
            raise AsymptoticError(f"schema applies to multiples of {d}, got {n}")
        return cert_pow(cert, n // d)

    if tag == "residues":
        _, modulus, schemas = schema
        return schema_certificate(schemas[n % modulus], n)

    if tag == "shift":
        # lhs^n <= lhs^(n+j) <= u^K rhs^(n+j) <= u^(K+j) rhs^n
        _, sub, j, pad_lhs, pad_rhs, lhs, rhs, u, sub_sched = schema
        c = schema_certificate(sub, n + j)
        k_sub = _sched_at(sub_sched, n + j)
        up = mul_cong(cert_pow(pad_lhs, j), lhs**n)
        down = mul_cong(cert_pow(pad_rhs, j), (u**k_sub) * rhs**n)
        return chain([up, c, down])

    if tag == "raise":
        _, sub, delta_sched, cert_u = schema
        c = schema_certificate(sub, n)
        return _raise_cert(c, _sched_at(delta_sched, n), cert_u)

    if tag == "compose":
        # a^n <= u^K1 b^n and b^n <= u^K2 c^n give a^n <= u^(K1+K2) c^n
        _, s1, s2, u, sched1 = schema
        c1 = schema_certificate(s1, n)
        c2 = schema_certificate(s2, n)
        k1 = _sched_at(sched1, n)
        return trans(c1, mul_cong(c2, u**k1))

    if tag == "mul":
        _, s1, s2 = schema
        return cert_mul(schema_certificate(s1, n), schema_certificate(s2, n))

    if tag == "mulz":
        _, sub, z = schema
        return mul_cong(schema_certificate(sub, n), z**n)

    if tag == "scale":
        # congruence with a fixed factor, the shape cleared fractions take
        _, sub, z = schema
        return mul_cong(schema_certificate(sub, n), z)

    if tag == "addz":
        # binomial chain: sum of C(n,m) * (lhs^m z^(n-m) <= u^K rhs^m z^(n-m))
        _, sub, z, k, cert_u = schema
        gens = z.gens
        parts = []
        for m in range(0, n + 1):
            if m == 0:
                term = mul_cong(cert_pow(cert_u, k), z**n)
            else:
                term = mul_cong(schema_certificate(sub, m), z ** (n - m))
            parts.append(scale_cert(term, comb(n, m), gens))
        return cert_sum(parts, gens)

    if tag == "convert":
        # lhs^n <= u2^K rhs^n and u2 <= u1^k give lhs^n <= u1^(k*K) rhs^n
        _, sub, cert_up, rhs, sched_sub = schema
        c = schema_certificate(sub, n)
        k_sub = _sched_at(sched_sub, n)
        lift = mul_cong(cert_pow(cert_up, k_sub), rhs**n)
        return trans(c, lift)

    if tag == "cancel":
        # s*y <= s*x cancels to y^n <= u^(2k) x^n via the inductive chain
        _, cert, inv, dom, k, s, x, y, u = schema
        steps = []
        for j in range(n - 1, -1, -1):
            steps.append(mul_cong(cert, (x ** (n - 1 - j)) * (y**j)))
        middle = chain(steps)
        first = mul_cong(inv, y**n)
        lifted = mul_cong(middle, u**k)
        last = mul_cong(dom, (u**k) * (x**n))
        return chain([first, lifted, last])

    if tag == "small":
        # u^(k+l) x^n >= u^k s x^n >= u^k t y^n >= y^n
        _, fam, inv_t, dom_s, k, x, y, u = schema
        c_fam = schema_certificate(fam, n)
        c3 = mul_cong(inv_t, y**n)
        c2 = mul_cong(c_fam, u**k)
        c1 = mul_cong(dom_s, (u**k) * (x**n))
        return chain([c3, c2, c1])

    if tag == "dompow":
        _, a, qa, b, qb = schema
        return dominance_pow(a, qa, b, qb, n)

    if tag == "inner_uniform":
        # the inner schema of a doubled witness built from a uniform base
        _, base_schema, n_outer, k, l_extra, cert_u = schema
        c = schema_certificate(base_schema, n_outer * n)
        return _raise_cert(c, k * (n - 1) + l_extra, cert_u)

    if tag == "flatten":
        _, doubled, m_star, l_star, a, b, dom_y, inv_x, x, y, u, cert_u, k_out = schema
        r = n % m_star
        q = n // m_star
        k_r = l_star + k_out * m_star + r * (a + b)
        if q >= 1:
            inner = doubled.at(q)
            c = inner.certificate_at(m_star)
            if r == 0:
                return c
            grid = q * m_star
            up = mul_cong(cert_pow(dom_y, r), y**grid)
            mid = mul_cong(c, u ** (a * r))
            pad = mul_cong(
                cert_pow(inv_x, r),
                (u ** (a * r + l_star + k_out * m_star)) * (x**grid),
            )
            return chain([up, mid, pad])
        c1 = cert_pow(dom_y, r)
        c2 = mul_cong(cert_pow(inv_x, r), u ** (a * r))
        return _raise_cert(chain([c1, c2]), k_r - r * (a + b), cert_u)

    raise AsymptoticError(f"unknown schema tag {tag!r}")


def dominance_pow(a: Expr, qa: int, b: Expr, qb: int, n: int) -> Certificate:
    from .certificate import dominance

    return dominance((a**n).scale(qa), (b**n).scale(qb))


def verify_witness(pres: Presentation, w: AsymptoticWitness, horizon: int = 12) -> bool:
    """Replay the schema at every n up to the horizon and match each rebuilt
    conclusion against the claimed one."""
    from .certificate import replay

    if isinstance(w.envelope, Horizon):
        ns = [m for m, _ in w.envelope.entries]
    else:
        ns = list(range(1, horizon + 1))
    for n in ns:
        cert = w.certificate_at(n)
        got = replay(pres, cert)
        want = w.conclusion_at(n)
        if got != want:
            raise AsymptoticError(f"schema at n = {n} concludes {got}, claimed {want}")
    return True


# ---- search ----


def check_asymptotic(
    pres: Presentation,
    u: Expr | None,
    lhs: Expr,
    rhs: Expr,
    budget: Budget | None = None,
    horizon: int = 12,
) -> AsymptoticWitness | Refuted | Unknown:
    """Decide lhs asymptotically-below rhs.

    Tries, in order: a direct lift of a plain derivation (constant envelope
    0); comparison of d-th powers for small d, which yields a periodic
    envelope by shifting odd powers into even ones; a separating
    homomorphism, which refutes; and per-n horizon evidence, which is
    reported as a Horizon witness but never counts as a positive verdict.
    """
    if u is None:
        u = pres.power_universal
    if u is None:
        raise AsymptoticError("no power universal element given or declared")
    one = Expr.one(pres.gens)
    base_u = check_preorder(pres, one, u, budget)
    if not isinstance(base_u, Holds):
        return Unknown(f"could not certify 1 <= {u}")
    cert_u = base_u.certificate

    direct = check_preorder(pres, lhs, rhs, budget)
    if isinstance(direct, Holds):
        return AsymptoticWitness(lhs, rhs, u, cert_u, ConstantK(0, ("pow", direct.certificate)))
    if isinstance(direct, Refuted):
        return direct

    for d in (2, 3):
        powers = check_preorder(pres, lhs**d, rhs**d, budget)
        if not isinstance(powers, Holds):
            continue
        pad_lo = check_preorder(pres, one, lhs, budget)
        pad_hi = check_preorder(pres, rhs, u, budget)
        if not (isinstance(pad_lo, Holds) and isinstance(pad_hi, Holds)):
            continue
        even = ("pow_div", powers.certificate, d)
        sub_sched = (1, (0,))
        schemas = [even]
        ks = [0]
        for r in range(1, d):
            j = d - r
            schemas.append(
                ("shift", even, j, pad_lo.certificate, pad_hi.certificate, lhs, rhs, u, sub_sched)
            )
            ks.append(j)
        w = AsymptoticWitness(lhs, rhs, u, cert_u, Periodic(tuple(ks), ("residues", d, tuple(schemas))))
        verify_witness(pres, w, horizon)
        return w

    from .spectrum import separate

    hom = separate(pres, rhs, lhs)
    if hom is not None:
        return Refuted(hom, hom.eval(lhs), hom.eval(rhs))

    entries: list[tuple[int, int]] = []
    certs: list[Certificate] = []
    for n in range(1, horizon + 1):
        found = None
        for k in range(0, 5):
            v = check_preorder(pres, lhs**n, (u**k) * rhs**n, budget)
            if isinstance(v, Holds):
                found = (k, v.certificate)
                break
        if found is None:
            return Unknown(
                f"no derivation, no power rule, no separator; horizon evidence stops at n = {n}"
            )
        entries.append((n, found[0]))
        certs.append(found[1])
    return AsymptoticWitness(lhs, rhs, u, cert_u, Horizon(tuple(entries), tuple(certs)))


# ---- closure constructions ----


def convert_power_universal(
    w: AsymptoticWitness,
    u_new: Expr,
    k: int,
    cert: Certificate,
    cert_u_new: Certificate,
) -> AsymptoticWitness:
    """Change the reference element: from a witness over u and a certificate
    u <= u_new^k, produce the same claim over u_new with envelope scaled by k."""
    if isinstance(w.envelope, Horizon):
        raise AsymptoticError("cannot convert horizon evidence")
    if cert.conclusion != (w.u, u_new**k):
        raise AsymptoticError(f"conversion certificate concludes {cert.conclusion}, "
                              f"need ({w.u}, {u_new**k})")
    env = w.envelope
    sched = (env.modulus, env.ks)
    schema = ("convert", env.schema, cert, w.rhs, sched)
    ks = tuple(k * v for v in env.ks)
    if len(ks) == 1:
        new_env: ConstantK | Periodic = ConstantK(ks[0], schema)
    else:
        new_env = Periodic(ks, schema)
    return AsymptoticWitness(w.lhs, w.rhs, u_new, cert_u_new, new_env)


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def compose_asymptotic(w1: AsymptoticWitness, w2: AsymptoticWitness) -> AsymptoticWitness:
    """Transitivity: lhs1 <= u^k rhs1 = lhs2 and lhs2 <= u^l rhs2 combine to
    lhs1 <= u^(k+l) rhs2.  Envelopes add pointwise over the joint period."""
    if isinstance(w1.envelope, Horizon) or isinstance(w2.envelope, Horizon):
        raise AsymptoticError("cannot compose horizon evidence")
    if w1.rhs != w2.lhs:
        raise AsymptoticError(f"witnesses do not chain: ({w1.rhs}) vs ({w2.lhs})")
    if w1.u != w2.u:
        raise AsymptoticError("witnesses use different reference elements; convert first")
    e1, e2 = w1.envelope, w2.envelope
    sched1 = (e1.modulus, e1.ks)
    schema = ("compose", e1.schema, e2.schema, w1.u, sched1)
    m = _lcm(e1.modulus, e2.modulus)
    ks = tuple(e1.ks[r % e1.modulus] + e2.ks[r % e2.modulus] for r in range(m))
    env: ConstantK | Periodic = ConstantK(ks[0], schema) if m == 1 else Periodic(ks, schema)
    return AsymptoticWitness(w1.lhs, w2.rhs, w1.u, w1.cert_u, env)


def weaken_to_constant(w: AsymptoticWitness) -> AsymptoticWitness:
    """Flatten a periodic envelope to its maximum constant by padding each
    residue class with factors of u."""
    env = w.envelope
    if isinstance(env, Horizon):
        raise AsymptoticError("cannot weaken horizon evidence")
    if isinstance(env, ConstantK):
        return w
    top = max(env.ks)
    deltas = tuple(top - v for v in env.ks)
    schema = ("raise", env.schema, (env.modulus, deltas), w.cert_u)
    return AsymptoticWitness(w.lhs, w.rhs, w.u, w.cert_u, ConstantK(top, schema))


def add_congruence(w: AsymptoticWitness, z: Expr) -> AsymptoticWitness:
    """From lhs <= u^K rhs conclude lhs + z <= u^K (rhs + z) by the binomial
    chain; a periodic envelope is first weakened to its maximum constant."""
    if z.is_zero():
        return w
    w = weaken_to_constant(w)
    env = w.envelope
    schema = ("addz", env.schema, z, env.k, w.cert_u)
    return AsymptoticWitness(
        w.lhs + z, w.rhs + z, w.u, w.cert_u, ConstantK(env.k, schema)
    )


def mul_congruence(w: AsymptoticWitness, z: Expr) -> AsymptoticWitness:
    """From lhs <= u^K rhs conclude lhs*z <= u^K rhs*z; the envelope is
    untouched."""
    if isinstance(w.envelope, Horizon):
        raise AsymptoticError("cannot extend horizon evidence")
    env = w.envelope
    schema = ("mulz", env.schema, z)
    ks = env.ks
    new_env: ConstantK | Periodic = (
        ConstantK(ks[0], schema) if env.modulus == 1 else Periodic(ks, schema)
    )
    return AsymptoticWitness(w.lhs * z, w.rhs * z, w.u, w.cert_u, new_env)


def mul_witness(w1: AsymptoticWitness, w2: AsymptoticWitness) -> AsymptoticWitness:
    """Multiply two claims: envelopes add."""
    if isinstance(w1.envelope, Horizon) or isinstance(w2.envelope, Horizon):
        raise AsymptoticError("cannot extend horizon evidence")
    if w1.u != w2.u:
        raise AsymptoticError("witnesses use different reference elements; convert first")
    e1, e2 = w1.envelope, w2.envelope
    schema = ("mul", e1.schema, e2.schema)
    m = _lcm(e1.modulus, e2.modulus)
    ks = tuple(e1.ks[r % e1.modulus] + e2.ks[r % e2.modulus] for r in range(m))
    env: ConstantK | Periodic = ConstantK(ks[0], schema) if m == 1 else Periodic(ks, schema)
    return AsymptoticWitness(w1.lhs * w2.lhs, w1.rhs * w2.rhs, w1.u, w1.cert_u, env)


def cancel_factor(
    pres: Presentation,
    s: Expr,
    x: Expr,
    y: Expr,
    cert: Certificate,
    pu: PowerUniversalWitness,
) -> AsymptoticWitness:
    """From a plain derivation s*y <= s*x cancel the factor s: the inductive
    chain s*x^n >= s*x^(n-1)*y >= ... >= s*y^n sandwiched between the power
    universal bounds for s gives y^n <= u^(2k) x^n."""
    if s.is_zero():
        raise AsymptoticError("cannot cancel the zero factor")
    if cert.conclusion != (s * y, s * x):
        raise AsymptoticError(
            f"certificate concludes {cert.conclusion}, need ({s * y}, {s * x})"
        )
    entry = pu.require(s)
    schema = ("cancel", cert, entry.inv, entry.dom, entry.k, s, x, y, pu.u)
    return AsymptoticWitness(y, x, pu.u, pu.cert_ge_one, ConstantK(2 * entry.k, schema))


def small_factors(
    pres: Presentation,
    s: Expr,
    t: Expr,
    x: Expr,
    y: Expr,
    fam: tuple,
    pu: PowerUniversalWitness,
    horizon: int = 12,
) -> AsymptoticWitness:
    """From a per-n certificate family for t*y^n <= s*x^n absorb the fixed
    factors: u^(k+l) x^n >= u^k s x^n >= u^k t y^n >= y^n, where k bounds t
    from below and l bounds s from above.  The family is a schema; it is
    replayed up to the horizon before the witness is assembled."""
    if s.is_zero() or t.is_zero():
        raise AsymptoticError("factors must be nonzero")
    entry_t = pu.require(t)
    entry_s = pu.require(s)
    from .certificate import replay

    for n in range(1, horizon + 1):
        c = schema_certificate(fam, n)
        got = replay(pres, c)
        want = (t * y**n, s * x**n)
        if got != want:
            raise AsymptoticError(f"family at n = {n} concludes {got}, need {want}")
    k, l = entry_t.k, entry_s.k
    schema = ("small", fam, entry_t.inv, entry_s.dom, k, x, y, pu.u)
    return AsymptoticWitness(y, x, pu.u, pu.cert_ge_one, ConstantK(k + l, schema))


# ---- flattening a doubled witness ----


@dataclass(frozen=True)
class UniformDoubled:
    """A doubled claim built uniformly from one base witness: for each outer
    power n, the elements y^n and u^k * x^n are compared with a constant
    inner envelope l_extra.  This is the shape produced by cancelling per-n
    factors with a single k, and it is the shape flatten consumes."""

    base: AsymptoticWitness
    l_extra: int

    def __post_init__(self):
        if not isinstance(self.base.envelope, ConstantK):
            raise AsymptoticError("doubled construction needs a constant base envelope")

    @property
    def k_out(self) -> int:
        return self.base.envelope.k

    @property
    def x(self) -> Expr:
        return self.base.rhs

    @property
    def y(self) -> Expr:
        return self.base.lhs

    @property
    def u(self) -> Expr:
        return self.base.u

    def at(self, n: int) -> AsymptoticWitness:
        b = self.base
        k = self.k_out
        schema = ("inner_uniform", b.envelope.schema, n, k, self.l_extra, b.cert_u)
        return AsymptoticWitness(
            b.lhs**n,
            (b.u**k) * (b.rhs**n),
            b.u,
            b.cert_u,
            ConstantK(self.l_extra, schema),
        )


def flatten(
    pres: Presentation,
    doubled: UniformDoubled,
    pu: PowerUniversalWitness,
    horizon: int = 12,
) -> AsymptoticWitness:
    """Collapse an asymptotic-of-asymptotic claim to a plain one.

    With outer constant k and inner envelope l, pick the first m* with
    l(m*) <= m*; powers on the grid n*m* compare with exponent l + k*m*, and
    the off-grid remainder r is padded through the power universal bounds for
    the compared elements, costing r*(a+b) more.  The result is periodic with
    modulus m*.
    """
    probe = doubled.at(1)
    if isinstance(probe.envelope, Horizon):
        raise AsymptoticError("inner witnesses are horizon evidence; nothing to flatten")
    x, y, u = doubled.x, doubled.y, doubled.u
    inner_env = probe.envelope
    m_star = None
    for m in range(1, max(inner_env.ks) + 2):
        if inner_env.ks[m % inner_env.modulus] <= m:
            m_star = m
            break
    if m_star is None:
        raise AsymptoticError("no inner index m with l(m) <= m")
    l_star = inner_env.ks[m_star % inner_env.modulus]
    entry_y = pu.require(y)
    entry_x = pu.require(x)
    a, b = entry_y.k, entry_x.k
    k_out = doubled.k_out
    ks = tuple(l_star + k_out * m_star + r * (a + b) for r in range(m_star))
    schema = (
        "flatten",
        doubled,
        m_star,
        l_star,
        a,
        b,
        entry_y.dom,
        entry_x.inv,
        x,
        y,
        u,
        pu.cert_ge_one,
        k_out,
    )
    env: ConstantK | Periodic = ConstantK(ks[0], schema) if m_star == 1 else Periodic(ks, schema)
    w = AsymptoticWitness(y, x, u, pu.cert_ge_one, env)
    verify_witness(pres, w, horizon)
    return w
