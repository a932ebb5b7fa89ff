"""Monotone homomorphisms and the dual side of the order problem.

A derivation certificate shows x <= y inside the closure; a monotone
homomorphism f into the nonnegative rationals with f(x) > f(y) shows the
opposite.  This module supplies the second half: verification of candidate
homomorphisms, a deterministic separation search over a parameterized family,
membership in the bounded / invertible-up-to-a-natural subsemirings, the two
extension formulas that move a homomorphism from the bounded slice up to the
whole semiring, evidence reports for the structural side conditions, and the
orchestrator that runs both searches and joins the verdicts.

Everything evaluates in exact rational arithmetic.  A returned separator is
always re-verified before it leaves this module; a "not found" answer is
always relative to the family and the grid and never a completeness claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .certificate import Certificate, dominance, nat_le, refl, replay, trans
from .expr import Expr, mono_degree
from .family import FamilyError, Hom, HomFamily, RatFun
from .presentation import Budget, MSet, Presentation
from .search import Holds, Refuted, Unknown, check_preorder


class SpectrumError(ValueError):
    pass


class ExtensionError(SpectrumError):
    pass


class SoundnessError(RuntimeError):
    """Both a derivation-side witness and a separator were produced for the
    same question.  One of the two components is wrong; stop immediately."""


def verify_hom(pres: Presentation, f: Hom) -> bool:
    """True iff f respects every base relation (and 0 <= 1, which is automatic
    for nonnegative values).  Each derivation rule preserves the inequality,
    so this check is sufficient for monotonicity on the whole closure."""
    if f.gens != pres.gens:
        return False
    for lhs, rhs in pres.relations:
        if f.eval(lhs) > f.eval(rhs):
            return False
    return True


# ---- separation search ----


def _grid_points(
    params: tuple[str, ...],
    box: list[tuple[Fraction, Fraction]],
    steps: int,
) -> list[dict[str, Fraction]]:
    axes: list[list[Fraction]] = []
    for lo, hi in box:
        if lo == hi:
            axes.append([lo])
        else:
            axes.append([lo + (hi - lo) * k / (steps - 1) for k in range(steps)])
    points: list[dict[str, Fraction]] = []

    def rec(i: int, acc: list[Fraction]) -> None:
        if i == len(axes):
            points.append(dict(zip(params, acc)))
            return
        for v in axes[i]:
            rec(i + 1, acc + [v])

    rec(0, [])
    return points


def separate(
    pres: Presentation,
    x: Expr,
    y: Expr,
    fam: HomFamily | None = None,
    steps: int = 5,
    rounds: int = 6,
) -> Hom | None:
    """Search the family for a monotone homomorphism with f(x) < f(y).

    Deterministic grid-and-refine: evaluate the gap f(y) - f(x) exactly at
    every feasible grid point, then shrink the box around the best point and
    repeat.  The first strictly positive gap wins; the candidate is
    re-verified against the presentation before being returned.  None means
    no separator was found in this family at this resolution.
    """
    if fam is None:
        fam = pres.family
    if fam is None:
        return None
    if steps < 2:
        steps = 2
    box = fam.effective_box()
    best_pt: dict[str, Fraction] | None = None
    best_gap: Fraction | None = None
    for _ in range(max(1, rounds)):
        for pt in _grid_points(fam.params, box, steps):
            if not fam.satisfies_constraints(pt):
                continue
            f = fam.at(pt)
            gap = f.eval(y) - f.eval(x)
            if best_gap is None or gap > best_gap:
                best_gap, best_pt = gap, pt
        if best_pt is None:
            return None
        if best_gap > 0:
            f = fam.at(best_pt)
            if verify_hom(pres, f):
                return f
            return None
        box = [
            (max(lo, best_pt[p] - (hi - lo) / 4), min(hi, best_pt[p] + (hi - lo) / 4))
            for p, (lo, hi) in zip(fam.params, box)
        ]
    return None


# ---- bounded and invertible-up-to-a-natural membership ----

MEMBERSHIP_KINDS = ("splus", "sminus", "sb")


@dataclass(frozen=True)
class MembershipCertificate:
    """Witness that an element lies in S+, S-, or their intersection S_b.

    `lower` derives 1 <= n * element (invertibility up to n); `upper` derives
    element <= n (boundedness by n).  Both use the same n: when the two
    searches return different bounds the certificates are upgraded to the
    maximum.  The zero element belongs to S+ by definition rather than by
    derivation, so its `lower` is None.
    """

    kind: str
    element: Expr
    n: int
    lower: Certificate | None
    upper: Certificate | None

    def __post_init__(self):
        if self.kind not in MEMBERSHIP_KINDS:
            raise SpectrumError(f"unknown membership kind {self.kind!r}")
        if self.kind in ("splus", "sb") and self.lower is None and not self.element.is_zero():
            raise SpectrumError("missing invertibility certificate")
        if self.kind in ("sminus", "sb") and self.upper is None:
            raise SpectrumError("missing boundedness certificate")


def membership(
    pres: Presentation,
    s: Expr,
    kind: str,
    bound: int = 8,
    budget: Budget | None = None,
) -> MembershipCertificate | Unknown:
    """Search n <= bound for the defining inequalities of the requested kind."""
    if kind not in MEMBERSHIP_KINDS:
        raise SpectrumError(f"unknown membership kind {kind!r}")
    if bound < 1:
        raise SpectrumError("bound must be at least 1")
    gens = pres.gens
    if s.is_zero():
        if kind == "splus":
            return MembershipCertificate(kind, s, 0, None, None)
        return MembershipCertificate(kind, s, 0, None, refl(s))

    lower: tuple[int, Certificate] | None = None
    upper: tuple[int, Certificate] | None = None
    one = Expr.one(gens)
    # Boundedness usually fails fast (a separating homomorphism kills every
    # candidate n in one grid pass), so try it before invertibility.
    if kind in ("sminus", "sb"):
        for n in range(1, bound + 1):
            verdict = check_preorder(pres, s, Expr.nat(gens, n), budget)
            if isinstance(verdict, Holds):
                upper = (n, verdict.certificate)
                break
        if upper is None:
            return Unknown(f"no n <= {bound} certifies ({s}) <= n")
    if kind in ("splus", "sb"):
        for n in range(1, bound + 1):
            verdict = check_preorder(pres, one, s.scale(n), budget)
            if isinstance(verdict, Holds):
                lower = (n, verdict.certificate)
                break
        if lower is None:
            return Unknown(f"no n <= {bound} certifies 1 <= n*({s})")

    if kind == "splus":
        return MembershipCertificate(kind, s, lower[0], lower[1], None)
    if kind == "sminus":
        return MembershipCertificate(kind, s, upper[0], None, upper[1])
    n = max(lower[0], upper[0])
    lo_cert = lower[1]
    if lower[0] < n:
        lo_cert = trans(lo_cert, dominance(s.scale(lower[0]), s.scale(n)))
    up_cert = upper[1]
    if upper[0] < n:
        up_cert = trans(up_cert, nat_le(gens, upper[0], n))
    return MembershipCertificate(kind, s, n, lo_cert, up_cert)


def replay_membership(pres: Presentation, mc: MembershipCertificate) -> bool:
    """Re-derive both stored conclusions and match them against the claim."""
    gens = pres.gens
    if mc.lower is not None:
        got = replay(pres, mc.lower)
        want = (Expr.one(gens), mc.element.scale(mc.n))
        if got != want:
            raise SpectrumError(f"invertibility certificate concludes {got}, claim is {want}")
    elif mc.kind in ("splus", "sb") and not mc.element.is_zero():
        raise SpectrumError("missing invertibility certificate")
    if mc.upper is not None:
        got = replay(pres, mc.upper)
        want = (mc.element, Expr.nat(gens, mc.n))
        if got != want:
            raise SpectrumError(f"boundedness certificate concludes {got}, claim is {want}")
    elif mc.kind in ("sminus", "sb"):
        raise SpectrumError("missing boundedness certificate")
    return True


# ---- homomorphisms on a subsemiring slice ----


@dataclass(frozen=True)
class SliceHom:
    """A homomorphism defined on the subsemiring generated by chosen elements.

    Values attach to explicit, nonconstant slice generators.  An arbitrary
    element is evaluated by decomposing it as a polynomial with natural
    coefficients in the slice generators (the empty product covering the
    constant part); decomposition is a bounded backtracking search on leading
    terms, so eval is partial.  None means "not recognized at this budget",
    never "provably outside the slice".
    """

    gens: tuple[str, ...]
    slice_gens: tuple[Expr, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.slice_gens) != len(self.values):
            raise SpectrumError("one value per slice generator required")
        for e in self.slice_gens:
            if e.gens != self.gens:
                raise SpectrumError("slice generators must live over the ambient generators")
            if e.as_nat() is not None:
                raise SpectrumError(f"slice generator {e} is constant; constants are implicit")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if any(v < 0 for v in self.values):
            raise SpectrumError("slice values must be nonnegative")

    def eval(self, x: Expr) -> Fraction | None:
        dec = decompose_in_slice(x, self.slice_gens)
        if dec is None:
            return None
        total = Fraction(0)
        for word, c in dec.items():
            term = Fraction(c)
            for i in word:
                term *= self.values[i]
            total += term
        return total


def _words_for(mono, slice_gens: tuple[Expr, ...]) -> list[tuple[int, ...]]:
    """Multisets of slice-generator indices whose leading monomials multiply
    to exactly `mono` (the leading monomial of a product is the product of
    leading monomials)."""
    leads = [g.monomials()[0] for g in slice_gens]
    out: list[tuple[int, ...]] = []

    def rec(remaining, start: int, acc: list[int]) -> None:
        if not any(remaining):
            out.append(tuple(acc))
            return
        for i in range(start, len(slice_gens)):
            nxt = tuple(a - b for a, b in zip(remaining, leads[i]))
            if any(v < 0 for v in nxt):
                continue
            rec(nxt, i, acc + [i])

    rec(tuple(mono), 0, [])
    return out


def decompose_in_slice(
    x: Expr,
    slice_gens: tuple[Expr, ...],
    cap: int = 512,
) -> dict[tuple[int, ...], int] | None:
    """Express x as sum of c_w * product(slice_gens[i] for i in w), c_w in N.

    Peels the graded-lex leading term: every word whose leading monomial
    matches is tried in deterministic order with the largest coefficient
    first, backtracking on failure.  The empty word carries the constant
    part.  Returns None when no decomposition is found within the step cap.
    """
    unit = (0,) * len(x.gens)
    steps = 0

    def walk(e: Expr, acc: dict[tuple[int, ...], int]) -> dict[tuple[int, ...], int] | None:
        nonlocal steps
        if e.is_zero():
            return acc
        mono, coeff = e.terms[0]
        if mono == unit:
            acc = dict(acc)
            acc[()] = acc.get((), 0) + coeff
            return acc
        for word in _words_for(mono, slice_gens):
            prod = Expr.one(e.gens)
            for i in word:
                prod = prod * slice_gens[i]
            lead_coeff = prod.terms[0][1]
            for q in range(coeff // lead_coeff, 0, -1):
                steps += 1
                if steps > cap:
                    return None
                rem = e.minus(prod.scale(q))
                if rem is None:
                    continue
                nxt = dict(acc)
                nxt[word] = nxt.get(word, 0) + q
                res = walk(rem, nxt)
                if res is not None:
                    return res
        return None

    return walk(x, {})


def verify_slice_hom(
    pres: Presentation,
    f: SliceHom,
    extra: tuple[tuple[Expr, Expr], ...] = (),
) -> bool:
    """Audit monotonicity of a slice homomorphism on every base relation both
    of whose sides decompose in the slice, plus any extra pairs supplied.
    Relations not visible in the slice are skipped, so this is a bounded
    audit rather than a proof."""
    for lhs, rhs in tuple(pres.relations) + tuple(extra):
        va, vb = f.eval(lhs), f.eval(rhs)
        if va is not None and vb is not None and va > vb:
            return False
    return True


# ---- the two extension formulas ----


@dataclass(frozen=True)
class NoExtension:
    reason: str


def extend_b_to_minus(f: SliceHom, minus_gens: tuple[Expr, ...]) -> SliceHom:
    """Extend a homomorphism from the bounded slice to a bounded-above slice
    via f~(x) = f(1 + x) - 1.

    Requires 1 + x to decompose in the source slice for every target
    generator x; the source value there must be at least 1 or the formula
    would go negative.  Restricted back to the source slice the result
    agrees with f.
    """
    one = Expr.one(f.gens)
    vals = []
    for x in minus_gens:
        v = f.eval(one + x)
        if v is None:
            raise ExtensionError(f"1 + ({x}) does not decompose in the source slice")
        if v < 1:
            raise ExtensionError(f"f(1 + ({x})) = {v} < 1; the shifted formula would go negative")
        vals.append(v - 1)
    return SliceHom(f.gens, minus_gens, tuple(vals))


def extend_minus_to_full(
    pres: Presentation,
    f: SliceHom,
    ubar: Expr,
    bound: int = 6,
    budget: Budget | None = None,
    extra_k: int = 0,
) -> Hom | NoExtension:
    """Extend a homomorphism from the bounded-above slice to the whole
    semiring via f~(x) = f(ubar)^(-k) * f(ubar^k * x).

    `ubar` undoes the power universal element up to bounded factors.  For
    each ambient generator the least k <= bound is taken such that
    ubar^k * x both carries a bounded-above membership certificate and
    decomposes in the slice.  f(ubar) = 0 means no monotone extension exists
    at all, reported as NoExtension rather than an error.  `extra_k` recomputes
    every value with a larger exponent; the result must not change, which is
    what the k-independence tests exercise.  The assembled homomorphism is
    re-verified against the presentation before being returned.
    """
    fu = f.eval(ubar)
    if fu is None:
        raise ExtensionError(f"({ubar}) does not decompose in the source slice")
    if fu == 0:
        return NoExtension(
            f"f({ubar}) = 0: the extension would have to send the power universal "
            f"element to an infinite value"
        )
    values = []
    for name in pres.gens:
        x = Expr.generator(pres.gens, name)
        found: int | None = None
        for k in range(0, bound + 1):
            cand = (ubar**k) * x
            if f.eval(cand) is None:
                continue
            mc = membership(pres, cand, "sminus", bound=max(bound, 8), budget=budget)
            if isinstance(mc, MembershipCertificate):
                found = k
                break
        if found is None:
            raise ExtensionError(
                f"no k <= {bound} puts ({ubar})^k * {name} in the bounded-above slice"
            )
        k = found + extra_k
        val = f.eval((ubar**k) * x)
        if val is None:
            raise ExtensionError(f"({ubar})^{k} * {name} does not decompose in the source slice")
        values.append(val / fu**k)
    hom = Hom(pres.gens, tuple(values))
    if not verify_hom(pres, hom):
        raise ExtensionError("extended values violate a base relation")
    return hom


# ---- structural condition reports ----


@dataclass(frozen=True)
class M1Entry:
    sample: Expr
    m: Expr | None
    witness: MembershipCertificate | None


@dataclass(frozen=True)
class M1Report:
    entries: tuple[M1Entry, ...]

    @property
    def ok(self) -> bool:
        return all(e.witness is not None for e in self.entries)

    def describe(self) -> str:
        good = sum(1 for e in self.entries if e.witness is not None)
        lines = [f"M1 report: {good}/{len(self.entries)} samples verified"]
        for e in self.entries:
            if e.witness is not None:
                lines.append(f"  s = {e.sample}: m = {e.m}, n = {e.witness.n}")
            else:
                lines.append(f"  s = {e.sample}: no (m, n) within bounds")
        return "\n".join(lines)


def _default_samples(pres: Presentation, max_degree: int) -> list[Expr]:
    every = MSet(kind="all")
    return [Expr.monomial(pres.gens, m) for m in every.enumerate(pres.gens, max_degree)]


def _m_candidates(pres: Presentation, max_degree: int) -> list[Expr]:
    mset = pres.m_set
    if mset is None:
        return [Expr.one(pres.gens)]
    return [Expr.monomial(pres.gens, m) for m in mset.enumerate(pres.gens, max_degree)]


def check_M1(
    pres: Presentation,
    samples: list[Expr] | None = None,
    max_degree: int = 4,
    m_degree: int = 4,
    bound: int = 16,
    budget: Budget | None = None,
) -> M1Report:
    """For each nonzero sample s, hunt for m in the declared monomial set and
    n <= bound with 1 <= n*m*s and m*s <= n, i.e. an S_b membership of m*s
    with a single shared n.  Candidates are tried graded-lex ascending, so
    the reported m is the smallest that works."""
    if samples is None:
        samples = _default_samples(pres, max_degree)
    candidates = _m_candidates(pres, m_degree)
    entries = []
    for s in samples:
        if s.is_zero():
            continue
        hit: tuple[Expr, MembershipCertificate] | None = None
        for m in candidates:
            mc = membership(pres, m * s, "sb", bound=bound, budget=budget)
            if isinstance(mc, MembershipCertificate):
                hit = (m, mc)
                break
        if hit is None:
            entries.append(M1Entry(s, None, None))
        else:
            entries.append(M1Entry(s, hit[0], hit[1]))
    return M1Report(tuple(entries))


@dataclass(frozen=True)
class M2Entry:
    m: Expr
    ev: RatFun
    bounded: bool | None
    sup: Fraction | None
    n: int | None
    cert: Certificate | None
    witness_param: str | None
    witness_points: tuple[Fraction, ...]
    note: str = ""


@dataclass(frozen=True)
class M2Report:
    entries: tuple[M2Entry, ...]

    @property
    def ok(self) -> bool:
        return all(
            (e.bounded is True and e.cert is not None) or e.bounded is False
            for e in self.entries
        )

    def describe(self) -> str:
        certified = sum(1 for e in self.entries if e.bounded and e.cert is not None)
        unbounded = sum(1 for e in self.entries if e.bounded is False)
        open_ = sum(1 for e in self.entries if e.bounded is None or (e.bounded and e.cert is None))
        lines = [
            f"M2 report: {len(self.entries)} monomials, "
            f"{certified} bounded-certified, {unbounded} unbounded, {open_} open"
        ]
        for e in self.entries:
            if e.bounded is True and e.cert is not None:
                lines.append(f"  m = {e.m}: ev = {e.ev}, sup <= {e.sup}, certified m <= {e.n}")
            elif e.bounded is True:
                lines.append(f"  m = {e.m}: ev = {e.ev}, sup <= {e.sup}, no certificate ({e.note})")
            elif e.bounded is False:
                pts = ", ".join(str(v) for v in e.witness_points)
                lines.append(
                    f"  m = {e.m}: ev = {e.ev} unbounded along {e.witness_param} -> 0 "
                    f"(witness {e.witness_param} = {pts}, ...)"
                )
            else:
                lines.append(f"  m = {e.m}: ev = {e.ev}, boundedness not decided ({e.note})")
        return "\n".join(lines)


def _family_ev(fam: HomFamily, x: Expr) -> RatFun:
    vals = dict(zip(fam.gens, fam.values))
    r = x.eval_at(vals)
    if isinstance(r, int):
        return RatFun(Expr.nat(fam.params, r), Expr.one(fam.params))
    return r


def _laurent_boundedness(fam: HomFamily, rf: RatFun):
    """Decide sup of a Laurent-monomial evaluation over the declared box.

    Returns ("bounded", sup) with the corner product, ("unbounded", param)
    when a negative exponent meets a declared zero lower endpoint, or
    ("open", reason) when the shape is out of scope for exact analysis.
    """
    expo = rf.laurent_exponents()
    if expo is None:
        return ("open", "evaluation is not a Laurent monomial in the parameters")
    coeff = Fraction(rf.num.terms[0][1], rf.den.terms[0][1]) if rf.num.terms else Fraction(0)
    sup = coeff
    for p, iv in zip(fam.params, fam.intervals):
        e = expo.get(p, 0)
        if e == 0:
            continue
        if e > 0:
            sup *= iv.hi**e
        else:
            if iv.lo == 0:
                return ("unbounded", p)
            sup *= iv.lo**e
    return ("bounded", sup)


def _unbounded_witness(fam: HomFamily, param: str, count: int = 3) -> tuple[Fraction, ...]:
    """A parameter sequence marching the offending coordinate toward its open
    zero endpoint; each value sits strictly inside the declared interval."""
    i = fam.params.index(param)
    start = min(fam.floor, fam.intervals[i].hi / 2)
    return tuple(start / 2**j for j in range(count))


def check_M2_evidence(
    pres: Presentation,
    fam: HomFamily | None = None,
    m_degree: int = 4,
    budget: Budget | None = None,
) -> M2Report:
    """For each monomial m in the declared set, decide boundedness of its
    evaluation over the family exactly when that evaluation is a Laurent
    monomial in the parameters, then search for a certificate m <= n with n
    anchored at the ceiling of the sup.  Constraints only shrink the feasible
    set, so a corner bound stays an upper bound; unbounded verdicts are
    accompanied by a concrete parameter sequence."""
    if fam is None:
        fam = pres.family
    if fam is None:
        raise SpectrumError("no homomorphism family attached to the presentation")
    entries = []
    for m_expr in _m_candidates(pres, m_degree):
        ev = _family_ev(fam, m_expr)
        verdict = _laurent_boundedness(fam, ev)
        if verdict[0] == "unbounded":
            param = verdict[1]
            if fam.constraints:
                entries.append(
                    M2Entry(m_expr, ev, None, None, None, None, None, (),
                            "zero endpoint under constraints; not decided")
                )
                continue
            entries.append(
                M2Entry(m_expr, ev, False, None, None, None, param,
                        _unbounded_witness(fam, param))
            )
            continue
        if verdict[0] == "open":
            entries.append(M2Entry(m_expr, ev, None, None, None, None, None, (), verdict[1]))
            continue
        sup = verdict[1]
        n0 = max(1, ceil(sup))
        cert = None
        n_found = None
        for n in sorted({n0, n0 + 1, n0 + 2, n0 + 3, 2 * n0, 4 * n0}):
            res = check_preorder(pres, m_expr, Expr.nat(pres.gens, n), budget)
            if isinstance(res, Holds):
                cert, n_found = res.certificate, n
                break
        note = "" if cert is not None else "no derivation within budget"
        entries.append(M2Entry(m_expr, ev, True, sup, n_found, cert, None, (), note))
    return M2Report(tuple(entries))


def _t_products(pres: Presentation, t_degree: int) -> list[Expr]:
    """Products of at most t_degree declared multiplicative-set elements,
    deterministically ordered, starting with the empty product 1."""
    base = list(pres.mult_set or ())
    out = [Expr.one(pres.gens)]
    seen = {out[0]}
    layer = out[:]
    for _ in range(t_degree):
        nxt = []
        for e in layer:
            for b in base:
                p = e * b
                if p not in seen:
                    seen.add(p)
                    nxt.append(p)
        out.extend(nxt)
        layer = nxt
    return out


def _trivial_mult_set(pres: Presentation) -> bool:
    return not pres.mult_set or all(e.is_one() for e in pres.mult_set)


@dataclass(frozen=True)
class M1PrimeEntry:
    sample: Expr
    m: Expr | None
    t1: Expr | None
    t2: Expr | None
    n: int | None
    lower: Certificate | None
    upper: Certificate | None


@dataclass(frozen=True)
class M1PrimeReport:
    entries: tuple[M1PrimeEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.n is not None for e in self.entries)

    def describe(self) -> str:
        good = sum(1 for e in self.entries if e.n is not None)
        lines = [f"M1' report: {good}/{len(self.entries)} samples verified"]
        for e in self.entries:
            if e.n is not None:
                lines.append(
                    f"  s = {e.sample}: m = {e.m}, t1 = {e.t1}, t2 = {e.t2}, n = {e.n}"
                )
            else:
                lines.append(f"  s = {e.sample}: no (m, t1, t2, n) within bounds")
        return "\n".join(lines)


def check_M1prime(
    pres: Presentation,
    samples: list[Expr] | None = None,
    max_degree: int = 4,
    m_degree: int = 4,
    t_degree: int = 1,
    bound: int = 16,
    budget: Budget | None = None,
) -> M1Report | M1PrimeReport:
    """Fractional variant of the invertibility condition: for each sample s
    find m, t1, t2 and n with t2 <= n*m*t1*s and m*t1*s <= n*t2.  A trivial
    multiplicative set reduces this to check_M1 exactly, so that case
    delegates and returns the plain report."""
    if _trivial_mult_set(pres):
        return check_M1(pres, samples, max_degree, m_degree, bound, budget)
    if samples is None:
        samples = _default_samples(pres, max_degree)
    candidates = _m_candidates(pres, m_degree)
    tprods = _t_products(pres, t_degree)
    entries = []
    for s in samples:
        if s.is_zero():
            continue
        hit = None
        combos = sorted(
            (
                (m.total_degree() + t1.total_degree() + t2.total_degree(), im, i1, i2)
                for im, m in enumerate(candidates)
                for i1, t1 in enumerate(tprods)
                for i2, t2 in enumerate(tprods)
            ),
        )
        for _, im, i1, i2 in combos:
            m, t1, t2 = candidates[im], tprods[i1], tprods[i2]
            mid = m * t1 * s
            for n in range(1, bound + 1):
                lo = check_preorder(pres, t2, mid.scale(n), budget)
                if not isinstance(lo, Holds):
                    continue
                hi = check_preorder(pres, mid, t2.scale(n), budget)
                if isinstance(hi, Holds):
                    hit = M1PrimeEntry(s, m, t1, t2, n, lo.certificate, hi.certificate)
                    break
            if hit is not None:
                break
        entries.append(hit if hit is not None else M1PrimeEntry(s, None, None, None, None, None, None))
    return M1PrimeReport(tuple(entries))


@dataclass(frozen=True)
class M2PrimeEntry:
    m: Expr
    t1: Expr
    t2: Expr
    ev: RatFun
    bounded: bool | None
    sup: Fraction | None
    n: int | None
    cert: Certificate | None
    witness_param: str | None
    witness_points: tuple[Fraction, ...]
    note: str = ""


@dataclass(frozen=True)
class M2PrimeReport:
    entries: tuple[M2PrimeEntry, ...]

    @property
    def ok(self) -> bool:
        return all(
            (e.bounded is True and e.cert is not None) or e.bounded is False
            for e in self.entries
        )

    def describe(self) -> str:
        certified = sum(1 for e in self.entries if e.bounded and e.cert is not None)
        unbounded = sum(1 for e in self.entries if e.bounded is False)
        open_ = sum(
            1 for e in self.entries if e.bounded is None or (e.bounded and e.cert is None)
        )
        lines = [
            f"M2' report: {len(self.entries)} elements, "
            f"{certified} bounded-certified, {unbounded} unbounded, {open_} open"
        ]
        for e in self.entries:
            head = f"  m*t1/t2 = ({e.m})*({e.t1})/({e.t2})"
            if e.bounded is True and e.cert is not None:
                lines.append(
                    f"{head}: ev = {e.ev}, sup <= {e.sup}, certified m*t1 <= {e.n}*t2"
                )
            elif e.bounded is True:
                lines.append(f"{head}: ev = {e.ev}, sup <= {e.sup}, no certificate ({e.note})")
            elif e.bounded is False:
                pts = ", ".join(str(v) for v in e.witness_points)
                lines.append(
                    f"{head}: ev = {e.ev} unbounded along {e.witness_param} -> 0 "
                    f"(witness {e.witness_param} = {pts}, ...)"
                )
            else:
                lines.append(f"{head}: ev = {e.ev}, boundedness not decided ({e.note})")
        return "\n".join(lines)


def check_M2prime_evidence(
    pres: Presentation,
    fam: HomFamily | None = None,
    m_degree: int = 4,
    t_degree: int = 1,
    budget: Budget | None = None,
) -> M2Report | M2PrimeReport:
    """Fractional variant of the boundedness condition: for elements
    m*t1/t2 whose family evaluation is bounded, certify m*t1 <= n*t2.  A
    trivial multiplicative set delegates to check_M2_evidence."""
    if _trivial_mult_set(pres):
        return check_M2_evidence(pres, fam, m_degree, budget)
    if fam is None:
        fam = pres.family
    if fam is None:
        raise SpectrumError("no homomorphism family attached to the presentation")
    tprods = _t_products(pres, t_degree)
    entries = []
    for m_expr in _m_candidates(pres, m_degree):
        for t1 in tprods:
            for t2 in tprods:
                num = _family_ev(fam, m_expr * t1)
                den = _family_ev(fam, t2)
                ev = RatFun(num.num * den.den, num.den * den.num)
                verdict = _laurent_boundedness(fam, ev)
                if verdict[0] == "unbounded":
                    param = verdict[1]
                    if fam.constraints:
                        entries.append(
                            M2PrimeEntry(m_expr, t1, t2, ev, None, None, None, None, None, (),
                                         "zero endpoint under constraints; not decided")
                        )
                        continue
                    entries.append(
                        M2PrimeEntry(m_expr, t1, t2, ev, False, None, None, None, param,
                                     _unbounded_witness(fam, param))
                    )
                    continue
                if verdict[0] == "open":
                    entries.append(
                        M2PrimeEntry(m_expr, t1, t2, ev, None, None, None, None, None, (),
                                     verdict[1])
                    )
                    continue
                sup = verdict[1]
                n0 = max(1, ceil(sup))
                cert = None
                n_found = None
                for n in sorted({n0, n0 + 1, n0 + 2, n0 + 3, 2 * n0, 4 * n0}):
                    res = check_preorder(pres, m_expr * t1, t2.scale(n), budget)
                    if isinstance(res, Holds):
                        cert, n_found = res.certificate, n
                        break
                note = "" if cert is not None else "no derivation within budget"
                entries.append(
                    M2PrimeEntry(m_expr, t1, t2, ev, True, sup, n_found, cert, None, (), note)
                )
    return M2PrimeReport(tuple(entries))


# ---- duality orchestrator ----


@dataclass(frozen=True)
class AsymptoticallyGE:
    witness: object


@dataclass(frozen=True)
class Separated:
    hom: Hom
    lhs_value: Fraction
    rhs_value: Fraction


@dataclass(frozen=True)
class Inconclusive:
    reason: str


def dual_compare(
    pres: Presentation,
    x: Expr,
    y: Expr,
    fam: HomFamily | None = None,
    budget: Budget | None = None,
    horizon: int = 12,
    steps: int = 5,
) -> AsymptoticallyGE | Separated | Inconclusive:
    """Decide x >= y asymptotically from both sides at once.

    One search hunts for an asymptotic witness of x >= y, the other for a
    monotone homomorphism with f(x) < f(y).  The two verdicts are mutually
    exclusive; if both searches claim success, something inside is broken
    and a SoundnessError is raised rather than picking a side.  A missing
    separator alone never becomes a positive claim: the family covers a
    slice of the spectrum, not all of it.
    """
    from .asymptotic import AsymptoticWitness, check_asymptotic, is_conclusive
    from .search import degenerate

    if degenerate(pres, budget):
        return Inconclusive("presentation is degenerate: it derives 1 <= 0")

    sep = separate(pres, x, y, fam=fam, steps=steps)

    wit = None
    asym_note = ""
    if pres.power_universal is not None:
        res = check_asymptotic(pres, pres.power_universal, y, x, budget=budget, horizon=horizon)
        if isinstance(res, AsymptoticWitness) and is_conclusive(res):
            wit = res
        elif isinstance(res, AsymptoticWitness):
            asym_note = (
                f"only horizon evidence for ({x}) >= ({y}) at n <= {horizon}; "
                "no schema behind it"
            )
        elif isinstance(res, Refuted):
            asym_note = (
                f"asymptotic search refuted: f with f({y}) = {res.lhs_value} > "
                f"{res.rhs_value} = f({x})"
            )
            if sep is None:
                return Separated(res.hom, res.hom.eval(x), res.hom.eval(y))
        else:
            asym_note = f"asymptotic search: {res.reason}"
    else:
        asym_note = "no power universal element declared; asymptotic search skipped"

    if wit is not None and sep is not None:
        raise SoundnessError(
            f"both an asymptotic witness and a separator were found for ({x}) >= ({y}); "
            f"separator: {sep.describe()}"
        )
    if sep is not None:
        return Separated(sep, sep.eval(x), sep.eval(y))
    if wit is not None:
        return AsymptoticallyGE(wit)
    sep_note = "no separator in the attached family at this grid"
    if (fam or pres.family) is None:
        sep_note = "no homomorphism family attached"
    return Inconclusive(f"{sep_note}; {asym_note}")
