"""Property suites for the lemma-level guarantees.

Each suite bundles the checks for one cluster of results: the asymptotic
preorder rules, witness flattening, power-universal conversion, relation
forcing, the telescoping schema, and localization.  Suites run against any
presentation; checks that need a declared power universal element or a
family are reported as skipped when the presentation has none.

Every check either replays a constructed certificate exactly or confirms a
contract violation raises.  There are no tolerances anywhere.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .asymptotic import (
    AsymptoticError,
    AsymptoticWitness,
    ConstantK,
    Horizon,
    Periodic,
    UniformDoubled,
    cancel_factor,
    check_asymptotic,
    check_power_universal,
    compose_asymptotic,
    add_congruence,
    mul_congruence,
    convert_power_universal,
    flatten,
    is_conclusive,
    small_factors,
    verify_witness,
)
from .certificate import cert_pow, dominance, mul_cong, refl
from .expr import Expr
from .localization import (
    Frac,
    LocHolds,
    convert_representatives,
    frac_le,
    lift_asymptotic,
    lift_plain,
    loc_add,
    loc_mul,
    loc_trans,
    localize,
    localized_power_universal,
    lower_asymptotic,
    replay_loc,
    verify_loc_witness,
)
from .orderext import (
    ExtHolds,
    check_ext,
    from_pair,
    from_plain,
    add_ext,
    mul_ext,
    trans_ext,
    replay_ext,
    telescoping_schema,
    union_factorization_check,
)
from .presentation import Presentation
from .search import Holds, check_preorder
from .spectrum import verify_hom


@dataclass(frozen=True)
class SuiteRow:
    name: str
    status: str  # pass | fail | skip
    detail: str = ""


@dataclass(frozen=True)
class SuiteResult:
    name: str
    rows: tuple[SuiteRow, ...]

    @property
    def failed(self) -> int:
        return sum(1 for r in self.rows if r.status == "fail")

    def describe(self) -> str:
        lines = [f"suite {self.name}"]
        for r in self.rows:
            tail = f"  [{r.detail}]" if r.detail else ""
            lines.append(f"  {r.status:4s}  {r.name}{tail}")
        return "\n".join(lines)


class _Runner:
    def __init__(self):
        self.rows = []

    def run(self, name, fn):
        try:
            detail = fn()
        except _Skip as s:
            self.rows.append(SuiteRow(name, "skip", str(s)))
        except Exception as e:  # noqa: BLE001 - a suite must report, not crash
            self.rows.append(SuiteRow(name, "fail", f"{type(e).__name__}: {e}"))
        else:
            self.rows.append(SuiteRow(name, "pass", detail or ""))

    def result(self, name) -> SuiteResult:
        return SuiteResult(name, tuple(self.rows))


class _Skip(Exception):
    pass


def _anchor_pair(pres: Presentation) -> tuple[Expr, Expr]:
    """A pair lo <= hi that holds in the presentation: the first relation,
    or 1 <= 2 over the bare naturals of the generator set."""
    if pres.relations:
        return pres.relations[0]
    return Expr.one(pres.gens), Expr.nat(pres.gens, 2)


def _require_u(pres: Presentation) -> Expr:
    if pres.power_universal is None:
        raise _Skip("no power universal element declared")
    return pres.power_universal


def _pu_with(pres: Presentation, extra=()):
    u = _require_u(pres)
    one = Expr.one(pres.gens)
    coverage = [one]
    coverage.extend(Expr.generator(pres.gens, g) for g in pres.gens)
    coverage.append(u)
    for e in extra:
        coverage.append(e)
    seen = []
    for e in coverage:
        if e not in seen and not e.is_zero():
            seen.append(e)
    pu = check_power_universal(pres, coverage=tuple(seen))
    if not hasattr(pu, "entries"):
        raise _Skip(f"power universality not established: {getattr(pu, 'reason', pu)}")
    return pu


def _base_cert(pres: Presentation, lo: Expr, hi: Expr):
    v = check_preorder(pres, lo, hi)
    if not isinstance(v, Holds):
        raise _Skip(f"anchor inequality ({lo}) <= ({hi}) did not close")
    return v.certificate


def run_asymptotic_suite(pres: Presentation, horizon: int = 10) -> SuiteResult:
    """The asymptotic preorder rules: containment of the base preorder,
    preordered-semiring structure, power universality carried over,
    cancellation, and fixed small factors."""
    t = _Runner()
    lo, hi = _anchor_pair(pres)
    one = Expr.one(pres.gens)

    def base_lifts():
        u = _require_u(pres)
        w = check_asymptotic(pres, u, lo, hi)
        if not (isinstance(w, AsymptoticWitness) and is_conclusive(w)):
            raise AssertionError(f"no conclusive witness for the base inequality: {w}")
        if w.max_envelope != 0:
            raise AssertionError(f"base inequality lifted with envelope {w.max_envelope}")
        verify_witness(pres, w, horizon)
        return "envelope 0"

    def reflexive():
        u = _require_u(pres)
        w = check_asymptotic(pres, u, hi, hi)
        if not (isinstance(w, AsymptoticWitness) and is_conclusive(w)):
            raise AssertionError("reflexivity did not close")
        verify_witness(pres, w, horizon)
        return ""

    def zero_one():
        u = _require_u(pres)
        w = check_asymptotic(pres, u, Expr.zero(pres.gens), one)
        if not (isinstance(w, AsymptoticWitness) and is_conclusive(w)):
            raise AssertionError("0 below 1 did not close")
        verify_witness(pres, w, horizon)
        return ""

    def transitive():
        u = _require_u(pres)
        w1 = check_asymptotic(pres, u, lo, hi)
        w2 = check_asymptotic(pres, u, hi, hi + one)
        w = compose_asymptotic(w1, w2)
        verify_witness(pres, w, horizon)
        want = tuple(
            w1.k_at(n) + w2.k_at(n) for n in range(1, horizon + 1)
        )
        got = tuple(w.k_at(n) for n in range(1, horizon + 1))
        if got != want:
            raise AssertionError(f"envelopes did not add pointwise: {got} vs {want}")
        return "envelopes add pointwise"

    def congruences():
        u = _require_u(pres)
        w = check_asymptotic(pres, u, lo, hi)
        wa = add_congruence(w, one)
        verify_witness(pres, wa, min(horizon, 6))
        wm = mul_congruence(w, u)
        verify_witness(pres, wm, horizon)
        return "sum and product with a fixed element"

    def power_universal_again():
        pu = _pu_with(pres, (lo, hi))
        for entry in pu.entries:
            x = entry.element
            up = AsymptoticWitness(
                x, pu.u ** entry.k, pu.u, pu.cert_ge_one,
                ConstantK(0, ("pow", entry.dom)),
            )
            verify_witness(pres, up, horizon)
            down = AsymptoticWitness(
                one, (pu.u ** entry.k) * x, pu.u, pu.cert_ge_one,
                ConstantK(0, ("pow", entry.inv)),
            )
            verify_witness(pres, down, horizon)
        return f"{len(pu.entries)} covered elements, both bounds"

    def cancellation():
        pu = _pu_with(pres, (lo, hi))
        u = pu.u
        cert = mul_cong(_base_cert(pres, lo, hi), u)
        w = cancel_factor(pres, u, hi, lo, cert, pu)
        verify_witness(pres, w, horizon)
        k = pu.require(u).k
        if w.max_envelope != 2 * k:
            raise AssertionError(f"cancellation envelope {w.max_envelope}, expected {2 * k}")
        return f"cancelled the power universal factor at envelope {2 * k}"

    def cancellation_coherence():
        pu = _pu_with(pres, (lo, hi))
        w = cancel_factor(pres, one, hi, lo, _base_cert(pres, lo, hi), pu)
        verify_witness(pres, w, horizon)
        if w.max_envelope != 0:
            raise AssertionError("cancelling the unit factor should cost nothing")
        return "unit factor reduces to the direct lift"

    def fixed_small_factors():
        pu = _pu_with(pres, (lo, hi))
        base = _base_cert(pres, lo, hi)
        w = small_factors(pres, one, one, hi, lo, ("pow", base), pu, horizon)
        verify_witness(pres, w, horizon)
        u = pu.u
        w2 = small_factors(
            pres, u, u, hi, lo, ("scale", ("pow", base), u), pu, horizon
        )
        verify_witness(pres, w2, horizon)
        return "unit factors and a shared nontrivial factor"

    t.run("(i) base inequalities lift with envelope 0", base_lifts)
    t.run("(ii) reflexivity", reflexive)
    t.run("(ii) zero below one", zero_one)
    t.run("(ii) transitivity composes witnesses", transitive)
    t.run("(ii) congruence with sum and product", congruences)
    t.run("(iii) power universality survives asymptotically", power_universal_again)
    t.run("(iv) cancellation of a nonzero factor", cancellation)
    t.run("(iv) cancelling 1 is the direct lift", cancellation_coherence)
    t.run("(v) fixed small factors absorb", fixed_small_factors)
    return t.result("asymptotic-properties")


def run_flattening_suite(pres: Presentation, horizon: int = 12) -> SuiteResult:
    """Doubled witnesses collapse to plain ones."""
    t = _Runner()
    lo, hi = _anchor_pair(pres)

    def trivial():
        pu = _pu_with(pres, (lo, hi))
        w = check_asymptotic(pres, pu.u, hi, hi)
        doubled = UniformDoubled(w, 0)
        flat = flatten(pres, doubled, pu, horizon)
        if flat.max_envelope != 0:
            raise AssertionError(f"trivial doubling flattened to {flat.max_envelope}")
        return "all-zero envelopes stay zero"

    def constants():
        pu = _pu_with(pres, (lo, hi))
        w = check_asymptotic(pres, pu.u, hi, hi)
        raised = AsymptoticWitness(
            w.lhs, w.rhs, w.u, w.cert_u,
            ConstantK(1, ("raise", w.envelope.schema, (1, (1,)), w.cert_u)),
        )
        verify_witness(pres, raised, 4)
        doubled = UniformDoubled(raised, 2)
        flat = flatten(pres, doubled, pu, horizon)
        verify_witness(pres, flat, 36)
        return f"outer 1, inner 2: envelope {tuple(flat.envelope.ks)} replayed to 36"

    def horizon_refused():
        pu = _pu_with(pres, (lo, hi))
        w = check_asymptotic(pres, pu.u, hi, hi)

        class Stub:
            x = hi
            y = hi
            u = pu.u
            k_out = 0

            def at(self, n):
                return AsymptoticWitness(
                    hi, hi, pu.u, w.cert_u, Horizon(((1, 0),), (None,))
                )

        try:
            flatten(pres, Stub(), pu, horizon)
        except AsymptoticError:
            return "horizon-only inner family raises"
        raise AssertionError("flatten accepted horizon evidence")

    t.run("all-constant-zero doubling", trivial)
    t.run("outer constant 1 with inner constant 2", constants)
    t.run("horizon evidence refused", horizon_refused)
    return t.result("witness-flattening")


def run_pu_conversion_suite(pres: Presentation, horizon: int = 10) -> SuiteResult:
    """Changing the power universal reference element."""
    t = _Runner()
    lo, hi = _anchor_pair(pres)

    def identity():
        u = _require_u(pres)
        w = check_asymptotic(pres, u, lo, hi)
        converted = convert_power_universal(w, u, 1, refl(u), w.cert_u)
        verify_witness(pres, converted, horizon)
        if tuple(converted.envelope.ks) != tuple(w.envelope.ks):
            raise AssertionError("k = 1 should keep the envelope")
        return "k = 1 keeps the envelope"

    def scaled():
        u = _require_u(pres)
        w0 = check_asymptotic(pres, u, hi, hi)
        raised = AsymptoticWitness(
            w0.lhs, w0.rhs, u, w0.cert_u,
            ConstantK(1, ("raise", w0.envelope.schema, (1, (1,)), w0.cert_u)),
        )
        cert = mul_cong(cert_pow(w0.cert_u, 2), u)
        converted = convert_power_universal(raised, u, 3, cert, w0.cert_u)
        verify_witness(pres, converted, horizon)
        if converted.envelope.ks != (3,):
            raise AssertionError(f"constant 1 at k = 3 became {converted.envelope.ks}")
        return "constant 1 becomes constant 3"

    def periodic():
        u = _require_u(pres)
        w0 = check_asymptotic(pres, u, hi, hi)
        per = AsymptoticWitness(
            w0.lhs, w0.rhs, u, w0.cert_u,
            Periodic((0, 1), ("raise", w0.envelope.schema, (2, (0, 1)), w0.cert_u)),
        )
        verify_witness(pres, per, horizon)
        cert = mul_cong(w0.cert_u, u)
        converted = convert_power_universal(per, u, 2, cert, w0.cert_u)
        verify_witness(pres, converted, horizon)
        if converted.envelope.ks != (0, 2):
            raise AssertionError(f"periodic (0, 1) at k = 2 became {converted.envelope.ks}")
        return "periodic (0, 1) becomes (0, 2)"

    t.run("conversion with k = 1", identity)
    t.run("constant envelope scales by k", scaled)
    t.run("periodic envelope scales by k", periodic)
    return t.result("power-universal-conversion")


def run_relation_suite(pres: Presentation, budget=None) -> SuiteResult:
    """Forcing a relation set into the preorder."""
    t = _Runner()
    lo, hi = _anchor_pair(pres)
    one = Expr.one(pres.gens)
    two = Expr.nat(pres.gens, 2)
    pair2 = pres.relations[1] if len(pres.relations) > 1 else (one, two)
    R1 = [(lo, hi)]
    R2 = [pair2]

    def contains_plain():
        v = check_ext(pres, [], lo, hi, budget)
        if not isinstance(v, ExtHolds):
            raise AssertionError("empty relation set lost a base inequality")
        ec = v.certificate
        if ec.n != 0:
            raise AssertionError("empty relation set should force n = 0")
        replay_ext(pres, [], ec)
        ec2 = from_plain(_base_cert(pres, lo, hi))
        replay_ext(pres, [], ec2)
        return "n = 0 wraps a plain derivation"

    def contains_pairs():
        ec = from_pair(lo, hi)
        replay_ext(pres, R1, ec)
        v = check_ext(pres, R1, lo, hi, budget)
        if not isinstance(v, ExtHolds):
            raise AssertionError("forced pair not found by search")
        replay_ext(pres, R1, v.certificate)
        return "the one-triple certificate replays"

    def semiring():
        ec1 = from_pair(lo, hi)
        step = from_plain(dominance(hi, hi + one))
        chained = trans_ext(ec1, step)
        got = replay_ext(pres, R1, chained)
        if got != (lo, hi + one):
            raise AssertionError(f"transitivity concluded {got}")
        summed = add_ext(ec1, two)
        replay_ext(pres, R1, summed)
        scaled = mul_ext(ec1, two)
        replay_ext(pres, R1, scaled)
        return "transitivity and both congruences replay"

    def union():
        goals = [(lo, hi), (lo + one, hi + one), (hi, hi)]
        report = union_factorization_check(pres, R1, R2, goals, budget)
        if not report.consistent:
            raise AssertionError(report.describe())
        report2 = union_factorization_check(pres, R1, R1, goals, budget)
        if not report2.consistent:
            raise AssertionError("idempotent union disagreed")
        return f"{len(goals)} goals agree both ways"

    def finite_support():
        R = R1 + R2 if pair2 not in R1 else R1
        v = check_ext(pres, R, lo, hi, budget)
        if not isinstance(v, ExtHolds):
            raise AssertionError("goal did not close under the union")
        used = v.certificate.support()
        replay_ext(pres, list(used), v.certificate)
        v2 = check_ext(pres, list(used), lo, hi, budget)
        if not isinstance(v2, ExtHolds):
            raise AssertionError("restriction to the support lost the goal")
        return f"support has {len(used)} of {len(R)} pairs"

    t.run("(i) the base preorder embeds at n = 0", contains_plain)
    t.run("(ii) forced pairs hold", contains_pairs)
    t.run("(iii) preordered semiring structure", semiring)
    t.run("(iv) union factorization", union)
    t.run("(v) finite support", finite_support)
    return t.result("relation-forcing")


def run_telescoping_suite(pres: Presentation, levels: int = 8, budget=None) -> SuiteResult:
    """The inductive certificate family from the relation-spectrum proof."""
    t = _Runner()
    lo, hi = _anchor_pair(pres)
    one = Expr.one(pres.gens)
    zero = Expr.zero(pres.gens)
    R = [(lo, hi)]

    def ladder():
        base = from_plain(dominance(hi, hi + lo))
        count = 0
        for level, ec in enumerate(
            telescoping_schema(pres, base, zero, hi, one, lo, hi, levels)
        ):
            got = replay_ext(pres, R, ec)
            if got != ec.conclusion:
                raise AssertionError(f"level {level} replayed to {got}")
            count += 1
        if count != levels + 1:
            raise AssertionError(f"{count} levels, expected {levels + 1}")
        return f"levels 0..{levels} replay"

    def degenerate():
        base = from_plain(dominance(hi, hi + hi))
        for ec in telescoping_schema(pres, base, zero, hi, one, hi, hi, 3):
            replay_ext(pres, [(hi, hi)], ec)
        return "x = y collapses and still replays"

    t.run(f"ladder to level {levels}", ladder)
    t.run("degenerate equal pair", degenerate)
    return t.result("telescoping")


def run_localization_suite(
    pres: Presentation, seed: int = 0, swaps: int = 200
) -> SuiteResult:
    """Fractions: well-definedness under representative swaps, structure of
    the localized preorder, and the asymptotic round-trip."""
    t = _Runner()
    lo, hi = _anchor_pair(pres)
    one = Expr.one(pres.gens)
    loc = localize(pres)
    rng = random.Random(seed)

    def t_product(max_degree):
        e = one
        for tg in loc.t_gens:
            e = e * (tg ** rng.randint(0, max_degree))
        return e

    def canonical_monotone():
        lc = lift_plain(loc, _base_cert(pres, lo, hi))
        replay_loc(pres, loc, lc)
        if lc.r != one:
            raise AssertionError("lifting must not introduce a witness factor")
        return "r = 1 on lifted derivations"

    def well_defined():
        lc = lift_plain(loc, _base_cert(pres, lo, hi))
        agree_every = max(1, swaps // 10)
        for i in range(swaps):
            p = t_product(2)
            q = t_product(2)
            a_new = Frac(lo * p, p)
            b_new = Frac(hi * q, q)
            converted = convert_representatives(loc, lc, a_new, one, b_new, one)
            replay_loc(pres, loc, converted)
            if i % agree_every == 0:
                v = frac_le(pres, loc, a_new, b_new)
                if not isinstance(v, LocHolds):
                    raise AssertionError(
                        f"swap {i}: ({a_new}) <= ({b_new}) lost by the search"
                    )
        return f"{swaps} random swaps convert and replay"

    def structure():
        lc1 = lift_plain(loc, _base_cert(pres, lo, hi))
        lc2 = lift_plain(loc, dominance(hi, hi + one))
        chained = loc_trans(loc, lc1, lc2)
        replay_loc(pres, loc, chained)
        tg = loc.t_gens[0] if loc.t_gens else one
        e = Frac(one, tg)
        replay_loc(pres, loc, loc_add(loc, lc1, e))
        replay_loc(pres, loc, loc_mul(loc, lc1, e))
        return "transitivity and congruences replay"

    def u_over_one():
        pu = _pu_with(pres, (lo, hi))
        tg = loc.t_gens[0] if loc.t_gens else one
        pu2 = _pu_with(pres, (lo, hi, tg))
        k, dom, inv = localized_power_universal(loc, pu2, Frac(hi, tg))
        replay_loc(pres, loc, dom)
        replay_loc(pres, loc, inv)
        return f"u/1 bounds ({hi})/({tg}) at k = {k}"

    def round_trip():
        u = _require_u(pres)
        w = check_asymptotic(pres, u, lo, hi)
        if not (isinstance(w, AsymptoticWitness) and is_conclusive(w)):
            raise AssertionError("no base witness to lift")
        lifted = lift_asymptotic(loc, w)
        verify_loc_witness(pres, loc, lifted, 8)
        pu = _pu_with(pres, (lo, hi))
        back = lower_asymptotic(pres, loc, lifted, pu)
        if back.envelope != w.envelope:
            raise AssertionError("round trip changed the envelope")
        verify_witness(pres, back, 8)
        return "lift then lower is the identity"

    def nonvanishing():
        if pres.family is None:
            raise _Skip("no homomorphism family declared")
        fam = pres.family
        points = [pt for pt in fam.grid(3) if fam.feasible(pt)]
        if not points:
            raise _Skip("family grid is empty")
        checked = 0
        for pt in points:
            hom = fam.at(pt)
            if not verify_hom(pres, hom):
                continue
            checked += 1
            for tg in loc.t_gens:
                if hom.eval(tg) <= 0:
                    raise AssertionError(
                        f"{hom.describe()} vanishes on T member {tg}"
                    )
        if checked == 0:
            raise _Skip("no verified points on the grid")
        return f"{checked} verified points positive on T"

    t.run("canonical map is monotone", canonical_monotone)
    t.run(f"well-definedness under {swaps} representative swaps", well_defined)
    t.run("localized preordered semiring structure", structure)
    t.run("power universality of u/1", u_over_one)
    t.run("asymptotic round-trip", round_trip)
    t.run("verified points stay positive on T", nonvanishing)
    return t.result("localization")


def run_all(pres: Presentation, seed: int = 0) -> list[SuiteResult]:
    return [
        run_asymptotic_suite(pres),
        run_flattening_suite(pres),
        run_pu_conversion_suite(pres),
        run_relation_suite(pres),
        run_telescoping_suite(pres),
        run_localization_suite(pres, seed=seed),
    ]
