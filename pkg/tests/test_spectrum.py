"""Spectral points: verification, separation, membership, extension, duality."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings

from presemiring.asymptotic import ConstantK, Periodic
from presemiring.certificate import replay
from presemiring.expr import Expr
from presemiring.family import Hom
from presemiring.grammar import load_presentation, parse_expr, parse_presentation
from presemiring.presentation import Budget
from presemiring.search import Unknown, check_preorder
from presemiring.spectrum import (
    AsymptoticallyGE,
    ExtensionError,
    Inconclusive,
    MembershipCertificate,
    NoExtension,
    Separated,
    SliceHom,
    SoundnessError,
    SpectrumError,
    check_M1,
    check_M1prime,
    check_M2_evidence,
    check_M2prime_evidence,
    dual_compare,
    extend_b_to_minus,
    extend_minus_to_full,
    membership,
    replay_membership,
    separate,
    verify_hom,
    verify_slice_hom,
)

from conftest import instance
from oracles import eval_expr
from test_certificate import certificates

INST_A = load_presentation(instance("inst_a"))
INST_C = load_presentation(instance("inst_c"))
INST_D = load_presentation(instance("inst_d"))


def _a(text):
    return parse_expr(text, INST_A.gens, "<t>")


def _d(text):
    return parse_expr(text, INST_D.gens, "<t>")


G, H = _d("g"), _d("h")


def test_verification_checks_every_base_relation():
    assert verify_hom(INST_A, Hom(("x",), (Fraction(3, 2),)))
    assert not verify_hom(INST_A, Hom(("x",), (Fraction(3),)))
    assert not verify_hom(INST_A, Hom(("x", "y"), (Fraction(1), Fraction(1))))
    assert verify_hom(INST_D, Hom(("g", "h"), (Fraction(4), Fraction(1, 2))))
    assert not verify_hom(INST_D, Hom(("g", "h"), (Fraction(4), Fraction(2))))


@settings(max_examples=60, deadline=None)
@given(certificates())
def test_certified_inequalities_hold_at_every_feasible_point(cert):
    lhs, rhs = replay(INST_A, cert)
    for pt in INST_A.family.grid(3):
        assert INST_A.family.feasible(pt)
        hom = INST_A.family.at(pt)
        values = {g: Fraction(v) for g, v in hom.as_dict().items()}
        assert eval_expr(lhs, values) <= eval_expr(rhs, values)


def test_separation_returns_a_verified_witness_with_a_strict_gap():
    f = separate(INST_A, _a("1"), _a("x"))
    assert f is not None
    assert verify_hom(INST_A, f)
    values = {g: v for g, v in f.as_dict().items()}
    assert eval_expr(_a("1"), values) < eval_expr(_a("x"), values)
    assert f.eval(_a("x")) == 2

    assert separate(INST_A, _a("x"), _a("1")) is None
    assert separate(INST_C, parse_expr("y", INST_C.gens, "<t>"),
                    parse_expr("x", INST_C.gens, "<t>")) is None
    assert separate(INST_A, _a("1"), _a("x"), fam=INST_A.family, steps=3) is not None


def test_membership_certificates_share_one_bound():
    x = _a("x")
    mb = membership(INST_A, x, "sb", bound=8)
    assert isinstance(mb, MembershipCertificate)
    assert mb.n == 2
    assert replay_membership(INST_A, mb)
    assert replay(INST_A, mb.lower) == (_a("1"), x.scale(2))
    assert replay(INST_A, mb.upper) == (x, _a("2"))

    assert membership(INST_A, x, "splus").n == 1
    assert membership(INST_A, x, "sminus").n == 2

    unbounded = membership(INST_D, G, "sminus", bound=8)
    assert isinstance(unbounded, Unknown)
    assert "no n <= 8" in unbounded.reason


def test_membership_handles_zero_and_rejects_bad_requests():
    zero = Expr.zero(INST_A.gens)
    mz = membership(INST_A, zero, "splus")
    assert mz.n == 0 and mz.lower is None
    assert replay_membership(INST_A, membership(INST_A, zero, "sminus"))
    with pytest.raises(SpectrumError, match="unknown membership kind"):
        membership(INST_A, zero, "sboth")
    with pytest.raises(SpectrumError, match="bound"):
        membership(INST_A, zero, "sb", bound=0)
    with pytest.raises(SpectrumError, match="missing invertibility"):
        MembershipCertificate("splus", _a("x"), 1, None, None)


def test_tampered_membership_bounds_are_rejected():
    mb = membership(INST_A, _a("x"), "sb", bound=8)
    forged = MembershipCertificate("sb", _a("x"), mb.n + 1, mb.lower, mb.upper)
    with pytest.raises(SpectrumError):
        replay_membership(INST_A, forged)


def test_slice_homomorphisms_evaluate_partially():
    f = SliceHom(INST_D.gens, (_d("g*h"), H), (Fraction(3, 2), Fraction(1, 2)))
    assert f.eval(_d("g*h^2")) == Fraction(3, 4)
    assert f.eval(_d("5")) == 5
    assert f.eval(G) is None
    assert verify_slice_hom(INST_D, f)
    assert not verify_slice_hom(INST_D, SliceHom(INST_D.gens, (_d("g*h"), H),
                                                 (Fraction(3), Fraction(1, 2))))
    with pytest.raises(SpectrumError, match="constant"):
        SliceHom(INST_D.gens, (_d("2"),), (Fraction(1),))


def test_extension_from_the_bounded_slice_restricts_back():
    f = SliceHom(INST_D.gens, (_d("g*h"), H), (Fraction(3, 2), Fraction(1, 2)))
    back = extend_b_to_minus(f, (_d("g*h"), H))
    assert back.values == f.values
    with pytest.raises(ExtensionError, match="does not decompose"):
        extend_b_to_minus(f, (G,))


def test_extension_to_the_full_semiring_is_k_independent():
    f = SliceHom(INST_D.gens, (_d("g*h"), H), (Fraction(3, 2), Fraction(1, 2)))
    full = extend_minus_to_full(INST_D, f, H)
    assert isinstance(full, Hom)
    assert full.as_dict() == {"g": 3, "h": Fraction(1, 2)}
    assert verify_hom(INST_D, full)
    assert extend_minus_to_full(INST_D, f, H, extra_k=2) == full

    vanishing = SliceHom(INST_D.gens, (_d("g*h"), H), (Fraction(1), Fraction(0)))
    refusal = extend_minus_to_full(INST_D, vanishing, H)
    assert isinstance(refusal, NoExtension)
    assert "infinite value" in refusal.reason


def test_invertibility_condition_on_the_reference_instance():
    report = check_M1(INST_D)
    assert report.ok
    assert len(report.entries) == 15
    assert report.describe().splitlines()[0] == "M1 report: 15/15 samples verified"
    by_sample = {e.sample: e for e in report.entries}
    assert by_sample[_d("g^2*h")].m == H


def test_boundedness_evidence_splits_on_the_exponent_gap():
    report = check_M2_evidence(INST_D)
    assert report.ok
    assert report.describe().splitlines()[0] == (
        "M2 report: 15 monomials, 9 bounded-certified, 6 unbounded, 0 open"
    )
    for e in report.entries:
        mono = e.m.monomials()[0]
        a, b = mono
        assert e.bounded is (b >= a)
        if e.bounded:
            assert replay(INST_D, e.cert) == (e.m, Expr.nat(INST_D.gens, e.n))
            assert e.sup is not None and e.sup <= e.n
        else:
            assert e.witness_param is not None
            assert len(e.witness_points) >= 2


def test_fractional_conditions_reduce_exactly_when_t_is_trivial():
    assert check_M1prime(INST_A).describe() == check_M1(INST_A).describe()
    assert check_M2prime_evidence(INST_A).describe() == check_M2_evidence(INST_A).describe()


def test_fractional_conditions_on_the_localized_instance():
    report = check_M1prime(INST_D, samples=[G])
    entry = report.entries[0]
    one = Expr.one(INST_D.gens)
    assert (entry.m, entry.t1, entry.t2, entry.n) == (one, H, one, 2)
    assert replay(INST_D, entry.lower) == (one, _d("g*h").scale(2))
    assert replay(INST_D, entry.upper) == (_d("g*h"), _d("2"))

    evidence = check_M2prime_evidence(INST_D, m_degree=2)
    assert evidence.ok
    assert evidence.describe().splitlines()[0] == (
        "M2' report: 24 elements, 15 bounded-certified, 9 unbounded, 0 open"
    )


def test_dual_comparison_decides_both_directions():
    v = dual_compare(INST_A, _a("x"), _a("1"))
    assert isinstance(v, AsymptoticallyGE)
    assert isinstance(v.witness.envelope, ConstantK) and v.witness.envelope.k == 0

    s = dual_compare(INST_A, _a("1"), _a("x"))
    assert isinstance(s, Separated)
    assert (s.lhs_value, s.rhs_value) == (1, 2)
    assert verify_hom(INST_A, s.hom)

    d = dual_compare(INST_D, _d("2*h"), _d("g*h^2"))
    assert isinstance(d, AsymptoticallyGE)
    assert d.witness.envelope.k == 0


def test_the_duality_gap_between_derivation_and_asymptotics():
    x = parse_expr("x", INST_C.gens, "<t>")
    y = parse_expr("y", INST_C.gens, "<t>")
    plain = check_preorder(INST_C, y, x, Budget(nodes=8))
    assert isinstance(plain, Unknown)
    v = dual_compare(INST_C, x, y)
    assert isinstance(v, AsymptoticallyGE)
    assert isinstance(v.witness.envelope, Periodic)
    assert v.witness.max_envelope == 1


def test_inconclusive_outcomes_name_both_missing_halves():
    x = parse_expr("x", INST_C.gens, "<t>")
    y = parse_expr("y", INST_C.gens, "<t>")
    tight = Budget(nodes=8, degree=2, coeff=8)
    v = dual_compare(INST_C, y, x, budget=tight)
    assert isinstance(v, Inconclusive)
    assert "no homomorphism family attached" in v.reason

    collapsed = parse_presentation("generators: ;\nrelation: 1 <= 0;\n", "d")
    w = dual_compare(collapsed, Expr.one(()), Expr.zero(()))
    assert isinstance(w, Inconclusive)
    assert "degenerate" in w.reason


def test_conflicting_verdicts_raise_instead_of_picking_a_side(monkeypatch):
    import presemiring.spectrum as spectrum

    def fake_separate(pres, x, y, fam=None, steps=5, rounds=6):
        return Hom(("x",), (Fraction(1),))

    monkeypatch.setattr(spectrum, "separate", fake_separate)
    with pytest.raises(SoundnessError, match="both an asymptotic witness and a separator"):
        dual_compare(INST_A, _a("x"), _a("1"))
