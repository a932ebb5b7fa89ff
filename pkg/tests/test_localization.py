"""Fractions over a multiplicative set: equality, order, and witness transfer."""

from __future__ import annotations

import pytest

from presemiring.asymptotic import (
    AsymptoticError,
    AsymptoticWitness,
    ConstantK,
    Horizon,
    Periodic,
    check_asymptotic,
    check_power_universal,
    schema_certificate,
    verify_witness,
)
from presemiring.expr import Expr
from presemiring.grammar import load_presentation
from presemiring.localization import (
    Frac,
    LocAsymptoticWitness,
    LocCertificate,
    LocHolds,
    LocalizationError,
    NotEqual,
    convert_representatives,
    frac_eq,
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
from presemiring.search import Unknown, check_preorder

from conftest import instance

NAT = load_presentation(instance("nat"))
INST_A = load_presentation(instance("inst_a"))
INST_D = load_presentation(instance("inst_d"))

TWO = Expr.nat(NAT.gens, 2)
LOC2 = localize(NAT, (TWO,))

G = Expr.generator(INST_D.gens, "g")
H = Expr.generator(INST_D.gens, "h")
ONE_D = Expr.one(INST_D.gens)
TWO_D = Expr.nat(INST_D.gens, 2)
LOC_H = localize(INST_D)


def _n(k):
    return Expr.nat(NAT.gens, k)


def _g_below_2_over_h():
    v = frac_le(INST_D, LOC_H, LOC_H.frac(G, ONE_D), LOC_H.frac(TWO_D, H))
    assert isinstance(v, LocHolds)
    return v.certificate


def test_equal_fractions_get_an_equality_certificate():
    r = frac_eq(NAT, LOC2, LOC2.frac(_n(3), TWO), LOC2.frac(_n(6), _n(4)))
    assert isinstance(r, LocCertificate)
    assert r.is_equality
    assert r.r == Expr.one(NAT.gens)
    replay_loc(NAT, LOC2, r)


def test_distinct_fractions_get_a_numeric_counterexample():
    r = frac_eq(NAT, LOC2, LOC2.frac(_n(1), _n(1)), LOC2.frac(TWO, _n(1)))
    assert isinstance(r, NotEqual)
    assert r.lhs_value != r.rhs_value


def test_order_decisions_on_dyadic_fractions():
    v = frac_le(NAT, LOC2, LOC2.frac(_n(5), _n(4)), LOC2.frac(_n(3), TWO))
    assert isinstance(v, LocHolds)
    assert replay_loc(NAT, LOC2, v.certificate) == v.certificate.conclusion

    refl = frac_le(NAT, LOC2, LOC2.frac(_n(3), _n(4)), LOC2.frac(_n(3), _n(4)))
    assert isinstance(refl, LocHolds)
    assert refl.certificate.r == Expr.one(NAT.gens)

    assert isinstance(frac_le(NAT, LOC2, LOC2.frac(_n(3), TWO), LOC2.frac(_n(5), _n(4))), Unknown)


def test_denominators_must_be_recognized_products_of_t():
    with pytest.raises(LocalizationError, match="denominator"):
        LOC2.frac(_n(1), _n(3))
    bare = localize(NAT)
    assert bare.t_gens == ()
    with pytest.raises(LocalizationError, match="denominator"):
        bare.frac(_n(1), TWO)
    with pytest.raises(LocalizationError, match="0 cannot generate"):
        localize(NAT, (Expr.zero(NAT.gens),))


def test_cancelling_a_factor_from_t():
    x = Expr.generator(INST_A.gens, "x")
    loc_x = localize(INST_A, (x,))
    r = frac_eq(INST_A, loc_x, loc_x.frac(x, Expr.one(INST_A.gens)), loc_x.frac(x * x, x))
    assert isinstance(r, LocCertificate)
    assert r.is_equality
    assert r.r == Expr.one(INST_A.gens)


def test_the_declared_mult_set_is_the_default():
    assert LOC_H.t_gens == (H,)


def test_clearing_an_order_goal_to_the_base():
    lc = _g_below_2_over_h()
    assert lc.r == ONE_D
    assert lc.inner.conclusion == (G * H, TWO_D)
    replay_loc(INST_D, LOC_H, lc)


def test_fraction_arithmetic_is_cross_multiplication():
    half = LOC2.frac(_n(1), TWO)
    s = LOC2.add(half, half)
    assert s == Frac(_n(4), _n(4))
    r = frac_eq(NAT, LOC2, s, LOC2.frac(_n(1), _n(1)))
    assert isinstance(r, LocCertificate) and r.is_equality

    p = LOC2.mul(half, LOC2.frac(TWO, _n(1)))
    assert p == Frac(TWO, TWO)
    r = frac_eq(NAT, LOC2, p, LOC2.frac(_n(1), _n(1)))
    assert isinstance(r, LocCertificate) and r.is_equality


def test_transitivity_multiplies_the_witnesses():
    lc_g = _g_below_2_over_h()
    v = frac_le(INST_D, LOC_H, LOC_H.frac(TWO_D, H), LOC_H.frac(_n4(), H))
    assert isinstance(v, LocHolds)
    chained = loc_trans(LOC_H, lc_g, v.certificate)
    assert chained.conclusion == (LOC_H.frac(G, ONE_D), LOC_H.frac(_n4(), H))
    replay_loc(INST_D, LOC_H, chained)
    with pytest.raises(LocalizationError, match="do not chain"):
        loc_trans(LOC_H, v.certificate, lc_g)


def _n4():
    return Expr.nat(INST_D.gens, 4)


def test_congruences_preserve_replayability():
    lc = _g_below_2_over_h()
    e = LOC_H.frac(ONE_D, H)

    added = loc_add(LOC_H, lc, e)
    assert added.conclusion == (
        LOC_H.add(LOC_H.frac(G, ONE_D), e),
        LOC_H.add(LOC_H.frac(TWO_D, H), e),
    )
    replay_loc(INST_D, LOC_H, added)

    scaled = loc_mul(LOC_H, lc, e)
    assert scaled.conclusion == (
        LOC_H.mul(LOC_H.frac(G, ONE_D), e),
        LOC_H.mul(LOC_H.frac(TWO_D, H), e),
    )
    replay_loc(INST_D, LOC_H, scaled)


def test_conversion_to_other_representatives():
    lc = _g_below_2_over_h()
    a_new = LOC_H.frac(G * H, H)
    b_new = LOC_H.frac(TWO_D * H, H * H)
    converted = convert_representatives(LOC_H, lc, a_new, ONE_D, b_new, ONE_D)
    assert converted.conclusion == (a_new, b_new)
    assert converted.r == H
    replay_loc(INST_D, LOC_H, converted)
    with pytest.raises(LocalizationError, match="first representative"):
        convert_representatives(LOC_H, lc, LOC_H.frac(G * G, H), ONE_D, b_new, ONE_D)


def test_plain_certificates_lift_to_fractions_over_one():
    cert = check_preorder(INST_D, G * H, TWO_D).certificate
    lifted = lift_plain(LOC_H, cert)
    assert lifted.conclusion == (Frac(G * H, ONE_D), Frac(TWO_D, ONE_D))
    replay_loc(INST_D, LOC_H, lifted)


def _pu():
    pu = check_power_universal(INST_D, coverage=(ONE_D, G, H, G * H, TWO_D))
    assert not isinstance(pu, Unknown)
    return pu


def test_power_universality_transfers_to_fractions():
    pu = _pu()
    k, dom, inv = localized_power_universal(LOC_H, pu, LOC_H.frac(G, H))
    assert k == pu.require(G).k + pu.require(H).k
    replay_loc(INST_D, LOC_H, dom)
    replay_loc(INST_D, LOC_H, inv)


def test_lift_then_lower_preserves_the_envelope():
    w_base = check_asymptotic(INST_D, INST_D.power_universal, G * H, TWO_D)
    assert isinstance(w_base, AsymptoticWitness)
    lifted = lift_asymptotic(LOC_H, w_base)
    verify_loc_witness(INST_D, LOC_H, lifted, horizon=8)
    back = lower_asymptotic(INST_D, LOC_H, lifted, _pu())
    assert back.envelope == w_base.envelope


def test_lowering_a_witness_with_a_nontrivial_clearing_factor():
    cert_gh2 = check_preorder(INST_D, G * H, TWO_D).certificate
    schema = ("scale", ("pow", cert_gh2), H)
    assert schema_certificate(schema, 3).conclusion == (
        H * (G * H) ** 3,
        H * Expr.nat(INST_D.gens, 8),
    )
    w_loc = LocAsymptoticWitness(
        LOC_H.frac(G * H, ONE_D),
        LOC_H.frac(TWO_D, ONE_D),
        INST_D.power_universal,
        check_preorder(INST_D, ONE_D, INST_D.power_universal).certificate,
        H,
        (1,),
        ConstantK(0, schema),
    )
    verify_loc_witness(INST_D, LOC_H, w_loc, horizon=8)
    lowered = lower_asymptotic(INST_D, LOC_H, w_loc, _pu(), horizon=8)
    assert isinstance(lowered.envelope, Periodic)
    assert lowered.envelope.ks == (2, 4)
    assert (lowered.lhs, lowered.rhs) == (G * H, TWO_D)
    verify_witness(INST_D, lowered, 8)


def test_lowering_requires_canonical_fractions():
    cert_gh2 = check_preorder(INST_D, G * H, TWO_D).certificate
    schema = ("scale", ("pow", cert_gh2), H)
    cert_u = check_preorder(INST_D, ONE_D, INST_D.power_universal).certificate
    bad = LocAsymptoticWitness(
        LOC_H.frac(G, H),
        LOC_H.frac(TWO_D, ONE_D),
        INST_D.power_universal,
        cert_u,
        ONE_D,
        (0,),
        ConstantK(0, schema),
    )
    with pytest.raises(LocalizationError):
        lower_asymptotic(INST_D, LOC_H, bad, _pu())


def test_horizon_evidence_does_not_lift():
    cert_u = check_preorder(INST_D, ONE_D, INST_D.power_universal).certificate
    hz = AsymptoticWitness(
        G, H, INST_D.power_universal, cert_u, Horizon(((1, 0),), (None,))
    )
    with pytest.raises(AsymptoticError):
        lift_asymptotic(LOC_H, hz)


def test_tampered_witnesses_are_rejected_on_replay():
    lc = _g_below_2_over_h()
    with pytest.raises(LocalizationError):
        replay_loc(INST_D, LOC_H, LocCertificate(H, (1,), lc.inner, lc.conclusion))
    with pytest.raises(LocalizationError):
        replay_loc(INST_D, LOC_H, LocCertificate(G, (1,), lc.inner, lc.conclusion))
