"""Order extension by forced relations: certificates, layering, telescoping."""

from __future__ import annotations

from fractions import Fraction

import pytest

from presemiring.expr import Expr
from presemiring.family import Hom
from presemiring.grammar import load_presentation, parse_expr
from presemiring.orderext import (
    ExtHolds,
    OrderExtensionError,
    RfSpec,
    add_ext,
    check_ext,
    flatten_union,
    from_pair,
    from_plain,
    mul_ext,
    replay_ext,
    sandwich_check,
    split_union,
    telescoping,
    telescoping_schema,
    trans_ext,
    union_factorization_check,
)
from presemiring.search import Unknown, check_preorder
from presemiring.spectrum import SliceHom

from conftest import instance

INST_A = load_presentation(instance("inst_a"))


def _e(text):
    return parse_expr(text, INST_A.gens, "<t>")


X = _e("x")
ONE = _e("1")
TWO = _e("2")
R1 = [(TWO, X)]
R2 = [(_e("x + 1"), _e("x^2"))]


def test_plain_certificates_embed_with_no_triples():
    cert = check_preorder(INST_A, X, TWO).certificate
    ec = from_plain(cert)
    assert ec.n == 0
    assert ec.conclusion == (X, TWO)
    assert replay_ext(INST_A, [], ec) == (X, TWO)


def test_forced_pairs_have_a_reflexive_canonical_certificate():
    ec = from_pair(TWO, X)
    assert ec.triples == ((ONE, TWO, X),)
    assert ec.displayed() == (TWO + X, X + TWO)
    assert replay_ext(INST_A, R1, ec) == (TWO, X)
    with pytest.raises(OrderExtensionError, match="not in the relation"):
        replay_ext(INST_A, [], ec)


def test_base_derivable_goals_need_no_triples():
    v = check_ext(INST_A, R1, ONE, X)
    assert isinstance(v, ExtHolds)
    assert v.certificate.n == 0


def test_goal_inside_the_relation_uses_the_member_certificate():
    v = check_ext(INST_A, R1, TWO, X)
    assert isinstance(v, ExtHolds)
    assert v.certificate.triples == ((ONE, TWO, X),)
    assert replay_ext(INST_A, R1, v.certificate) == (TWO, X)


def test_search_finds_a_weighted_triple():
    v = check_ext(INST_A, R1, _e("2*x"), _e("x^2"))
    assert isinstance(v, ExtHolds)
    ec = v.certificate
    assert ec.support() == ((TWO, X),)
    assert replay_ext(INST_A, R1, ec) == (_e("2*x"), _e("x^2"))


def test_unreachable_goals_come_back_unknown():
    v = check_ext(INST_A, R1, X, ONE)
    assert isinstance(v, Unknown)
    assert "probes" in v.reason


def test_induced_relations_are_partial():
    rf = RfSpec(SliceHom(INST_A.gens, (X,), (Fraction(3, 2),)))
    assert rf.contains(X, TWO)
    assert not rf.contains(TWO, X)
    blind = RfSpec(SliceHom(INST_A.gens, (_e("x^2"),), (Fraction(2),)))
    assert not blind.contains(X, TWO)
    assert not blind.contains(TWO, X)


def test_extension_by_an_induced_relation():
    rf = RfSpec(SliceHom(INST_A.gens, (X,), (Fraction(3, 2),)))
    v = check_ext(INST_A, rf, _e("3"), _e("2*x"))
    assert isinstance(v, ExtHolds)
    assert v.certificate.triples == ((ONE, _e("3"), _e("2*x")),)
    assert replay_ext(INST_A, rf, v.certificate) == (_e("3"), _e("2*x"))
    bad = RfSpec(SliceHom(INST_A.gens, (X,), (Fraction(3),)))
    with pytest.raises(OrderExtensionError, match="monotonicity"):
        check_ext(INST_A, bad, ONE, X)


def test_congruences_transform_triples_and_conclusions():
    ec = from_pair(TWO, X)
    shifted = add_ext(ec, X)
    assert shifted.conclusion == (TWO + X, X + X)
    assert replay_ext(INST_A, R1, shifted) == (TWO + X, X + X)

    scaled = mul_ext(ec, X)
    assert scaled.triples == ((X, TWO, X),)
    assert scaled.conclusion == (_e("2*x"), _e("x^2"))
    assert replay_ext(INST_A, R1, scaled) == (_e("2*x"), _e("x^2"))


def test_transitivity_concatenates_support_in_order():
    three = _e("3")
    R = [(TWO, X), (X, three)]
    ec1 = from_pair(TWO, X)
    ec2 = from_pair(X, three)
    t = trans_ext(ec1, ec2)
    assert t.conclusion == (TWO, three)
    assert t.support() == ((TWO, X), (X, three))
    assert replay_ext(INST_A, R, t) == (TWO, three)
    with pytest.raises(OrderExtensionError, match="do not chain"):
        trans_ext(ec2, ec1)


def test_union_certificates_split_into_layers_and_flatten_back():
    union = R1 + R2
    v = check_ext(INST_A, union, _e("3"), _e("x^2"))
    assert isinstance(v, ExtHolds)
    ec = v.certificate
    assert set(ec.support()) == {R1[0], R2[0]}

    layered = split_union(ec, R1, R2)
    assert layered.support() == (R2[0],)
    assert layered.inner.support() == (R1[0],)
    got = replay_ext(
        INST_A, R2, layered, inner_replay=lambda e: replay_ext(INST_A, R1, e)
    )
    assert got == (_e("3"), _e("x^2"))
    with pytest.raises(OrderExtensionError, match="inner replay procedure"):
        replay_ext(INST_A, R2, layered)
    with pytest.raises(OrderExtensionError, match="already layered"):
        split_union(layered, R1, R2)
    with pytest.raises(OrderExtensionError, match="neither relation"):
        split_union(ec, [], R2)

    flat = flatten_union(layered)
    assert flat.n == ec.n
    assert replay_ext(INST_A, union, flat) == (_e("3"), _e("x^2"))


def test_union_factorization_closes_both_ways():
    report = union_factorization_check(INST_A, R1, R2, [(_e("3"), _e("x^2"))])
    assert report.consistent
    assert "conversions ok" in report.describe()
    rf = RfSpec(SliceHom(INST_A.gens, (X,), (Fraction(3, 2),)))
    with pytest.raises(OrderExtensionError, match="finite relation lists"):
        union_factorization_check(INST_A, rf, R2, [])


def test_telescoping_over_the_base_preorder():
    zero = Expr.zero(INST_A.gens)
    base = from_plain(check_preorder(INST_A, X, TWO).certificate)
    level = telescoping(INST_A, base, zero, zero, ONE, TWO, X, 2)
    assert level.conclusion == (_e("x^3"), _e("8"))
    assert replay_ext(INST_A, [], level) == (_e("x^3"), _e("8"))


def test_telescoping_over_a_forced_pair():
    zero = Expr.zero(INST_A.gens)
    base = from_pair(TWO, X)
    for n, ec in enumerate(telescoping_schema(INST_A, base, zero, zero, ONE, X, TWO, 3)):
        assert ec.conclusion == (TWO ** (n + 1), X ** (n + 1))
        assert replay_ext(INST_A, R1, ec) == (TWO ** (n + 1), X ** (n + 1))
    with pytest.raises(OrderExtensionError, match="base concludes"):
        telescoping(INST_A, base, ONE, zero, ONE, X, TWO, 1)


def test_sandwich_bounds_pin_candidate_homomorphisms():
    rf = RfSpec(SliceHom(INST_A.gens, (X,), (Fraction(3, 2),)))
    agreeing = Hom(("x",), (Fraction(3, 2),))
    low = Hom(("x",), (Fraction(7, 4),))
    high = Hom(("x",), (Fraction(2),))
    report = sandwich_check(INST_A, rf, [X, _e("x^2")], others=[agreeing, low, high])
    assert report.all_certified
    flags = {name: (agrees, violates) for name, agrees, violates in report.pinned}
    assert flags[agreeing.describe()] == (True, False)
    assert flags[low.describe()] == (False, True)
    assert flags[high.describe()] == (False, True)
    assert "UNEXPECTED" not in report.describe()
