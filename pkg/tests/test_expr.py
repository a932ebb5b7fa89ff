"""Canonical-form algebra for expressions."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from presemiring.expr import Expr, ExprError
from presemiring.grammar import parse_expr

from oracles import eval_expr

GENS = ("x", "y")


def exprs(gens=GENS):
    monomials = st.tuples(*(st.integers(0, 3) for _ in gens))

    def build(terms):
        e = Expr.zero(gens)
        for mono, coeff in terms:
            e = e + Expr.monomial(gens, mono, coeff)
        return e

    return st.lists(st.tuples(monomials, st.integers(1, 5)), max_size=4).map(build)


@given(exprs(), exprs())
def test_addition_commutes(a, b):
    assert a + b == b + a


@given(exprs(), exprs(), exprs())
def test_addition_associates(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(exprs(), exprs())
def test_multiplication_commutes(a, b):
    assert a * b == b * a


@given(exprs(), exprs(), exprs())
def test_multiplication_distributes(a, b, c):
    assert a * (b + c) == a * b + a * c


@given(exprs())
def test_zero_and_one_are_units(e):
    assert e + Expr.zero(GENS) == e
    assert e * Expr.one(GENS) == e
    assert e * Expr.zero(GENS) == Expr.zero(GENS)


@given(exprs(), st.integers(0, 3), st.integers(0, 3))
def test_power_splits_into_products(e, m, n):
    assert e ** (m + n) == e**m * e**n
    assert e**0 == Expr.one(GENS)


@given(st.integers(0, 30), st.integers(0, 30))
def test_naturals_embed_as_a_semiring(n, m):
    assert Expr.nat(GENS, n) + Expr.nat(GENS, m) == Expr.nat(GENS, n + m)
    assert Expr.nat(GENS, n) * Expr.nat(GENS, m) == Expr.nat(GENS, n * m)
    assert Expr.nat(GENS, n).as_nat() == n


@given(exprs(), st.integers(0, 6))
def test_scale_agrees_with_nat_multiplication(e, k):
    assert e.scale(k) == Expr.nat(GENS, k) * e


@given(exprs(), exprs())
def test_minus_undoes_addition(a, b):
    assert (a + b).minus(b) == a


def test_minus_refuses_what_is_not_there():
    x = Expr.generator(GENS, "x")
    one = Expr.one(GENS)
    assert one.minus(x) is None
    assert x.minus(x.scale(2)) is None


@given(exprs(), exprs())
def test_dominance_is_additive_containment(a, b):
    assert (a + b).dominates(a)
    if not b.is_zero():
        assert not a.dominates(a + b)


def test_generator_and_nat_queries():
    x = Expr.generator(GENS, "x")
    assert x.as_nat() is None
    assert x.total_degree() == 1
    assert (x**2 + x.scale(3)).max_coeff() == 3
    with pytest.raises(ExprError):
        Expr.generator(GENS, "z")


def test_foreign_generator_tuples_do_not_mix():
    x = Expr.generator(("x",), "x")
    y = Expr.generator(("y",), "y")
    with pytest.raises(ExprError):
        x + y
    with pytest.raises(ExprError):
        x**-1


@given(exprs(), st.fractions(min_value=0, max_value=4), st.fractions(min_value=0, max_value=4))
def test_eval_matches_the_independent_evaluator(e, vx, vy):
    values = {"x": Fraction(vx), "y": Fraction(vy)}
    assert e.eval_at(values) == eval_expr(e, values)


@given(exprs())
def test_printed_form_reparses_to_itself(e):
    assert parse_expr(str(e), GENS, "<t>") == e
