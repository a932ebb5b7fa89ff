"""Homomorphism slices: points, intervals, rational values, grids."""

from __future__ import annotations

from fractions import Fraction

import pytest

from presemiring.expr import Expr
from presemiring.family import DEFAULT_FLOOR, FamilyError, Hom, HomFamily, Interval, RatFun
from presemiring.grammar import load_presentation, parse_expr

from conftest import instance
from oracles import eval_expr

INST_A = load_presentation(instance("inst_a"))
INST_D = load_presentation(instance("inst_d"))


def test_hom_evaluates_like_direct_substitution():
    f = Hom(("g", "h"), (Fraction(4), Fraction(1, 2)))
    e = parse_expr("2*g*h + h^2 + 3", ("g", "h"), "<t>")
    assert f.eval(e) == eval_expr(e, f.as_dict()) == Fraction(4 + Fraction(1, 4) + 3)


def test_hom_rejects_negative_values_and_foreign_expressions():
    with pytest.raises(FamilyError):
        Hom(("x",), (Fraction(-1),))
    f = Hom(("x",), (Fraction(2),))
    with pytest.raises(FamilyError):
        f.eval(Expr.one(("x", "y")))


def test_hom_describe_lists_generator_values():
    assert Hom(("x",), (Fraction(3, 2),)).describe() == "f(x) = 3/2"
    assert Hom((), ()).describe() == "f = id"


def test_interval_shapes_and_truncation():
    assert str(Interval(Fraction(0), Fraction(2), lo_open=True)) == "(0, 2]"
    assert Interval(Fraction(1), Fraction(2)).effective(DEFAULT_FLOOR) == (1, 2)
    lo, hi = Interval(Fraction(0), Fraction(2), lo_open=True).effective(DEFAULT_FLOOR)
    assert (lo, hi) == (Fraction(1, 64), 2)
    with pytest.raises(FamilyError):
        Interval(Fraction(2), Fraction(1))
    with pytest.raises(FamilyError):
        Interval(Fraction(1), Fraction(1), hi_open=True)
    with pytest.raises(FamilyError):
        Interval(Fraction(0), Fraction(1, 128), lo_open=True).effective(DEFAULT_FLOOR)


def test_ratfun_cancels_content_and_common_monomials():
    c = ("c",)
    sq_over_lin = RatFun(parse_expr("c^2", c, "<t>"), parse_expr("c", c, "<t>"))
    assert str(sq_over_lin) == "c"
    halved = RatFun(parse_expr("2*c", c, "<t>"), parse_expr("2", c, "<t>"))
    assert str(halved) == "c"
    mixed = RatFun(parse_expr("c^2 + c", c, "<t>"), parse_expr("c", c, "<t>"))
    assert str(mixed) == "c + 1"
    with pytest.raises(FamilyError):
        RatFun(parse_expr("1", c, "<t>"), Expr.zero(c))


def test_ratfun_laurent_exponents_only_for_monomial_ratios():
    ab = ("ab", "b")
    g_value = RatFun(parse_expr("ab", ab, "<t>"), parse_expr("b", ab, "<t>"))
    assert g_value.laurent_exponents() == {"ab": 1, "b": -1}
    assert RatFun.poly(parse_expr("ab + 1", ab, "<t>")).laurent_exponents() is None


def test_ratfun_arithmetic_matches_pointwise_evaluation():
    c = ("c",)
    f = RatFun(parse_expr("c + 1", c, "<t>"), parse_expr("c", c, "<t>"))
    g = RatFun.poly(parse_expr("2*c", c, "<t>"))
    pt = {"c": Fraction(3, 2)}
    assert (f * g).eval(pt) == f.eval(pt) * g.eval(pt)
    assert (f + g).eval(pt) == f.eval(pt) + g.eval(pt)
    assert (f**3).eval(pt) == f.eval(pt) ** 3
    assert (2 * f).eval(pt) == 2 * f.eval(pt)
    with pytest.raises(FamilyError):
        f.eval({"c": Fraction(0)})


def test_family_construction_is_validated():
    c = ("c",)
    val = RatFun.poly(parse_expr("c", c, "<t>"))
    with pytest.raises(FamilyError):
        HomFamily(("x",), ("c", "c"), (Interval(1, 2), Interval(1, 2)), (val, val))
    with pytest.raises(FamilyError):
        HomFamily(("x",), ("c",), (), (val,))
    with pytest.raises(FamilyError):
        HomFamily(("x", "y"), ("c",), (Interval(1, 2),), (val,))
    foreign = RatFun.poly(parse_expr("d", ("d",), "<t>"))
    with pytest.raises(FamilyError):
        HomFamily(("x",), ("c",), (Interval(1, 2),), (foreign,))


def test_grid_is_deterministic_with_exact_endpoints():
    fam = INST_A.family
    pts = fam.grid(5)
    assert [p["c"] for p in pts] == [1, Fraction(5, 4), Fraction(3, 2), Fraction(7, 4), 2]
    assert pts == fam.grid(5)
    assert [p["c"] for p in fam.grid(1)] == [1, 2]


def test_grid_covers_the_effective_box_lexicographically():
    fam = INST_D.family
    assert fam.effective_box() == [(1, 2), (Fraction(1, 64), 2)]
    pts = fam.grid(3)
    assert len(pts) == 9
    assert pts[0] == {"ab": 1, "b": Fraction(1, 64)}
    assert pts[-1] == {"ab": 2, "b": 2}
    keys = [(p["ab"], p["b"]) for p in pts]
    assert keys == sorted(keys)
    assert all(fam.feasible(p) for p in pts)


def test_degenerate_axis_collapses_to_a_single_point():
    c = ("c",)
    fam = HomFamily(("x",), ("c",), (Interval(2, 2),), (RatFun.poly(parse_expr("c", c, "<t>")),))
    assert [p["c"] for p in fam.grid(7)] == [2]


def test_instantiation_evaluates_the_declared_values():
    f = INST_D.family.at({"ab": Fraction(2), "b": Fraction(1, 2)})
    assert f.as_dict() == {"g": 4, "h": Fraction(1, 2)}
    with pytest.raises(FamilyError):
        INST_D.family.at({"ab": Fraction(2)})


def test_feasibility_respects_constraints():
    c = ("c",)
    val = RatFun.poly(parse_expr("c", c, "<t>"))
    capped = HomFamily(
        ("x",),
        ("c",),
        (Interval(0, 4),),
        (val,),
        constraints=((parse_expr("c^2", c, "<t>"), parse_expr("2*c + 3", c, "<t>")),),
    )
    assert capped.feasible({"c": Fraction(3)})
    assert not capped.feasible({"c": Fraction(4)})
    assert not capped.feasible({"c": Fraction(5)})
