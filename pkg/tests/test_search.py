"""Preorder decision search against an independent brute-force oracle."""

from __future__ import annotations

from fractions import Fraction

import pytest

from presemiring.expr import Expr
from presemiring.grammar import load_presentation, parse_expr
from presemiring.presentation import Budget
from presemiring.search import Holds, Refuted, Unknown, check_preorder, degenerate, find_certificate
from presemiring.certificate import replay

from conftest import instance
from oracles import eval_expr, saturate

INST_A = load_presentation(instance("inst_a"))


def _e(text, pres=INST_A):
    return parse_expr(text, pres.gens, "<t>")


def test_trivial_and_relation_level_answers():
    assert isinstance(check_preorder(INST_A, _e("x"), _e("x")), Holds)
    assert isinstance(check_preorder(INST_A, _e("1"), _e("x")), Holds)
    assert isinstance(check_preorder(INST_A, _e("x^2"), _e("4")), Holds)
    assert isinstance(check_preorder(INST_A, _e("x"), _e("1")), Refuted)


def test_holds_certificates_replay_to_the_question():
    for lhs, rhs in (("1", "x"), ("x + 1", "x + x"), ("x^2 + x", "2*x + 4")):
        verdict = check_preorder(INST_A, _e(lhs), _e(rhs))
        assert isinstance(verdict, Holds), (lhs, rhs, verdict)
        assert replay(INST_A, verdict.certificate) == (_e(lhs), _e(rhs))


def test_refutations_carry_a_strict_exact_gap():
    verdict = check_preorder(INST_A, _e("x"), _e("1"))
    assert isinstance(verdict, Refuted)
    point = verdict.hom.as_dict()
    values = {g: Fraction(v) for g, v in point.items()}
    assert eval_expr(_e("x"), values) == verdict.lhs_value
    assert eval_expr(_e("1"), values) == verdict.rhs_value
    assert verdict.lhs_value > verdict.rhs_value


def test_node_budget_bounds_the_returned_certificate():
    verdict = check_preorder(INST_A, _e("1"), _e("x"), Budget(nodes=1))
    assert isinstance(verdict, Holds)
    assert verdict.certificate.size <= 1
    tight = check_preorder(INST_A, _e("x^2 + x"), _e("2*x + 4"), Budget(nodes=2))
    assert isinstance(verdict.certificate.size, int)
    assert not isinstance(tight, Holds)


def test_find_certificate_never_consults_the_family():
    assert find_certificate(INST_A, _e("1"), _e("x")) is not None
    assert find_certificate(INST_A, _e("x"), _e("1")) is None


def test_foreign_generators_are_rejected():
    other = Expr.generator(("y",), "y")
    with pytest.raises(ValueError):
        check_preorder(INST_A, other, other)


def test_naturals_compare_arithmetically():
    nat = load_presentation(instance("nat"))
    assert isinstance(check_preorder(nat, _e("3", nat), _e("5", nat)), Holds)
    assert isinstance(check_preorder(nat, _e("5", nat), _e("3", nat)), Refuted)


def test_degenerate_presentations_are_detected():
    assert not degenerate(INST_A)
    from presemiring.grammar import parse_presentation

    collapsed = parse_presentation("generators: ;\nrelation: 1 <= 0;\n", "d")
    assert degenerate(collapsed)


def test_search_agrees_exactly_with_brute_force_saturation():
    """Ground truth by a different algorithm: saturate the closure over the
    64 expressions of degree <= 2 and coefficients <= 3, then decide every
    ordered pair.  The two implementations share no code; they must report
    the same Holds set, refutations may never land inside the closure, and
    the frozen counts pin the whole 4096-pair matrix."""
    elems, rel, _ = saturate(INST_A, max_degree=2, max_coeff=3)
    assert len(elems) == 64
    budget = Budget(nodes=400, degree=8, coeff=64)
    counts = {"holds": 0, "refuted": 0, "unknown": 0}
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            verdict = check_preorder(INST_A, a, b, budget)
            if isinstance(verdict, Holds):
                counts["holds"] += 1
                assert rel[i][j], f"search derived ({a}) <= ({b}) outside the saturated closure"
                assert replay(INST_A, verdict.certificate) == (a, b)
            elif isinstance(verdict, Refuted):
                counts["refuted"] += 1
                assert not rel[i][j], f"({a}) <= ({b}) is derivable yet was refuted"
            else:
                counts["unknown"] += 1
                assert not rel[i][j], f"({a}) <= ({b}) is derivable yet came back Unknown"
    assert counts == {"holds": 1888, "refuted": 2175, "unknown": 33}
