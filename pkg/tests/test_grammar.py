"""Presentation language: parsing, printing, and error reporting."""

from __future__ import annotations

import re

import pytest
from hypothesis import given, strategies as st

from presemiring.grammar import (
    ParseError,
    load_presentation,
    parse_expr,
    parse_presentation,
    print_presentation,
)

from conftest import instance

INSTANCE_NAMES = ("inst_a", "inst_c", "inst_d", "nat")


def test_inst_a_has_one_generator_and_two_relations():
    pres = load_presentation(instance("inst_a"))
    assert pres.gens == ("x",)
    assert len(pres.relations) == 2


def test_inst_d_carries_a_two_parameter_family():
    pres = load_presentation(instance("inst_d"))
    assert pres.family is not None
    assert len(pres.family.params) == 2


def test_empty_generator_list_is_the_naturals():
    pres = load_presentation(instance("nat"))
    assert pres.gens == ()
    assert parse_expr("7", pres.gens, "<t>").as_nat() == 7


@pytest.mark.parametrize("name", INSTANCE_NAMES)
def test_print_parse_print_is_a_fixed_point(name):
    pres = load_presentation(instance(name))
    text = print_presentation(pres)
    again = parse_presentation(text, name)
    assert print_presentation(again) == text
    assert again.gens == pres.gens
    assert again.relations == pres.relations


def test_undeclared_name_is_rejected_at_its_position():
    with pytest.raises(ParseError, match=r"f:2:16: undeclared name 'z'"):
        parse_presentation("generators: x;\nrelation: x <= z;\n", "f")


def test_duplicate_sections_are_rejected():
    with pytest.raises(ParseError, match="duplicate generators section"):
        parse_presentation("generators: x;\ngenerators: y;\n", "f")


def test_whitespace_and_comments_are_insensitive():
    tight = parse_presentation("generators:x;\nrelation:1<=x;\n", "t")
    airy = parse_presentation(
        "# a comment\ngenerators:  x ;\n\nrelation:  1  <=  x ;  # trailing\n", "a"
    )
    assert tight.gens == airy.gens
    assert tight.relations == airy.relations


def test_expression_errors_carry_line_and_column():
    with pytest.raises(ParseError, match=r"<arg>:1:4"):
        parse_expr("x +", ("x",), "<arg>")
    with pytest.raises(ParseError, match=r"<arg>:1:1"):
        parse_expr("", ("x",), "<arg>")


_POSITION = re.compile(r".+:\d+:\d+")


@given(st.text(max_size=60))
def test_no_text_crashes_the_presentation_parser(text):
    try:
        parse_presentation(text, "fuzz")
    except ParseError as exc:
        assert _POSITION.match(str(exc)), f"no position in {exc!r}"


@given(st.text(alphabet="x2 +*^()<=;,#\n", max_size=30))
def test_no_text_crashes_the_expression_parser(text):
    try:
        parse_expr(text, ("x",), "fuzz")
    except ParseError as exc:
        assert _POSITION.match(str(exc)), f"no position in {exc!r}"
