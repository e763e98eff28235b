import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from famverify.diagram import AngleLinear, EquationFamily, compose
from famverify.errors import ParseError, SemanticError
from famverify.fileformat import (
    format_angle, parse_equation_file, parse_expression, parse_phase, serialize,
)
from famverify.phasepoly import LaurentPoly

from conftest import load, zx
from strategies import random_family, small_diagram

a, b, pi = (LaurentPoly.var(v) for v in ("a", "b", "pi"))


def test_fixture_parses(spider_law):
    assert spider_law.language == "ZX"
    assert spider_law.lhs.variables() | spider_law.rhs.variables() == {"a1", "a2"}
    assert {lbl for lbl, _ in spider_law.lhs.bangboxes} == {"d1", "d2"}
    assert spider_law.mode == "copy"


@pytest.mark.parametrize("text, expected", [
    ("a + 2*b", a + 2 * b),
    ("3a^2 - a^-1", 3 * a ** 2 - a ** -1),
    ("(a + 1)*(a - 1)", a * a - 1),
    ("pi/2 + a/3", pi * Fraction(1, 2) + a * Fraction(1, 3)),
    ("2i*a", LaurentPoly.const(2j) * a),
    ("1/2", LaurentPoly.const(Fraction(1, 2))),
])
def test_parse_expression(text, expected):
    assert parse_expression(text) == expected


def test_decimal_literal_is_float():
    p = parse_expression("0.5*a")
    assert isinstance(p.terms[(("a", 1),)], complex)


@pytest.mark.parametrize("text, expected", [
    ("pi/2 + 2*a1 - a2", zx(Fraction(1, 2), a1=2, a2=-1)),
    ("pi", zx(1)),
    ("0", zx(0)),
    ("3*pi/4", zx(Fraction(3, 4))),
])
def test_parse_zx_phase(text, expected):
    assert parse_phase("ZX", text) == expected


def test_zx_constant_without_pi_is_radians():
    ph = parse_phase("ZX", "1")
    assert isinstance(ph.const, float)
    assert ph.const == pytest.approx(1 / math.pi)


def test_zh_pi_is_numeric():
    ph = parse_phase("ZH", "pi*a")
    assert ph.poly.terms[(("a", 1),)] == pytest.approx(math.pi)


@pytest.mark.parametrize("phase", [
    zx(Fraction(1, 2), a1=2, a2=-1), zx(Fraction(3, 4)), zx(0), zx(0.3, a=1), zx(a=-1),
])
def test_angle_format_round_trip(phase):
    assert parse_phase("ZX", format_angle(phase)) == phase


def test_errors_carry_position():
    with pytest.raises(ParseError) as info:
        parse_equation_file("language ZX\nlhs\n  node s Z a +* b\n")
    assert info.value.line == 3 and info.value.column is not None
    with pytest.raises(ParseError) as info:
        parse_equation_file("language QQ\n")
    assert info.value.line == 1
    with pytest.raises(ParseError) as info:
        parse_equation_file("language ZX\nlhs\n  node s Q\n")
    assert (info.value.line, info.value.column) == (3, 10)


@pytest.mark.parametrize("text", [
    "language ZX\nlhs\n  inputs i j\n  node s Z\n  edge i s\n  edge j s\n  edge s o\n"
    "  outputs o\nrhs\n  inputs i\n  outputs o\n  node s Z\n  edge i s\n  edge s o\n",
    "language ZX\nlhs\n  node s Z\n  edge s zz\nrhs\n",
])
def test_semantic_errors(text):
    with pytest.raises(SemanticError):
        parse_equation_file(text)


def test_overlap_reported_as_laminarity():
    text = ("language ZX\nboxes d e\nlhs\n  node s Z\n  node t Z\n  edge s t\n"
            "  node u Z\n  box d s t\n  box e t u\nrhs\n  node s Z\n")
    with pytest.raises(SemanticError, match="NotLaminar"):
        parse_equation_file(text)


@pytest.mark.parametrize("name", ["spider_law.feq", "join_dimension.feq", "not_separated.feq",
                                  "clifford_t.feq", "parameter_free.feq"])
def test_fixture_round_trip(name):
    eq = load(name)
    assert parse_equation_file(serialize(eq)) == eq


@settings(max_examples=40)
@given(random_family())
def test_round_trip_random(eq):
    assert parse_equation_file(serialize(eq)) == eq


@settings(max_examples=20)
@given(st.sampled_from(["ZX", "ZH", "ZW"]).flatmap(
    lambda lang: st.tuples(small_diagram(lang), small_diagram(lang))))
def test_round_trip_composites(pair):
    d1, d2 = pair
    eq = EquationFamily.build(compose(d1, d2), d2)
    assert parse_equation_file(serialize(eq)) == eq
