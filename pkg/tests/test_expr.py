import math
import random
from fractions import Fraction

import pytest

from collarindex import EvalDomainError, DimensionMismatchError, ParseError, parse


def test_subtraction():
    m = parse("x1 - x2")
    assert m.arity == 2
    assert m((3, 1)) == (2,)


def test_two_component_map():
    m = parse("2*x1; 2*x2")
    assert m.arity == 2
    assert m.codomain_dim == 2
    assert m((1, 0)) == (2, 0)


def test_division_by_zero_is_an_error():
    m = parse("x1 / (x1 - x1)")
    with pytest.raises(EvalDomainError):
        m((1,))
    with pytest.raises(EvalDomainError):
        m((0.5,))


def test_identity_preserves_floats():
    m = parse("x1; x2")
    assert m((0.5, -0.25)) == (0.5, -0.25)


def test_complex_squaring():
    m = parse("x1*x1 - x2*x2; 2*x1*x2")
    assert m((0, 1)) == (-1, 0)


def test_linear_scaling_norm():
    m = parse("2*x1; 2*x2")
    for k in range(17):
        theta = 2 * math.pi * k / 17
        v = m((math.cos(theta), math.sin(theta)))
        assert math.hypot(*v) == pytest.approx(2.0, abs=1e-12)


def test_arity_annotation():
    m = parse("arity 2: 1; 0")
    assert m.arity == 2
    assert m((5, 7)) == (1, 0)


def test_arity_mismatch_rejected():
    with pytest.raises(ParseError):
        parse("arity 1: x2")


def test_dimension_mismatch():
    m = parse("x1 + x2")
    with pytest.raises(DimensionMismatchError):
        m((1,))


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as info:
        parse("x1 + )")
    assert info.value.line == 1
    assert info.value.column == 6


def test_unknown_function_rejected():
    with pytest.raises(ParseError):
        parse("tan(x1)")


def test_power_and_unary_minus():
    m = parse("-x1^2")
    assert m((3,)) == (-9,)
    m = parse("(-x1)^2")
    assert m((3,)) == (9,)
    m = parse("x1^-1")
    assert m((Fraction(1, 4),)) == (4,)
    with pytest.raises(EvalDomainError):
        m((0,))


def test_exact_rational_evaluation():
    m = parse("x1/3 + 1/7")
    res = m.evaluate((Fraction(1, 2),))
    assert res.exact
    assert res.values == (Fraction(1, 6) + Fraction(1, 7),)


def test_transcendental_marks_inexact():
    m = parse("sin(x1)")
    assert not m.is_rational
    res = m.evaluate((0.0,))
    assert not res.exact


def test_sqrt_negative_is_error():
    m = parse("sqrt(x1)")
    with pytest.raises(EvalDomainError):
        m((-1.0,))


def test_atan2_is_binary():
    m = parse("atan2(x2, x1)")
    assert m((1.0, 1.0)) == (math.atan2(1.0, 1.0),)
    with pytest.raises(ParseError):
        parse("atan2(x1)")


def _random_source(rng: random.Random, depth: int = 3) -> str:
    if depth == 0 or rng.random() < 0.3:
        return rng.choice(
            ["x1", "x2", str(rng.randint(0, 9)), f"{rng.randint(1, 9)}.{rng.randint(0, 99):02d}"]
        )
    op = rng.choice(["+", "-", "*", "+", "-", "*", "/"])
    left = _random_source(rng, depth - 1)
    right = _random_source(rng, depth - 1)
    if op == "/":
        right = str(rng.randint(1, 9))  # keep denominators nonzero
    text = f"({left}) {op} ({right})"
    if rng.random() < 0.2:
        text = f"-({text})"
    if rng.random() < 0.15:
        text = f"({text})^{rng.randint(0, 3)}"
    return text


def test_print_parse_round_trip_on_random_trees():
    rng = random.Random(20240811)
    for _ in range(40):
        source = f"{_random_source(rng)}; {_random_source(rng)}"
        m = parse(source, arity=2)
        m2 = parse(m.to_source(), arity=2)
        for _ in range(100):
            p = (Fraction(rng.randint(-40, 40), 4), Fraction(rng.randint(-40, 40), 4))
            assert m(p) == m2(p)


def test_rational_tree_matches_float_evaluation():
    rng = random.Random(7)
    for _ in range(30):
        source = _random_source(rng)
        m = parse(source, arity=2)
        assert m.is_rational
        for _ in range(10):
            exact_pt = (Fraction(rng.randint(-100, 100), 10), Fraction(rng.randint(-100, 100), 10))
            float_pt = tuple(float(c) for c in exact_pt)
            exact_val = m(exact_pt)
            float_val = m(float_pt)
            for a, b in zip(exact_val, float_val):
                scale = max(1.0, abs(float(a)))
                assert abs(float(a) - b) <= 1e-12 * scale


def test_deterministic_bits():
    m = parse("sin(x1) * cos(x2) + x1/7")
    p = (0.1234567, -2.5)
    assert m(p) == m(p)
