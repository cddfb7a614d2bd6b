import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from holocont.exceptions import EvaluationError, ExpressionSyntaxError, ParameterError
from holocont.expr import as_function, logabs_of, parse_expr, render


def test_rational_pole():
    f = parse_expr("1/(z+1)")
    assert f.poles == [-1 + 0j]
    assert not f.cuts
    assert not f.entire
    assert f(1.0) == pytest.approx(0.5)


def test_entire_node():
    f = parse_expr("exp(-z)")
    assert f.entire
    assert f.cuts == [] and f.poles == []
    assert f(1 + 1j) == pytest.approx(cmath.exp(-1 - 1j))


def test_double_pole_for_dilog_phi():
    f = parse_expr("1/(z*z)")
    assert f.poles == [0j]
    assert f(2.0) == pytest.approx(0.25)


def test_cut_metadata():
    (cut,) = parse_expr("log(1-z)").cuts
    assert cut.origin == pytest.approx(1.0)
    assert cut.angle % (2 * math.pi) == pytest.approx(0.0, abs=1e-15)
    (cut,) = parse_expr("pow(z+2, 0.5, -1.0)").cuts
    assert cut.origin == pytest.approx(-2.0)
    assert cut.angle == pytest.approx(-1.0)
    (cut,) = parse_expr("li2(z)").cuts
    assert cut.origin == pytest.approx(1.0) and cut.angle == 0.0
    assert not parse_expr("exp(-sqrt(1-z))").entire


def test_branch_selection():
    # log with cut angle theta uses arguments in [theta, theta + 2pi)
    f = parse_expr("log(z, 0.0)")
    assert f(-1.0) == pytest.approx(1j * math.pi)
    assert f(-1j).imag == pytest.approx(1.5 * math.pi)
    g = parse_expr("pow(z, 0.5, 0.0)")
    assert g(-1j) == pytest.approx(cmath.exp(0.75j * math.pi))


def test_constants_are_folded():
    f = parse_expr("2*pi*i + z")
    assert f(0) == pytest.approx(2j * math.pi)
    assert render(f.node).count("pi") == 0


def test_rgamma_and_zeros():
    f = parse_expr("rgamma(z+1)")
    assert f(4.0) == pytest.approx(1 / 24)
    assert f(-1.0) == 0
    assert f.logabs(-2.0) == -math.inf


def test_scaled_evaluation_beyond_overflow():
    f = parse_expr("exp(z^2)")
    assert f.logabs(40.0) == pytest.approx(1600.0)
    with pytest.raises(EvaluationError):
        f.checked(40.0)
    assert logabs_of(lambda z: np.exp(z), np.array([2.0]))[0] == pytest.approx(2.0)


@pytest.mark.parametrize("text, pos", [("1 + ", 3), ("foo(z)", 0), ("exp(z", 5), ("z ^ 1.5", 4), ("z $ 2", 2),
                                       ("log(z, z)", 0), ("pow(z)", 0)])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expr(text)
    assert info.value.position == pos


def test_unknown_identifier_message():
    with pytest.raises(ExpressionSyntaxError, match="unknown identifier"):
        parse_expr("sin(z)")


def test_cut_angle_range():
    with pytest.raises(ExpressionSyntaxError):
        parse_expr("log(z, 4)")


def test_as_function():
    assert as_function("z")(3.0) == 3.0
    assert as_function(2.5)(7.0) == 2.5
    fn = lambda z: z
    assert as_function(fn) is fn
    with pytest.raises(ParameterError):
        as_function(object())
    with pytest.raises(ParameterError):
        parse_expr(3)


_atoms = st.sampled_from(["z", "2", "0.5i", "pi", "(1+2i)", "exp(z)", "exp(-z/2)", "recip(z+3)", "log(z+4, -1.0)",
                          "pow(z-5, 0.25)", "sqrt(z+9)", "rgamma(z)", "li2(z/7)"])


@st.composite
def _exprs(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(_atoms)
    op = draw(st.sampled_from(["+", "-", "*", "/", "^"]))
    left = draw(_exprs(depth=depth - 1))
    if op == "^":
        return f"({left})^{draw(st.integers(-3, 3))}"
    return f"({left}) {op} ({draw(_exprs(depth=depth - 1))})"


@given(_exprs())
def test_render_round_trip(text):
    f = parse_expr(text)
    assert parse_expr(render(f.node)) == f


@given(_exprs(), st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_scaled_matches_direct(text, z):
    f = parse_expr(text)
    with np.errstate(all="ignore"):
        direct = f(z)
        phase, scale = f.scaled(z)
    if np.isfinite(direct) and direct != 0 and abs(direct) > 1e-200 and abs(direct) < 1e200:
        assert phase * math.exp(scale) == pytest.approx(direct, rel=1e-9)
