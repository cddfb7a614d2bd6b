import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holocont.exceptions import EvaluationError, ParameterError
from holocont.expr import parse_expr
from holocont.growth import (
    GrowthEstimator,
    RadialSchedule,
    exp_type,
    indicator,
    indicator_trace,
    inner_exp_type,
    inner_exp_type_ladder,
    order_estimate,
    order_trace,
)

EXP = parse_expr("exp(z)")
H = (-math.pi / 2, math.pi / 2)
QUICK = RadialSchedule(1.0, 200.0, 24)


def test_schedule_validation():
    for args in [(5, 5, 10), (0, 5, 10), (1, 5, 1)]:
        with pytest.raises(ParameterError):
            RadialSchedule(*args)
    with pytest.raises(ParameterError):
        RadialSchedule(spacing="cubic")
    s = RadialSchedule(1, 100, 5, "linear")
    assert np.allclose(s.radii(), [1, 25.75, 50.5, 75.25, 100])
    assert np.allclose(s.tail(0.25), [75.25, 100])
    with pytest.raises(ParameterError):
        s.tail(1.0)


def test_exp_type_examples():
    assert exp_type(EXP, (-math.pi / 4, math.pi / 4)) == pytest.approx(1.0, abs=0.02)
    assert exp_type(parse_expr("1"), H) == 0
    assert exp_type(parse_expr("exp(-z)"), (-math.pi / 4, math.pi / 4)) == 0


def test_exp_type_against_closed_form():
    # log|e^{(2+i) z}|/|z| = 2 cos t - sin t, maximal at t = -atan(1/2) inside the sector
    f = parse_expr("exp((2+i)*z)")
    assert exp_type(f, (-1.0, 1.0), angular_mesh=256) == pytest.approx(math.sqrt(5), abs=1e-4)


def test_exp_type_errors():
    with pytest.raises(ParameterError):
        exp_type(EXP, (1.0, 0.5))
    with pytest.raises(ParameterError):
        exp_type(EXP, H, angular_mesh=0)
    with pytest.raises(EvaluationError):
        exp_type(lambda z: np.full(np.shape(z), np.nan), H)


def test_inner_exp_type_examples():
    assert inner_exp_type(parse_expr("1"), H) == 0
    assert inner_exp_type(EXP, H) == pytest.approx(1.0, abs=0.02)
    ladder = inner_exp_type_ladder(parse_expr("exp(i*z)"), H)
    assert [m for m, _ in ladder] == [0.3, 0.1, 0.03]
    for m, v in ladder:
        assert v == pytest.approx(math.cos(m), abs=1e-9)
    assert ladder[-1][1] == pytest.approx(0.99955, abs=1e-5)


def test_inner_exp_type_of_other_constants():
    # log|c|/R is positive at every finite radius; only the limit is 0
    r0 = RadialSchedule().tail(0.25)[0]
    assert inner_exp_type(parse_expr("3"), H) == pytest.approx(math.log(3) / r0, rel=1e-12)
    assert inner_exp_type(parse_expr("0.5"), H) == 0


def test_inner_exp_type_errors():
    with pytest.raises(ParameterError):
        inner_exp_type(EXP, H, (0.1, 0.3))
    with pytest.raises(ParameterError):
        inner_exp_type(EXP, H, (2.0, 0.1))
    with pytest.raises(ParameterError):
        inner_exp_type(EXP, H, ())
    with pytest.raises(ParameterError):
        inner_exp_type(EXP, H, (0.1, -0.1))


@pytest.mark.parametrize("theta", [-1.2, -0.6, 0.0, 0.6, 1.2, math.pi / 2])
def test_indicator_of_exp(theta):
    assert indicator(EXP, theta) == pytest.approx(math.cos(theta), abs=0.01)


def test_indicator_of_constant():
    # the running supremum sits at the smallest tail radius
    r0 = RadialSchedule().tail(0.25)[0]
    assert indicator(parse_expr("5"), 0.7) == pytest.approx(math.log(5) / r0, rel=1e-12)
    assert indicator(parse_expr("5"), 0.7) < 0.03


def test_indicator_trace():
    r, v = indicator_trace(EXP, 0.0, QUICK)
    assert r.shape == v.shape == (24,)
    assert np.allclose(v, 1.0)


def test_order_examples():
    assert order_estimate(EXP) == pytest.approx(1.0, abs=0.05)
    assert order_estimate(parse_expr("exp(z^2)")) == pytest.approx(2.0, abs=0.1)
    # loglog(R^3)/log R decays only like log(3 log R)/log R
    assert order_estimate(parse_expr("z^3+1"), RadialSchedule(1e8, 1e10, 16)) <= 0.2
    assert order_estimate(parse_expr("z^3+1"), RadialSchedule(1.0, 1e3, 64)) < 0.6


def test_order_requires_entire():
    with pytest.raises(ParameterError):
        order_estimate(parse_expr("log(1-z)"))
    with pytest.raises(ParameterError):
        order_trace(parse_expr("1/(z+1)"))
    assert order_estimate(parse_expr("0.5")) == -math.inf
    r, v = order_trace(EXP, QUICK)
    assert np.isneginf(v[0])  # R = 1


# ---------------------------------------------------------------- properties

_coef = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
_sector = st.tuples(st.floats(-math.pi, 0.5), st.floats(0.2, 2.5)).map(lambda p: (p[0], p[0] + p[1]))


@settings(max_examples=30)
@given(_coef, _coef, _sector)
def test_sub_additivity(a, b, sector):
    f = lambda z: np.exp(a * z)
    g = lambda z: np.exp(b * z)
    s = lambda z: f(z) + g(z)
    sched = RadialSchedule(1, 100, 24)
    lhs = exp_type(s, sector, sched)
    assert lhs <= max(exp_type(f, sector, sched), exp_type(g, sector, sched)) + 0.05


@settings(max_examples=30)
@given(_coef, _sector, st.floats(0.0, 1.0))
def test_indicator_below_exp_type(a, sector, frac):
    f = lambda z: np.exp(a * z) + 1
    theta = sector[0] + frac * (sector[1] - sector[0])
    sched = RadialSchedule(1, 100, 24)
    assert indicator(f, theta, sched) <= exp_type(f, sector, sched) + 0.05


@settings(max_examples=30)
@given(_coef, st.floats(-math.pi, 0.0), st.floats(0.7, 3.0))
def test_ladder_monotone(a, t1, width):
    f = lambda z: np.exp(a * z)
    ladder = inner_exp_type_ladder(f, (t1, t1 + width), (0.3, 0.1, 0.03, 0.01), QUICK)
    vals = [v for _, v in ladder]
    assert all(v2 >= v1 for v1, v2 in zip(vals, vals[1:]))


@settings(max_examples=20)
@given(_coef, st.floats(-1.0, 0.0), st.floats(0.1, 1.0), st.floats(0.1, 1.0))
def test_exp_type_monotone_in_sector(a, t1, w1, extra):
    f = lambda z: np.exp(a * z)
    inner = (t1, t1 + w1)
    angles_in = np.linspace(*inner, 17)
    angles_out = np.concatenate([angles_in, np.linspace(t1 + w1, t1 + w1 + extra, 9)])
    e_in = exp_type(f, None, QUICK, angles=angles_in)
    assert exp_type(f, None, QUICK, angles=angles_out) >= e_in


# ---------------------------------------------------------------- estimator


def test_growth_estimator_and_report():
    est = GrowthEstimator(r_max=100.0, count=32).fit(EXP)
    assert est.et_estimate_ == pytest.approx(1.0, abs=0.02)
    assert est.iet_estimate_ == pytest.approx(1.0, abs=0.02)
    assert est.order_estimate_ == pytest.approx(1.0, abs=0.05)
    angles = [t for t, _ in est.indicator_samples_]
    assert all(H[0] < t < H[1] for t in angles)
    d = json.loads(est.report_.to_json())
    assert d["schedule"]["count"] == 32 and d["tail_fraction"] == 0.25
    assert d["et_estimate"] >= 0


def test_growth_estimator_non_entire():
    est = GrowthEstimator(sector=(-1.0, 1.0), r_max=50.0, count=16).fit(parse_expr("1/(z+1)"))
    assert est.order_estimate_ is None
    assert est.et_estimate_ == 0
    with pytest.raises(ParameterError):
        GrowthEstimator(indicator_angles=[2.0]).fit(EXP)
