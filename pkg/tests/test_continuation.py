import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.base import clone

from holocont.continuation import (
    CompactParams,
    ContinuationConfig,
    SeriesContinuation,
    SeriesSpec,
    continue_at,
    default_m,
    direct_sum,
    head_sum,
    make_config,
    map_points,
    residue_partial_sum,
    select_theta,
    tail_integral,
)
from holocont.exceptions import (
    AccuracyError,
    BranchError,
    ConfigurationError,
    DomainError,
    ParameterError,
)
from holocont.expr import parse_expr


# ---------------------------------------------------------------- spec types


def test_spec_overlap_check():
    SeriesSpec([1, 1, 1], "1", 0)
    with pytest.raises(ParameterError, match="disagrees"):
        SeriesSpec([1, 2], "1", 0)
    with pytest.raises(ParameterError):
        SeriesSpec([1], "1", 2)
    with pytest.raises(ParameterError):
        SeriesSpec([1], "1", -1)


def test_spec_coefficients_and_json(logshift):
    assert np.allclose(logshift.coefficients(3), [1, 1 / 2, 1 / 3, 1 / 4])
    d = logshift.to_dict()
    assert d == {"head": [[1.0, 0.0]], "phi": "1/(z+1)", "n0": 0, "label": "logshift"}
    assert SeriesSpec.from_dict(d) == logshift
    with pytest.raises(ParameterError, match="missing"):
        SeriesSpec.from_dict({"head": [[1, 0]]})
    with pytest.raises(ParameterError):
        SeriesSpec([1], lambda z: z * 0 + 1, 0).to_dict()


def test_compact_params():
    p = CompactParams.from_points([-1, 3j])
    assert p.a == pytest.approx(math.pi / 2)
    assert p.b == pytest.approx(math.log(3))
    with pytest.raises(BranchError):
        CompactParams.from_points(0)


def test_config_validation():
    with pytest.raises(ParameterError):
        ContinuationConfig(m=3, theta=0.0)
    with pytest.raises(ParameterError):
        ContinuationConfig(m=3, theta=math.pi / 2)
    with pytest.raises(ParameterError):
        ContinuationConfig(m=-1, theta=0.5)
    with pytest.raises(ConfigurationError):
        ContinuationConfig(m=3, theta=0.2).check(5j)
    ContinuationConfig(m=3, theta=1.2).check(5j)


# ---------------------------------------------------------------- theta


def test_select_theta_examples():
    assert select_theta(CompactParams(math.pi, 0.0)) == pytest.approx(math.pi / 4)
    t = select_theta(CompactParams.from_points(3j))
    # solves b*cot(theta) = a/2
    assert math.log(3) / math.tan(t) == pytest.approx(math.pi / 4)
    assert t == pytest.approx(0.95014, abs=1e-5)
    assert select_theta(CompactParams.from_points(-100)) == pytest.approx(1.2421, abs=1e-4)
    with pytest.raises(BranchError):
        select_theta(CompactParams(0.0, 1.0))


@given(st.floats(0.01, math.pi), st.floats(-5, 8))
def test_select_theta_margin(a, b):
    t = select_theta(CompactParams(a, b))
    assert 0 < t < math.pi / 2
    assert b / math.tan(t) - a <= -a / 2 + 1e-12


def test_default_m(geometric, log_spec):
    assert default_m(geometric, -0.5) == 8
    assert default_m(geometric, -3) == 0
    assert default_m(log_spec, -3) == 1


# ---------------------------------------------------------------- tail integral


def test_geometric_tail_inside_disc(geometric):
    r = tail_integral(geometric, 0.5 + 0j, make_config(geometric, 0.5 + 1e-300j, m=3, theta=math.pi / 4))
    assert r.value == pytest.approx(0.125, abs=1e-8)


def test_geometric_tail_at_half_just_below_axis(geometric):
    # Arg z close to 2*pi: the tail of sum z**n is still 0.125
    z = cmath.rect(0.5, 2 * math.pi - 1e-9)
    r = tail_integral(geometric, z, make_config(geometric, z, m=3))
    assert abs(r.value - z**4 / (1 - z)) < 1e-8


def test_logshift_tail(logshift):
    cfg = ContinuationConfig(m=3, theta=math.pi / 4)
    z = 0.5 * cmath.exp(1e-12j)
    oracle = sum(0.5**n / (n + 1) for n in range(4, 200))
    assert oracle == pytest.approx(0.0217110, abs=1e-7)
    assert tail_integral(logshift, z, cfg).value == pytest.approx(oracle, abs=1e-8)


def test_geometric_tail_outside_disc(geometric):
    r = tail_integral(geometric, -2, ContinuationConfig(m=3, theta=math.pi / 4))
    assert r.value == pytest.approx(16 / 3, rel=1e-10)
    assert r.error < 1e-8
    assert r.method == "contour" and r.m == 3 and r.truncation > 3.5


def test_tail_errors(geometric, log_spec):
    with pytest.raises(ParameterError):
        tail_integral(log_spec, -2, ContinuationConfig(m=0, theta=math.pi / 4))
    with pytest.raises(ConfigurationError):
        tail_integral(geometric, 5j, ContinuationConfig(m=3, theta=0.2))
    with pytest.raises(BranchError):
        tail_integral(geometric, 2, ContinuationConfig(m=3, theta=0.5))


def test_tail_reports_missed_tolerance(geometric):
    with pytest.raises(AccuracyError) as info:
        tail_integral(geometric, -40 + 1j, ContinuationConfig(m=3, theta=1.4, limit=2, quad_tol=1e-15))
    assert info.value.value is not None


def test_fast_growing_interpolant_is_refused():
    from holocont.catalog import get_entry

    with pytest.raises(AccuracyError, match="grows too fast"):
        continue_at(get_entry("expneg").spec, 3 + 3j)


# ---------------------------------------------------------------- continue_at


def test_continue_examples(geometric, log_spec):
    assert continue_at(geometric, -2).value == pytest.approx(1 / 3, rel=1e-12)
    v = continue_at(log_spec, 2j).value
    assert v == pytest.approx(-cmath.log(1 - 2j), rel=1e-12)
    assert v == pytest.approx(-0.8047189562 + 1.1071487178j, abs=1e-9)
    for spec in (geometric, log_spec):
        r = continue_at(spec, 0)
        assert r.value == spec.coefficients(0)[0] and r.method == "constant"


def test_continue_on_positive_axis(geometric):
    r = continue_at(geometric, 0.75)
    assert r.method == "series"
    assert r.value == pytest.approx(4.0, rel=1e-14)
    for z in (1.0, 3.5):
        with pytest.raises(DomainError):
            continue_at(geometric, z)


def test_cross_check_inside_disc(dilog_spec, logshift):
    for spec in (dilog_spec, logshift):
        for z in (-0.6, 0.4 + 0.5j, -0.2 - 0.7j):
            assert abs(continue_at(spec, z).value - direct_sum(spec, z).value) < 1e-11


def test_dilog_far_out(dilog_spec):
    for z in (-10.0, -3 + 4j, 6j, 5 - 0.5j):
        ref = complex(mpmath.polylog(2, z))
        assert continue_at(dilog_spec, z).value == pytest.approx(ref, rel=1e-9)


def test_head_sum(geometric):
    assert head_sum(geometric, -2, 3) == -5
    assert head_sum(geometric, 0.5, 0) == 1


# ---------------------------------------------------------------- residue side


def test_residue_partial_sum_examples(geometric, dilog_spec):
    assert residue_partial_sum(geometric, 0.5, 3, 60) == pytest.approx(0.125, abs=1e-15)
    assert residue_partial_sum(dilog_spec, 0.9, 0, 10**6) == pytest.approx(1.29971473, abs=1e-8)
    assert residue_partial_sum(geometric, 0.5, 3, 3) == 0
    with pytest.raises(DomainError):
        residue_partial_sum(geometric, 1.5, 3, 10)
    with pytest.raises(ParameterError):
        residue_partial_sum(geometric, 0.5, 3, 2)


def test_direct_sum(logshift):
    assert direct_sum(logshift, 0.5).value == pytest.approx(2 * math.log(2), rel=1e-15)
    with pytest.raises(DomainError):
        direct_sum(logshift, 1.0)


# ---------------------------------------------------------------- invariants

_disc = st.builds(cmath.rect, st.floats(0.1, 0.9), st.floats(0.3, 2 * math.pi - 0.3))
_plane = st.builds(cmath.rect, st.floats(0.2, 6), st.floats(0.3, 2 * math.pi - 0.3))


@settings(max_examples=15)
@given(_disc, st.sampled_from([3, 5, 8]))
def test_residue_identity(geometric, log_spec, dilog_spec, logshift, z, m):
    for spec in (geometric, log_spec, dilog_spec, logshift):
        mm = max(m, spec.n0)
        ti = tail_integral(spec, z, make_config(spec, z, m=mm)).value
        assert abs(ti - residue_partial_sum(spec, z, mm, 4000)) < 1e-7


# with |z| = 6 and m = 12 the head is ~1e8 and the tail cancels it, which
# costs about 8 digits; the grid stops at |z| = 3
@settings(max_examples=15)
@given(st.builds(cmath.rect, st.floats(0.2, 3), st.floats(0.3, 2 * math.pi - 0.3)))
def test_m_independence(logshift, z):
    vals = [continue_at(logshift, z, make_config(logshift, z, m=m)).value for m in (5, 8, 12)]
    assert max(abs(v - vals[0]) for v in vals) < 1e-7 * max(1, abs(vals[0]))


@settings(max_examples=15)
@given(_plane, st.floats(0.0, 1.0))
def test_theta_independence(dilog_spec, z, frac):
    p = CompactParams.from_points(z)
    lo = math.atan2(p.b, p.a) if p.b > 0 else 0.05
    t1 = lo + 0.05 + frac * (1.5 - lo - 0.05)
    t0 = select_theta(p)
    a, b = (tail_integral(dilog_spec, z, make_config(dilog_spec, z, theta=t)).value for t in (t0, t1))
    assert abs(a - b) < 1e-7 * max(1, abs(a))


def test_holomorphy_probe(log_spec):
    for z0 in (-1 + 1j, -3 - 0.5j, 2j):
        ring = z0 + 0.05 * np.exp(2j * math.pi * np.arange(16) / 16)
        mean = np.mean([continue_at(log_spec, w).value for w in ring])
        assert abs(mean - continue_at(log_spec, z0).value) < 1e-6


# ---------------------------------------------------------------- estimator


def test_estimator_api(log_spec):
    est = SeriesContinuation(quad_tol=1e-11)
    assert est.get_params()["quad_tol"] == 1e-11
    assert clone(est).get_params() == est.get_params()
    est.set_params(m=4)
    zs = [-2, 1j, 0, 0.5]
    vals, errs = est.fit(log_spec).predict_with_error(zs)
    ref = [-cmath.log(1 - z) for z in zs]
    assert np.allclose(vals, ref, rtol=1e-10, atol=1e-14)
    assert errs.shape == (4,) and np.all(errs >= 0)
    assert np.allclose(est(zs), vals)
    assert est.evaluate([-2])[0].m == 4


def test_estimator_fit_inputs(geometric):
    est = SeriesContinuation()
    assert est.fit("geometric").spec_.label == "geometric"
    assert est.fit(geometric.to_dict()).spec_ == geometric
    with pytest.raises(ParameterError):
        est.fit(42)
    with pytest.raises(ParameterError):
        SeriesContinuation(m=0).fit("log")


def test_estimator_requires_fit():
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        SeriesContinuation().predict([-1])


def test_estimator_point_formats(geometric):
    est = SeriesContinuation().fit(geometric)
    a = est.predict(np.array([[-2.0, 0.0], [0.0, 3.0]]))
    assert np.allclose(a, [1 / 3, 1 / (1 - 3j)], rtol=1e-10)
    with pytest.raises(DomainError):
        est.predict([np.nan])


def test_threaded_order(monkeypatch, geometric):
    zs = [-1 - 1j * k for k in range(6)]
    monkeypatch.setenv("CONTINUE_THREADS", "3")
    threaded = map_points(lambda z: continue_at(geometric, z).value, zs)
    serial = map_points(lambda z: continue_at(geometric, z).value, zs, n_jobs=1)
    assert threaded == serial
