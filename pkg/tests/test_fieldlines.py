import numpy as np
import pytest

from emknot import fieldlines
from emknot.errors import CurvesTooClose, NoClosure, OpenCurve, StagnationPoint
from emknot.fieldlines import Curve, TraceConfig, gauss_linking, trace_line

from conftest import HOPFION


def circle(center=(0, 0, 0), normal_axes=(0, 1), radius=1.0, n=2000):
    t = np.linspace(0.0, 2 * np.pi, n + 1)
    pts = np.zeros((n + 1, 3))
    pts[:, normal_axes[0]] = radius * np.cos(t)
    pts[:, normal_axes[1]] = radius * np.sin(t)
    pts += np.asarray(center, float)
    pts[-1] = pts[0]
    return Curve(pts, True, 2 * np.pi * radius)


def swirl(p):
    r = np.hypot(p[0], p[1])
    return np.array([-p[1], p[0], 0.0]) / r


# ------------------------------------------------------------------ tracing


def test_uniform_field_gives_open_segment():
    cfg = TraceConfig(step=0.1, max_steps=50)
    c = trace_line(lambda p: np.array([0.0, 0.0, 1.0]), [0, 0, 0], cfg)
    assert not c.closed
    np.testing.assert_allclose(c.points[:, :2], 0.0)
    np.testing.assert_allclose(c.points[-1], [0, 0, 5.0])
    assert c.arc_length == pytest.approx(5.0)
    with pytest.raises(NoClosure) as exc:
        trace_line(lambda p: np.array([0.0, 0.0, 1.0]), [0, 0, 0], cfg, strict=True)
    assert exc.value.curve is not None


def test_circle_closes_with_correct_length():
    c = trace_line(swirl, [1.0, 0.0, 0.0])
    assert c.closed
    assert c.arc_length == pytest.approx(2 * np.pi, abs=1e-4)
    np.testing.assert_allclose(np.hypot(c.points[:, 0], c.points[:, 1]), 1.0, atol=1e-8)
    np.testing.assert_array_equal(c.points[-1], c.points[0])


def test_refine_reports_step_sensitivity():
    c = trace_line(swirl, [1.0, 0.0, 0.0], TraceConfig(refine=True))
    assert c.closed
    assert "half-step" in c.diagnostic


def test_stagnation_point():
    with pytest.raises(StagnationPoint):
        trace_line(lambda p: np.zeros(3), [0.3, 0, 0])


def test_trace_config_validation():
    with pytest.raises(ValueError):
        TraceConfig(step=0.0)


def test_hopfion_line_closes():
    c = trace_line(fieldlines.knot_sampler(HOPFION), [0.6, 0.2, 0.1])
    assert c.closed
    assert c.arc_length > 1.0


def test_hopfion_line_step_halving_is_stable():
    sampler = fieldlines.knot_sampler(HOPFION)
    a = trace_line(sampler, [0.7, 0.0, 0.0], TraceConfig(step=0.01))
    b = trace_line(sampler, [0.7, 0.0, 0.0], TraceConfig(step=0.005))
    assert a.closed and b.closed
    assert abs(a.arc_length - b.arc_length) < 1e-3


# ------------------------------------------------------------------ linking


def test_hopf_link():
    c1 = circle()
    c2 = circle(center=(1, 0, 0), normal_axes=(0, 2))
    est = gauss_linking(c1, c2)
    assert abs(abs(est.value) - 1) < 1e-3
    assert est.conclusive


def test_linking_sign_flips_with_orientation():
    c1 = circle()
    c2 = circle(center=(1, 0, 0), normal_axes=(0, 2))
    a = gauss_linking(c1, c2).value
    assert gauss_linking(c1.reversed(), c2).value == pytest.approx(-a, abs=1e-10)
    assert gauss_linking(c2, c1).value == pytest.approx(a, abs=1e-10)


def test_unlinked_circles():
    assert abs(gauss_linking(circle(), circle(center=(5, 0, 0))).value) < 1e-6


def test_open_curve_rejected():
    c = circle()
    with pytest.raises(OpenCurve):
        gauss_linking(c, Curve(c.points[:-10], False, 1.0))


def test_curves_too_close():
    with pytest.raises(CurvesTooClose):
        gauss_linking(circle(), circle(), min_distance=1e-3)


def test_resampling_bounds_segments():
    c = circle(n=5000)
    r = c.resampled(1000)
    assert len(r.points) - 1 <= 1000
    np.testing.assert_array_equal(r.points[-1], c.points[-1])


# ------------------------------------------------------------------ knot matrices


def test_default_seeds_distinct_radii():
    seeds = fieldlines.default_seeds(4)
    radii = [np.hypot(s[0], s[1]) for s in seeds]
    assert len(set(np.round(radii, 6))) == 4
    assert all(s[2] == 0 for s in seeds)


def test_hopfion_matrix_three_seeds():
    M = fieldlines.linking_matrix(HOPFION, "B", 0.0, fieldlines.default_seeds(3))
    assert M.ok
    np.testing.assert_allclose(M.off_diagonal(), 1.0, atol=0.01)
    d = M.to_dict()
    assert d["integer"][0][1] == 1 and d["raw"][0][0] is None


def test_matrix_reports_open_curves():
    cfg = TraceConfig(max_steps=20)
    M = fieldlines.linking_matrix(HOPFION, "B", 0.0, fieldlines.default_seeds(2), cfg)
    assert not M.ok
    assert "OpenCurve" in M.errors[(0, 1)]
    assert np.isnan(M.values[0, 1])


def test_matrix_needs_two_seeds():
    with pytest.raises(ValueError):
        fieldlines.linking_matrix(HOPFION, "B", 0.0, [[0.5, 0, 0]])
