import numpy as np
import pytest

from lagspheres import PoleBandError
from lagspheres import identities as I
from lagspheres.ambient import J_ORIENTATION

ALL_T = ("lagrangian", "norm_sum", "frenet3", "moduli", "gauss_eq", "d_maslov", "g_zbar",
         "div_match")


def _by_id(results):
    return {r.id: r for r in results}


def test_registry_shape():
    ids = [s.id for s in I.REGISTRY]
    assert len(ids) == len(set(ids))
    assert all(s.formula for s in I.REGISTRY)
    report_only = {s.id for s in I.REGISTRY if s.report_only}
    assert report_only == {"perp_h_closed", "poly_abc"}
    assert {s.id for s in I.REGISTRY if s.scope == "all"} == set(ALL_T)


def test_sample_points_deterministic():
    a = I.sample_points(10, 3)
    b = I.sample_points(10, 3)
    np.testing.assert_array_equal(a[0], b[0])
    s1, _ = I.sample_points(500, 1, band=0.95)
    assert np.max(np.abs(np.tanh(s1))) <= 0.95


@pytest.mark.parametrize("t", [0.3, 1.0])
def test_all_t_entries_hold_off_stationary(params, t):
    s1, s2 = I.sample_points(300, 7)
    b1, b2 = I.sample_points(300, 8, band=0.95)
    res = _by_id(I.exact_suite(params, t, s1, s2) + I.derivative_suite(params, t, b1, b2))
    for name in ALL_T:
        assert res[name].gated and res[name].passed, (name, res[name].max_residual)
    assert res["gauss_eq"].max_residual <= 1e-5
    assert res["ham_stat"].expectation == "fails" and res["ham_stat"].passed
    assert not res["ham_stat"].gated
    assert res["theta"].expectation == "not applicable" and res["theta"].passed is None


def test_equator_values(params):
    z = np.zeros(1)
    fd = I.frozen_fd_values(params, 0.0, z, z)
    assert abs(fd["dwbar_h"].real[0]) <= 5e-5 and abs(fd["dwbar_h"].imag[0]) <= 5e-5
    assert abs(fd["lap_log_h"][0] + 8 / 3) <= 1e-4
    rhs = fd["K"][0] - 0.75 - 5 / 4
    assert abs(rhs + 8 / 3) <= 1e-4
    res = _by_id(I.exact_suite(params, 0.0, z, z))
    assert res["s0_membership"].details["linear_form"][0] == -1.5
    assert res["s0_membership"].max_residual <= 1e-12


def test_div_match_at_half(params):
    s1 = np.arctanh(np.array([0.5]))
    res = _by_id(I.derivative_suite(params, 1.0, s1, np.array([0.3])))
    assert res["div_match"].max_residual <= 5e-6


def test_discrimination(params):
    b1, b2 = I.sample_points(200, 2, band=0.95)
    for t in (0.3, 1.0):
        res = _by_id(I.derivative_suite(params, t, b1, b2))
        sup = res["div_match"].details["sup_abs_div"]
        assert sup >= 0.1 * params.D * np.sinh(2 * t) / 4


def test_frame_rotation_invariance(params):
    s1, s2 = I.sample_points(50, 4, band=0.95)
    a = _by_id(I.exact_suite(params, 0.0, s1, s2) + I.derivative_suite(params, 0.0, s1, s2))
    b = _by_id(I.exact_suite(params, 0.0, s1, s2 + 0.77) + I.derivative_suite(params, 0.0, s1, s2 + 0.77))
    for name in ("theta", "xi"):
        assert np.max(np.abs(a[name].residual - b[name].residual)) <= 1e-10


def test_variation_field(params):
    eq = I.variation_field_residual(params, np.zeros(5), np.linspace(0, 6, 5))
    assert np.max(eq) <= 1e-5
    s1, s2 = np.full(3, 0.4), np.array([0.5, 1.5, 2.5])
    np.testing.assert_allclose(I.variation_field_residual(params, s1, s2),
                               I.variation_field_residual(params, s1, -s2), atol=1e-8)
    pts = np.arctanh(np.array([0.0, 0.3, -0.6, 0.9])), np.array([0.0, 1.0, 2.0, 4.0])
    r1 = np.max(I.variation_field_residual(params, *pts, h_t=1e-3))
    r2 = np.max(I.variation_field_residual(params, *pts, h_t=5e-4))
    assert np.log2(r1 / r2) >= 1.9
    with pytest.raises(PoleBandError):
        I.variation_field_residual(params, np.array([3.0]), np.array([0.0]))


def test_orientation_calibration(params):
    cal = I.calibrate_orientation(params)
    assert cal["orientation"] == J_ORIENTATION == -1
    assert cal["residuals"][-1] < 1e-7 < 1.0 < cal["residuals"][1]


def test_derivative_suite_pole_band(params):
    with pytest.raises(PoleBandError):
        I.derivative_suite(params, 0.0, np.array([2.5]), np.array([0.0]))


def test_h_zero_band_skips(params):
    # C = +-1/2 only at the poles, so the band is empty inside |x| <= 0.95
    b1, b2 = I.sample_points(100, 5, band=0.95)
    res = _by_id(I.derivative_suite(params, 0.0, b1, b2))
    assert res["lalog2"].skipped == 0


def test_strict_profile_tightens(params):
    s1, s2 = I.sample_points(20, 9)
    d = _by_id(I.exact_suite(params, 0.0, s1, s2))
    s = _by_id(I.exact_suite(params, 0.0, s1, s2, profile="strict"))
    assert s["hoc"].tol == pytest.approx(0.1 * d["hoc"].tol)
