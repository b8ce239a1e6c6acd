import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_sphere_points, random_tangent
from lagspheres import DomainError, Params
from lagspheres import ambient as A
from lagspheres.immersions import phi_family


def _points(params, rng, n=200):
    z, x = random_sphere_points(rng, n)
    return phi_family(params, 0.4, z, x)


def test_params_validation():
    for c1, c2 in ((1.0, 4.0), (1.0, 1.0), (1.0, 0.0), (1.0, -1.0), (np.inf, 1.0), (np.nan, 1.0)):
        with pytest.raises(DomainError):
            Params(c1, c2)
    p = Params(4, 1)
    assert p.D == 3.0 and p.S == 5.0
    assert np.isclose(np.sum(p.a[:3] ** 2), 1 / 4) and np.isclose(np.sum(p.a[3:] ** 2), 1.0)
    np.testing.assert_array_equal(p.a_hat, [0, 0, -0.5, 0, 0, 1])


def test_projection(params, rng):
    pts = _points(params, rng)
    normal = np.concatenate([pts[:, :3], np.zeros((len(pts), 3))], axis=1)
    assert np.max(np.abs(A.project_to_tangent(pts, normal))) < 1e-15
    w = rng.normal(size=pts.shape)
    pw = A.project_to_tangent(pts, w)
    assert np.max(np.abs(np.sum(pw[:, :3] * pts[:, :3], -1))) < 1e-12
    assert np.max(np.abs(np.sum(pw[:, 3:] * pts[:, 3:], -1))) < 1e-12
    np.testing.assert_allclose(A.project_to_tangent(pts, pw), pw, atol=1e-14)


def test_projection_rank_four(params):
    pt = phi_family(params, 0.0, np.array([0.6 + 0.0j]), np.array([0.8]))[0]
    m = np.stack([A.project_to_tangent(pt, e) for e in np.eye(6)])
    assert np.linalg.matrix_rank(m, tol=1e-10) == 4


def test_apply_J_example():
    p = Params(4.0, 1.0)
    pt = np.array([0, 0, 0.5, 0, 0, 1.0])
    v = np.array([1.0, 0, 0, 0, 0, 0])
    np.testing.assert_allclose(A.apply_J(p, pt, v, orientation=1)[:3], [0, 1, 0])
    # the frozen orientation is the opposite one
    np.testing.assert_allclose(A.apply_J(p, pt, v)[:3], [0, A.J_ORIENTATION, 0])


def test_structures(params, rng):
    pts = _points(params, rng)
    v = random_tangent(params, rng, pts)
    w = random_tangent(params, rng, pts)
    Jv = A.apply_J(params, pts, v)
    scale = np.max(np.abs(v))
    assert np.max(np.abs(A.apply_J(params, pts, Jv) + v)) < 1e-12 * scale
    np.testing.assert_allclose(np.linalg.norm(Jv, axis=1), np.linalg.norm(v, axis=1), rtol=1e-12)
    np.testing.assert_allclose(A.apply_P(A.apply_P(v)), v)
    np.testing.assert_allclose(A.inner(A.apply_P(v), A.apply_P(w)), A.inner(v, w), rtol=1e-12)
    np.testing.assert_allclose(A.apply_P(Jv), A.apply_J(params, pts, A.apply_P(v)), atol=1e-14)
    np.testing.assert_allclose(A.apply_P(np.array([1.0, 0, 0, 0, 1, 0])), [-1, 0, 0, 0, 1, 0])


def test_kahler_form(params, rng):
    pts = _points(params, rng)
    u = random_tangent(params, rng, pts)
    v = random_tangent(params, rng, pts)
    assert np.max(np.abs(A.kahler_form(params, pts, v, v))) < 1e-14
    np.testing.assert_allclose(A.kahler_form(params, pts, v, A.apply_J(params, pts, v)),
                               np.sum(v * v, -1), rtol=1e-12)
    assert np.max(np.abs(A.kahler_form(params, pts, u, v) + A.kahler_form(params, pts, v, u))) < 1e-13


def test_apply_J_rejects_normal_vectors(params):
    pt = np.array([0, 0, 0.5, 0, 0, 1.0])
    with pytest.raises(DomainError):
        A.apply_J(params, pt, pt)


def test_complexification_is_bilinear(params, rng):
    pts = _points(params, rng, 5)
    v = random_tangent(params, rng, pts)
    np.testing.assert_allclose(A.inner(1j * v, v), 1j * A.inner(v, v))


def test_on_manifold_check(params):
    with pytest.raises(DomainError):
        A.check_on_manifold(params, np.array([0, 0, 0.6, 0, 0, 1.0]))


@settings(max_examples=40, deadline=None)
@given(st.floats(1.01, 10), st.floats(0.1, 1.0), st.floats(-1, 1), st.floats(0, 6.28))
def test_J_squared_property(c1, c2, x, th):
    p = Params(c1, c2)
    z = np.sqrt(1 - x * x) * np.exp(1j * th)
    pt = phi_family(p, 0.2, np.array([z]), np.array([x]))
    v = A.project_to_tangent(pt, np.array([[0.3, -1.0, 0.2, 0.7, 0.1, -0.4]]))
    assert np.max(np.abs(A.apply_J(p, pt, A.apply_J(p, pt, v)) + v)) < 1e-12
