"""Closed-form catalog of the surfaces under test.

The family Phi_t of Lagrangian spheres, the distinguished member Phi_0
(coded separately), the Lawlor cylinders and the minimal surfaces whose
inversion produces Phi_t, the Hamiltonian potential of the deformation,
the closed-form area A(t) and divergence of JH_t, plus two fixtures (a
product of latitude circles and a round sphere).

Sphere points are passed as ``(z, x)`` with ``z`` complex and
``|z|^2 + x^2 = 1``.
"""

from __future__ import annotations

from functools import partial

import numpy as np

from . import _kernels
from . import jets as J
from .ambient import Params
from .charts import CYLINDER, SPHERE, ChartMap
from .errors import DomainError
from .jets import Jet2

SPHERE_TOL = 1e-12

# Dilation applied to (F_t, G_t) in the minimal embeddings; without it the
# inversion a + w/|w|^2 does not reproduce Phi_t.
MINIMAL_HAT_SCALE = 0.25


def check_on_sphere(z, x, tol: float = SPHERE_TOL) -> None:
    res = np.abs(np.abs(z) ** 2 + np.asarray(x) ** 2 - 1.0)
    if not np.all(res <= tol):
        raise DomainError(f"point off the unit sphere (residual {np.max(res):.3e})")


def _stack(parts):
    return np.stack(np.broadcast_arrays(*parts), axis=-1)


def phi_family(params: Params, t: float, z, x) -> np.ndarray:
    """Phi_t(z, x) as points of R⁶."""
    z = np.asarray(z, dtype=complex)
    x = np.asarray(x, dtype=float)
    check_on_sphere(z, x)
    return _stack(_kernels.phi_components(params.c1, params.c2, t, z.real, z.imag, x))


def phi_zero(params: Params, z, x) -> np.ndarray:
    """Phi_0 written directly from its own closed form."""
    z = np.asarray(z, dtype=complex)
    x = np.asarray(x, dtype=float)
    check_on_sphere(z, x)
    c1, c2 = params.c1, params.c2
    rd = np.sqrt(c1 - c2)
    k = 2.0 * rd / (c1 - c2 * x * x)
    w1 = k * (1j * x * z)
    h1 = k * (-c1 + (2.0 * c1 - c2) * x * x) / (2.0 * np.sqrt(c1) * rd)
    w2 = k * np.conj(z)
    h2 = k * ((c1 - 2.0 * c2) + c2 * x * x) / (2.0 * np.sqrt(c2) * rd)
    return _stack([w1.real, w1.imag, h1, w2.real, w2.imag, h2])


def family_chart(params: Params, t: float, chart: str = "cylinder") -> ChartMap:
    """Phi_t composed with the cylinder chart ``(s1, s2)`` or sphere chart ``(x, theta)``."""
    code = {"cylinder": CYLINDER, "sphere": SPHERE}[chart]
    c1, c2 = params.c1, params.c2

    def func(u1: Jet2, u2: Jet2) -> Jet2:
        zr, zi, x = _kernels.chart_to_sphere_jets(code, u1, u2)
        return Jet2.stack(_kernels.phi_components(c1, c2, t, zr, zi, x))

    fast = partial(_kernels.phi_jets, c1, c2, t, code)
    return ChartMap(f"Phi_{t:g}/{chart}", chart, func, 6, fast)


def lawlor_chart(params: Params, t: float, s1, s2):
    """Parametrization ``(F_t, G_t)`` of the scaled Lawlor cylinder."""
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    rd = np.sqrt(params.D)
    st, ct = np.sinh(t), np.cosh(t)
    F = rd * (st * np.cosh(s1) + 1j * ct * np.sinh(s1)) * np.exp(1j * s2)
    G = rd * (ct * np.cosh(s1) + 1j * st * np.sinh(s1)) * np.exp(-1j * s2)
    return F, G


def _minimal_hat_components(params: Params, t, s1, s2):
    # Works on arrays or jets.
    rd = np.sqrt(params.D) * MINIMAL_HAT_SCALE
    st, ct = np.sinh(t), np.cosh(t)
    if isinstance(s1, Jet2):
        ch, sh, c, s = J.cosh(s1), J.sinh(s1), J.cos(s2), J.sin(s2)
    else:
        ch, sh, c, s = np.cosh(s1), np.sinh(s1), np.cos(s2), np.sin(s2)
    fa, fb = st * ch, ct * sh          # F = rd (fa + i fb) e^{i s2}
    ga, gb = ct * ch, st * sh          # G = rd (ga + i gb) e^{-i s2}
    zero = 0.0 * ch
    return (
        rd * (fa * c - fb * s),
        rd * (fa * s + fb * c),
        zero - np.sqrt(params.c1) / 4.0,
        rd * (ga * c + gb * s),
        rd * (gb * c - ga * s),
        zero - np.sqrt(params.c2) / 4.0,
    )


def minimal_hat(params: Params, t: float, s1, s2) -> np.ndarray:
    """The complete minimal embedding ``(F_t/4, -sqrt(c1)/4, G_t/4, -sqrt(c2)/4)``."""
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    return _stack(_minimal_hat_components(params, t, s1, s2))


def minimal_hat_chart(params: Params, t: float) -> ChartMap:
    def func(u1, u2):
        return Jet2.stack(_minimal_hat_components(params, t, u1, u2))

    return ChartMap(f"hatPhi_{t:g}", "cylinder", func)


def invert_at(center, w) -> np.ndarray:
    """Inversion ``w -> center + w / |w|^2``."""
    w = np.asarray(w, dtype=float)
    n2 = np.sum(w * w, axis=-1)
    if np.any(np.sqrt(n2) < 1e-14):
        raise DomainError("inversion through the origin")
    return np.asarray(center) + w / n2[..., None]


def inversion_chart(params: Params, t: float) -> ChartMap:
    """``a + hatPhi_t / |hatPhi_t|^2`` on the cylinder, carried through jets."""
    a = params.a

    def func(u1, u2):
        comps = _minimal_hat_components(params, t, u1, u2)
        n2 = sum(c * c for c in comps)
        return Jet2.stack([a[k] + comps[k] / n2 for k in range(6)])

    return ChartMap(f"inverted_hatPhi_{t:g}", "cylinder", func)


def hamiltonian_potential(params: Params, z, x):
    """Potential f of the Hamiltonian deformation d/dt Phi_t at t = 0.

    Depends on the height ``x`` only; ``x`` may be a :class:`Jet2`.
    """
    c1, c2 = params.c1, params.c2
    pref = 2.0 * (c1 - c2) / (c1 * c2)
    q = np.sqrt(c2 / c1)
    if isinstance(x, Jet2):
        return pref * ((c1 - c2) * x / (c1 - c2 * x * x)
                       - (c1 + c2) / np.sqrt(c1 * c2) * J.artanh(q * x))
    if z is not None:
        check_on_sphere(z, x)
    x = np.asarray(x, dtype=float)
    return pref * ((c1 - c2) * x / (c1 - c2 * x * x)
                   - (c1 + c2) / np.sqrt(c1 * c2) * np.arctanh(q * x))


def critical_t(params: Params) -> float:
    """``|t|`` at which the area formula switches branch."""
    return 0.5 * np.arccosh(params.S / params.D)


def closed_area_branches(params: Params, t: float) -> float:
    """The three-branch area formula evaluated literally.

    Loses accuracy within about 1e-3 of the branch point (cancellation of
    two nearly equal terms); :func:`closed_area` is the robust version.
    """
    s = params.S
    d = params.D * np.cosh(2.0 * t)
    if d < s:
        return 32.0 * np.pi / (s * s - d * d) * (
            s - 2.0 * d * d / np.sqrt(s * s - d * d) * np.arctanh(np.sqrt(s - d) / np.sqrt(s + d)))
    if d > s:
        return 32.0 * np.pi / (s * s - d * d) * (
            s - 2.0 * d * d / np.sqrt(d * d - s * s) * np.arctan(np.sqrt(d - s) / np.sqrt(d + s)))
    return 64.0 * np.pi / (3.0 * s)


def _area_series(s: float, u: float, terms: int = 24) -> float:
    # A = (8 pi / s) (1 + u) R(u),  u = (s - d)/(s + d),
    # R(u) = 8/3 - sum_{k>=2} (1/(2k+1) - 2/(2k-1) + 1/(2k-3)) u^(k-1)
    r = 8.0 / 3.0
    for k in range(2, terms):
        r -= (1.0 / (2 * k + 1) - 2.0 / (2 * k - 1) + 1.0 / (2 * k - 3)) * u ** (k - 1)
    return 8.0 * np.pi / s * (1.0 + u) * r


def closed_area(params: Params, t: float) -> float:
    """Area of the metric induced by Phi_t."""
    s = params.S
    d = params.D * np.cosh(2.0 * t)
    u = (s - d) / (s + d)
    if abs(u) < 1e-2:
        return _area_series(s, u)
    return closed_area_branches(params, t)


def closed_div_jh(params: Params, t: float, x):
    """div JH_t at height ``x`` of the sphere."""
    x = np.asarray(x, dtype=float)
    return (params.c2 - params.c1) * np.sinh(2.0 * t) * x / (2.0 * (1.0 + x * x))


def product_torus(params: Params, x1: float, x2: float) -> ChartMap:
    """Latitude circle at height x1 times latitude circle at height x2, chart (theta1, theta2)."""
    r1sq = 1.0 / params.c1 - x1 * x1
    r2sq = 1.0 / params.c2 - x2 * x2
    if r1sq <= 0.0 or r2sq <= 0.0:
        raise DomainError("latitude circle degenerates to a point")
    r1, r2 = np.sqrt(r1sq), np.sqrt(r2sq)

    def func(u1, u2):
        zero = 0.0 * u1
        return Jet2.stack([r1 * J.cos(u1), r1 * J.sin(u1), zero + x1,
                           r2 * J.cos(u2), r2 * J.sin(u2), zero + x2])

    return ChartMap(f"torus({x1:g},{x2:g})", "torus", func)


def round_sphere_chart(c: float) -> ChartMap:
    """The sphere of curvature ``c`` in R³, chart ``(x, theta)``, |x| < 1/sqrt(c)."""

    def func(u1, u2):
        r = J.sqrt(1.0 / c - u1 * u1)
        return Jet2.stack([r * J.cos(u2), r * J.sin(u2), u1])

    return ChartMap(f"S2({c:g})", "round", func, dim=3)
