"""Pointwise geometry of chart maps into S²(c1) x S²(c2).

First and second order quantities (metric, second fundamental form, mean
curvature, associated Jacobian, complex frame) come from exact 2-jets of
the chart map.  Anything that needs a further derivative (Gauss curvature,
divergence of JH, Laplacians of derived scalars, the normal connection)
is obtained by central differences on a 3x3 stencil whose nodes are again
evaluated through jets; :func:`richardson` extrapolates those and
measures their convergence order.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import ambient
from .ambient import Params
from .charts import ChartMap
from .errors import DegenerateMetricError, PoleBandError
from .jets import Jet2

CONFORMAL_TOL = 1e-10
DEFAULT_STEP = 1e-3
DEFAULT_POLE_BAND = 0.95
# Successive Richardson changes below this (relative) size count as converged.
ROUNDOFF_FLOOR = 1e-10


def jet_eval(cmap: ChartMap, u1, u2) -> Jet2:
    """Exact 2-jet of ``cmap`` at chart points ``(u1, u2)``."""
    return cmap.jet(u1, u2)


def _dot(a, b):
    return np.sum(a * b, axis=-1)


@dataclass
class LocalGeometry:
    """Everything pointwise about the immersion at a batch of chart points.

    Arrays share the batch shape of the chart coordinates; vectors carry a
    trailing axis of length 6 (or ``dim`` for metric-only fixtures, where
    the fields tied to S² x S² are ``None``).
    """

    u1: np.ndarray
    u2: np.ndarray
    point: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d11: np.ndarray
    d12: np.ndarray
    d22: np.ndarray
    E: np.ndarray
    F: np.ndarray
    G: np.ndarray
    det: np.ndarray
    ginv: np.ndarray          # (g^11, g^12, g^22) on the leading axis
    christoffel: np.ndarray   # Gamma^k_ij indexed [k, i, j]
    metric_d1: np.ndarray     # exact (E, F, G) derivatives along u1
    metric_d2: np.ndarray     # exact (E, F, G) derivatives along u2
    H_tilde: np.ndarray       # mean curvature vector in R^dim
    H: Optional[np.ndarray] = None
    JH: Optional[np.ndarray] = None
    C: Optional[np.ndarray] = None
    C_conformal: Optional[np.ndarray] = None
    sigma2: Optional[np.ndarray] = None
    H2: Optional[np.ndarray] = None
    K_gauss: Optional[np.ndarray] = None
    norm_phi: Optional[np.ndarray] = None
    norm_psi: Optional[np.ndarray] = None
    lagrangian: Optional[np.ndarray] = None
    delta: Optional[np.ndarray] = None
    delta_delta: Optional[np.ndarray] = None
    hopf_g: Optional[np.ndarray] = None   # <dPhi, P dPhi>
    hopf_h: Optional[np.ndarray] = None   # <H, J dPhi>
    hopf_f: Optional[np.ndarray] = None   # <dd Phi, J dPhi>
    K: Optional[np.ndarray] = None

    @property
    def sqrt_det(self) -> np.ndarray:
        return np.sqrt(self.det)

    @property
    def e2u(self) -> np.ndarray:
        """Conformal factor; equals E = G in a conformal chart."""
        return np.sqrt(self.det)

    @property
    def conformal_defect(self) -> np.ndarray:
        return np.maximum(np.abs(self.E - self.G), np.abs(self.F)) / np.maximum(self.E, self.G)

    def is_conformal(self, tol: float = CONFORMAL_TOL) -> bool:
        return bool(np.all(self.conformal_defect <= tol))

    def chart_components(self, vec) -> tuple:
        """Contravariant chart components of ambient vectors tangent to the surface."""
        a1, a2 = _dot(vec, self.d1), _dot(vec, self.d2)
        i11, i12, i22 = self.ginv
        return i11 * a1 + i12 * a2, i12 * a1 + i22 * a2

    def surface_normal_part(self, vec):
        """Remove the components tangent to the surface."""
        x1, x2 = self.chart_components(vec)
        return vec - x1[..., None] * self.d1 - x2[..., None] * self.d2

    def take(self, index) -> "LocalGeometry":
        """Select along the leading batch axis (used for stencils)."""
        out = {}
        for f in dataclasses.fields(self):
            val = getattr(self, f.name)
            if val is None:
                out[f.name] = None
            elif f.name in ("ginv", "metric_d1", "metric_d2"):
                out[f.name] = val[:, index]
            elif f.name == "christoffel":
                out[f.name] = val[:, :, :, index]
            else:
                out[f.name] = val[index]
        return LocalGeometry(**out)


def local_geometry(params: Optional[Params], cmap: ChartMap, u1, u2) -> LocalGeometry:
    """Evaluate the full pointwise geometric package at chart points.

    With ``params=None`` only the chart-intrinsic data (metric, Christoffel
    symbols, Euclidean mean curvature) is filled, which is what the round
    sphere and other non-product fixtures need.
    """
    u1, u2 = np.broadcast_arrays(np.asarray(u1, dtype=float), np.asarray(u2, dtype=float))
    return geometry_from_jet(params, cmap.jet(u1, u2), u1, u2)


def geometry_from_jet(params: Optional[Params], jet: Jet2, u1, u2) -> LocalGeometry:
    X, X1, X2 = jet.v, jet.d1, jet.d2
    X11, X12, X22 = jet.d11, jet.d12, jet.d22

    E, F, G = _dot(X1, X1), _dot(X1, X2), _dot(X2, X2)
    det = E * G - F * F
    if not np.all(np.isfinite(det)) or np.any(det <= 0.0):
        raise DegenerateMetricError("induced metric is singular at some evaluation point")
    i11, i12, i22 = G / det, -F / det, E / det

    # exact first derivatives of the metric coefficients
    E_1, E_2 = 2.0 * _dot(X1, X11), 2.0 * _dot(X1, X12)
    F_1 = _dot(X11, X2) + _dot(X1, X12)
    F_2 = _dot(X12, X2) + _dot(X1, X22)
    G_1, G_2 = 2.0 * _dot(X2, X12), 2.0 * _dot(X2, X22)

    # Gamma_{ij,l} = <X_ij, X_l>; Gamma^k_ij = g^{kl} Gamma_{ij,l}
    low = {(1, 1): (_dot(X11, X1), _dot(X11, X2)),
           (1, 2): (_dot(X12, X1), _dot(X12, X2)),
           (2, 2): (_dot(X22, X1), _dot(X22, X2))}
    low[(2, 1)] = low[(1, 2)]
    gam = np.empty((2, 2, 2) + det.shape)
    for i in (1, 2):
        for j in (1, 2):
            l1, l2 = low[(i, j)]
            gam[0, i - 1, j - 1] = i11 * l1 + i12 * l2
            gam[1, i - 1, j - 1] = i12 * l1 + i22 * l2

    def tangential(vec):
        a1, a2 = _dot(vec, X1), _dot(vec, X2)
        return ((i11 * a1 + i12 * a2)[..., None] * X1
                + (i12 * a1 + i22 * a2)[..., None] * X2)

    trace = i11[..., None] * X11 + 2.0 * i12[..., None] * X12 + i22[..., None] * X22
    H_tilde = 0.5 * (trace - tangential(trace))

    geom = LocalGeometry(
        u1=np.asarray(u1), u2=np.asarray(u2), point=X, d1=X1, d2=X2, d11=X11, d12=X12, d22=X22,
        E=E, F=F, G=G, det=det, ginv=np.stack([i11, i12, i22]), christoffel=gam,
        metric_d1=np.stack([E_1, F_1, G_1]), metric_d2=np.stack([E_2, F_2, G_2]),
        H_tilde=H_tilde,
    )
    if params is None:
        return geom

    def sigma(vec):
        w = ambient.project_to_tangent(X, vec)
        return w - tangential(w)

    s11, s12, s22 = sigma(X11), sigma(X12), sigma(X22)
    H = 0.5 * (i11[..., None] * s11 + 2.0 * i12[..., None] * s12 + i22[..., None] * s22)
    # |sigma|^2 = g^ik g^jl <s_ij, s_kl>
    inv = {(1, 1): i11, (1, 2): i12, (2, 1): i12, (2, 2): i22}
    sig = {(1, 1): s11, (1, 2): s12, (2, 1): s12, (2, 2): s22}
    sigma2 = np.zeros_like(det)
    for i in (1, 2):
        for j in (1, 2):
            for k in (1, 2):
                for m in (1, 2):
                    sigma2 = sigma2 + inv[i, k] * inv[j, m] * _dot(sig[i, j], sig[k, m])

    sqrt_det = np.sqrt(det)
    p1 = X[..., :3]
    orient = ambient.J_ORIENTATION
    C = orient * np.sqrt(params.c1) * _dot(np.cross(p1, X1[..., :3]), X2[..., :3]) / sqrt_det

    def Jv(vec):
        return ambient.apply_J(params, X, vec, check=False)

    JX1 = Jv(X1)
    lagrangian = _dot(JX1, X2) / sqrt_det
    norm_phi = i11 * _dot(X1[..., :3], X1[..., :3]) + 2.0 * i12 * _dot(X1[..., :3], X2[..., :3]) \
        + i22 * _dot(X2[..., :3], X2[..., :3])
    norm_psi = i11 * _dot(X1[..., 3:], X1[..., 3:]) + 2.0 * i12 * _dot(X1[..., 3:], X2[..., 3:]) \
        + i22 * _dot(X2[..., 3:], X2[..., 3:])

    # complexified frame; meaningful in conformal charts
    delta = 0.5 * (X1 - 1j * X2)
    dd = 0.25 * (X11 - 2j * X12 - X22)
    delta_delta = ambient.project_to_tangent(X, dd)
    J_delta = Jv(delta)
    C_conf = (-1j / sqrt_det * _dot(ambient.apply_P(delta), Jv(np.conj(delta)))).real

    H2 = _dot(H, H)
    geom.H = H
    geom.JH = Jv(H)
    geom.C = C
    geom.C_conformal = C_conf
    geom.sigma2 = sigma2
    geom.H2 = H2
    geom.K_gauss = params.S * C * C + 2.0 * H2 - 0.5 * sigma2
    geom.norm_phi = norm_phi
    geom.norm_psi = norm_psi
    geom.lagrangian = lagrangian
    geom.delta = delta
    geom.delta_delta = delta_delta
    geom.hopf_g = _dot(delta, ambient.apply_P(delta))
    geom.hopf_h = _dot(H, J_delta)
    geom.hopf_f = _dot(delta_delta, J_delta)
    return geom


# --- finite differences ------------------------------------------------------

_BOX = [(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)]


def _idx(i, j):
    return (i + 1) * 3 + (j + 1)


class Stencil:
    """3x3 stencil of step ``h`` around a batch of chart points.

    All nine nodes are evaluated in one vectorized pass; derived fields are
    given as callables ``LocalGeometry -> array``.  With ``metric_only``
    the nodes skip the S² x S² quantities, which is all the Brioschi
    curvature needs.
    """

    def __init__(self, params: Optional[Params], cmap: ChartMap, u1, u2, h: float,
                 metric_only: bool = False):
        if not 0.0 < h <= 1e-2:
            raise ValueError(f"finite-difference step must lie in (0, 1e-2], got {h}")
        u1, u2 = np.broadcast_arrays(np.asarray(u1, dtype=float), np.asarray(u2, dtype=float))
        off = np.array(_BOX, dtype=float) * h
        U1 = u1[None] + off[:, 0].reshape((9,) + (1,) * u1.ndim)
        U2 = u2[None] + off[:, 1].reshape((9,) + (1,) * u2.ndim)
        self.h = h
        self.nodes = local_geometry(None if metric_only else params, cmap, U1, U2)
        self.center = self.nodes.take(_idx(0, 0))

    def values(self, field: Callable[[LocalGeometry], np.ndarray]) -> np.ndarray:
        return field(self.nodes)

    def grad(self, field):
        f = self.values(field)
        h = self.h
        return (f[_idx(1, 0)] - f[_idx(-1, 0)]) / (2 * h), (f[_idx(0, 1)] - f[_idx(0, -1)]) / (2 * h)

    def hess(self, field):
        f = self.values(field)
        h2 = self.h * self.h
        f11 = (f[_idx(1, 0)] - 2 * f[_idx(0, 0)] + f[_idx(-1, 0)]) / h2
        f22 = (f[_idx(0, 1)] - 2 * f[_idx(0, 0)] + f[_idx(0, -1)]) / h2
        f12 = (f[_idx(1, 1)] - f[_idx(1, -1)] - f[_idx(-1, 1)] + f[_idx(-1, -1)]) / (4 * h2)
        return f11, f12, f22

    # operators ---------------------------------------------------------------

    def d_wbar(self, field):
        """``(1/2)(d1 + i d2)`` of a (complex) scalar field."""
        f1, f2 = self.grad(field)
        return 0.5 * (f1 + 1j * f2)

    def divergence(self, field):
        """``(1/sqrt g) d_i (sqrt g X^i)`` for a tangent vector field."""

        def densities(g):
            x1, x2 = g.chart_components(field(g))
            return np.stack([g.sqrt_det * x1, g.sqrt_det * x2])

        f = densities(self.nodes)
        h = self.h
        flux = (f[0, _idx(1, 0)] - f[0, _idx(-1, 0)]) / (2 * h) \
            + (f[1, _idx(0, 1)] - f[1, _idx(0, -1)]) / (2 * h)
        return flux / self.center.sqrt_det

    def laplacian(self, field):
        """Laplace-Beltrami ``g^ij (f_ij - Gamma^k_ij f_k)``."""
        c = self.center
        f1, f2 = self.grad(field)
        f11, f12, f22 = self.hess(field)
        i11, i12, i22 = c.ginv
        gam = c.christoffel
        hess = {(0, 0): f11, (0, 1): f12, (1, 1): f22}
        out = 0.0
        for (i, j), w in (((0, 0), i11), ((0, 1), 2.0 * i12), ((1, 1), i22)):
            out = out + w * (hess[(i, j)] - gam[0, i, j] * f1 - gam[1, i, j] * f2)
        return out

    def gradient_norm2(self, field):
        f1, f2 = self.grad(field)
        i11, i12, i22 = self.center.ginv
        return i11 * f1 * f1 + 2.0 * i12 * f1 * f2 + i22 * f2 * f2

    def gauss_curvature(self):
        """Brioschi formula: metric samples for second derivatives, jets for first."""
        c = self.center
        E, F, G = c.E, c.F, c.G
        E_u, F_u, G_u = c.metric_d1
        E_v, F_v, G_v = c.metric_d2
        E_vv = self.hess(lambda g: g.E)[2]
        G_uu = self.hess(lambda g: g.G)[0]
        F_uv = self.hess(lambda g: g.F)[1]
        m1 = np.array([
            [-0.5 * E_vv + F_uv - 0.5 * G_uu, 0.5 * E_u, F_u - 0.5 * E_v],
            [F_v - 0.5 * G_u, E, F],
            [0.5 * G_v, F, G],
        ])
        zero = np.zeros_like(E)
        m2 = np.array([
            [zero, 0.5 * E_v, 0.5 * G_u],
            [0.5 * E_v, E, F],
            [0.5 * G_u, F, G],
        ])
        return (_det3(m1) - _det3(m2)) / (E * G - F * F) ** 2

    def normal_connection_norm2(self):
        """``|nabla^perp H|^2`` from differences of the mean curvature field."""
        c = self.center
        H1, H2 = self.grad(lambda g: g.H)
        n1 = c.surface_normal_part(ambient.project_to_tangent(c.point, H1))
        n2 = c.surface_normal_part(ambient.project_to_tangent(c.point, H2))
        i11, i12, i22 = c.ginv
        return i11 * _dot(n1, n1) + 2.0 * i12 * _dot(n1, n2) + i22 * _dot(n2, n2)


def _det3(m):
    return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def check_pole_band(cmap: ChartMap, u1, band: float) -> None:
    """Finite differences in the cylinder chart stay within ``|tanh s1| <= band``."""
    if band >= 1.0 or cmap.chart != "cylinder":
        return
    x = np.tanh(np.asarray(u1, dtype=float))
    if np.any(np.abs(x) > band):
        raise PoleBandError(f"|x| = {np.max(np.abs(x)):.4f} exceeds the pole band {band}")


def gauss_curvature(params, cmap, u1, u2, h=DEFAULT_STEP, pole_band=1.0):
    check_pole_band(cmap, u1, pole_band)
    return Stencil(params, cmap, u1, u2, h).gauss_curvature()


def divergence(params, cmap, field, u1, u2, h=DEFAULT_STEP, pole_band=DEFAULT_POLE_BAND):
    check_pole_band(cmap, u1, pole_band)
    return Stencil(params, cmap, u1, u2, h).divergence(field)


def laplace_beltrami(params, cmap, field, u1, u2, h=DEFAULT_STEP, pole_band=DEFAULT_POLE_BAND):
    check_pole_band(cmap, u1, pole_band)
    return Stencil(params, cmap, u1, u2, h).laplacian(field)


def gradient_norm2(params, cmap, field, u1, u2, h=DEFAULT_STEP, pole_band=DEFAULT_POLE_BAND):
    check_pole_band(cmap, u1, pole_band)
    return Stencil(params, cmap, u1, u2, h).gradient_norm2(field)


def normal_connection_norm2(params, cmap, u1, u2, h=DEFAULT_STEP, pole_band=DEFAULT_POLE_BAND):
    check_pole_band(cmap, u1, pole_band)
    return Stencil(params, cmap, u1, u2, h).normal_connection_norm2()


@dataclass
class Richardson:
    value: np.ndarray      # extrapolated estimate
    coarse: np.ndarray     # plain estimate at the base step
    order: float           # observed convergence order (sup-norm of successive changes)
    change: float          # sup |D(h) - D(h/2)|


def richardson(estimate: Callable[[float], np.ndarray], h: float = DEFAULT_STEP) -> Richardson:
    """Extrapolate a second-order difference estimate from steps h and h/2.

    The order is read off the ratio of successive changes over 2h, h, h/2;
    going finer than h/2 puts second differences at their rounding floor.
    """
    d0, d1, d2 = estimate(2.0 * h), estimate(h), estimate(h / 2)
    c01 = float(np.max(np.abs(d0 - d1))) if np.size(d1) else 0.0
    c12 = float(np.max(np.abs(d1 - d2))) if np.size(d1) else 0.0
    floor = ROUNDOFF_FLOOR * (1.0 + (float(np.max(np.abs(d2))) if np.size(d2) else 0.0))
    if c01 <= floor:
        # Differences at rounding level: the estimate is already converged.
        order = float("inf")
    else:
        order = float(np.log2(c01 / c12)) if c12 > 0 else float("inf")
    return Richardson(value=d2 + (d2 - d1) / 3.0, coarse=d1, order=order, change=c12)
