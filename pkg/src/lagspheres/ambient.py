"""The ambient Kähler surface S²(c1) x S²(c2) sitting inside R⁶ = R³ x R³.

Points and vectors are numpy arrays whose trailing axis has length 6: the
first three entries live in the first factor, the last three in the
second.  Complexified vectors are complex arrays; every inner product here
is complex *bilinear*.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError

# Global orientation of the complex structure.  J on a sphere factor is
# rotation by +90 degrees about  J_ORIENTATION * (outward normal).  The value
# is the one selected by ``identities.calibrate_orientation``: with it the
# normal part of d/dt Phi_t at t=0 equals J grad f and div JH_t matches the
# closed form, with f and the closed form taken verbatim.
J_ORIENTATION = -1

ON_MANIFOLD_TOL = 1e-12
TANGENCY_TOL = 1e-8


@dataclass(frozen=True)
class Params:
    """Curvatures of the two sphere factors, ``c1 > c2 > 0``."""

    c1: float
    c2: float

    def __post_init__(self):
        c1, c2 = float(self.c1), float(self.c2)
        if not (np.isfinite(c1) and np.isfinite(c2)):
            raise DomainError(f"curvatures must be finite, got c1={c1}, c2={c2}")
        if not c1 > c2 > 0.0:
            raise DomainError(f"need c1 > c2 > 0, got c1={c1}, c2={c2}")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    @property
    def D(self) -> float:
        return self.c1 - self.c2

    @property
    def S(self) -> float:
        return self.c1 + self.c2

    @cached_property
    def a(self) -> np.ndarray:
        """The double point of the family: north poles of both factors."""
        return np.array([0.0, 0.0, 1.0 / np.sqrt(self.c1), 0.0, 0.0, 1.0 / np.sqrt(self.c2)])

    @cached_property
    def a_hat(self) -> np.ndarray:
        return np.concatenate([-self.a[:3], self.a[3:]])


def split(w):
    return w[..., :3], w[..., 3:]


def inner(u, v):
    """Complex-bilinear inner product over the trailing axis."""
    return np.sum(u * v, axis=-1)


def on_manifold_residual(params: Params, pt) -> np.ndarray:
    p1, p2 = split(np.asarray(pt))
    r1 = np.abs(np.sum(p1 * p1, axis=-1) * params.c1 - 1.0)
    r2 = np.abs(np.sum(p2 * p2, axis=-1) * params.c2 - 1.0)
    return np.maximum(r1, r2)


def check_on_manifold(params: Params, pt, tol: float = ON_MANIFOLD_TOL) -> None:
    res = on_manifold_residual(params, pt)
    if not np.all(res <= tol):
        raise DomainError(f"point off S2 x S2 (relative residual {np.max(res):.3e})")


def _remove_radial(p, w):
    return w - p * (np.sum(p * w, axis=-1) / np.sum(p * p, axis=-1))[..., None]


def project_to_tangent(pt, w):
    """Drop the components of ``w`` along the two unit normals at ``pt``."""
    pt = np.asarray(pt)
    w = np.asarray(w)
    p1, p2 = split(pt)
    w1, w2 = split(w)
    return np.concatenate([_remove_radial(p1, w1), _remove_radial(p2, w2)], axis=-1)


def tangency_residual(pt, v) -> np.ndarray:
    """Relative size of the normal components of ``v`` at ``pt``."""
    p1, p2 = split(np.asarray(pt))
    v1, v2 = split(np.asarray(v))
    n1 = np.abs(np.sum(p1 * v1, axis=-1)) / np.linalg.norm(p1, axis=-1)
    n2 = np.abs(np.sum(p2 * v2, axis=-1)) / np.linalg.norm(p2, axis=-1)
    scale = np.maximum(np.sqrt(np.sum(np.abs(v) ** 2, axis=-1)), 1e-300)
    return np.maximum(n1, n2) / scale


def apply_J(params: Params, pt, v, *, orientation: int = J_ORIENTATION, check: bool = True):
    """Complex structure of the product, factorwise rotation by 90 degrees.

    ``J¹u = orientation * sqrt(c1) * (p1 x u)`` and likewise on the second
    factor.  Works on real or complex ``v``.
    """
    pt = np.asarray(pt)
    v = np.asarray(v)
    if check:
        res = tangency_residual(pt, v)
        if np.any(res > TANGENCY_TOL):
            raise DomainError(f"apply_J needs a tangent vector (residual {np.max(res):.3e})")
    p1, p2 = split(pt)
    v1, v2 = split(v)
    s1 = orientation * np.sqrt(params.c1)
    s2 = orientation * np.sqrt(params.c2)
    return np.concatenate([s1 * np.cross(p1, v1), s2 * np.cross(p2, v2)], axis=-1)


def apply_P(v):
    """Product structure ``(v1, v2) -> (-v1, v2)``."""
    v = np.asarray(v)
    v1, v2 = split(v)
    return np.concatenate([-v1, v2], axis=-1)


def kahler_form(params: Params, pt, u, v, *, orientation: int = J_ORIENTATION):
    """``omega(u, v) = <J u, v>``."""
    return inner(apply_J(params, pt, u, orientation=orientation), v)
