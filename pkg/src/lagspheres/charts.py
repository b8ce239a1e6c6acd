"""Chart maps: closed-form maps from a 2D chart into Euclidean space."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .jets import Jet2

# Chart codes shared with the compiled kernel.
CYLINDER = 0  # (s1, s2), x = tanh s1, theta = s2
SPHERE = 1    # (x, theta); ordered so that it carries the same orientation as (s1, s2)


@dataclass(frozen=True)
class ChartMap:
    """A twice differentiable map ``(u1, u2) -> R^dim`` evaluable on jets.

    ``func`` receives the two seeded chart variables as :class:`Jet2` and
    returns a vector jet with trailing axis ``dim``.  ``fast`` optionally
    computes the same 2-jet directly from flat coordinate arrays and returns
    an array of shape ``(6, n, dim)`` ordered (v, d1, d2, d11, d12, d22).
    """

    name: str
    chart: str
    func: Callable[[Jet2, Jet2], Jet2]
    dim: int = 6
    fast: Optional[Callable[[np.ndarray, np.ndarray], np.ndarray]] = None

    def jet(self, u1, u2) -> Jet2:
        u1, u2 = np.broadcast_arrays(np.asarray(u1, dtype=float), np.asarray(u2, dtype=float))
        if self.fast is not None:
            shape = u1.shape
            raw = self.fast(np.ascontiguousarray(u1.ravel()), np.ascontiguousarray(u2.ravel()))
            return Jet2(*(raw[k].reshape(shape + (self.dim,)) for k in range(6)))
        out = self.func(Jet2.variable(u1, 1), Jet2.variable(u2, 2))
        shape = u1.shape + (self.dim,)
        return Jet2(*(np.broadcast_to(c, shape) for c in out.components()))

    def __call__(self, u1, u2) -> np.ndarray:
        return self.jet(u1, u2).v

    def without_fast_path(self) -> "ChartMap":
        return ChartMap(self.name, self.chart, self.func, self.dim, None)


def cyl_to_sphere(s1, s2):
    """Conformal map from the cylinder to the unit sphere, ``(z, x)``."""
    s1 = np.asarray(s1, dtype=float)
    s2 = np.asarray(s2, dtype=float)
    return np.exp(1j * s2) / np.cosh(s1), np.tanh(s1)


def sphere_to_cyl(z, x):
    return np.arctanh(np.asarray(x, dtype=float)), np.mod(np.angle(z), 2.0 * np.pi)


def sphere_coords_to_cyl(x, theta):
    return np.arctanh(np.asarray(x, dtype=float)), np.asarray(theta, dtype=float)
