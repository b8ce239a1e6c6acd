"""Hot kernel: 2-jets of the family Phi_t over batches of chart points.

The compiled extension ``_jetcore`` is used when it was built; otherwise
the same formulas run through :class:`~lagspheres.jets.Jet2` arithmetic on
numpy arrays.  Set ``LAGSPHERES_BACKEND=python`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import jets as J
from .charts import CYLINDER, SPHERE
from .jets import Jet2

try:
    from ._jetcore import phi_jets as _phi_jets_compiled
except ImportError:  # extension not built
    _phi_jets_compiled = None

if _phi_jets_compiled is not None and os.environ.get("LAGSPHERES_BACKEND", "").lower() != "python":
    BACKEND = "compiled"
else:
    BACKEND = "python"


def phi_components(c1, c2, t, zr, zi, x):
    """Six real components of Phi_t at ``z = zr + i zi``, height ``x``.

    Works on floats, numpy arrays or jets alike.
    """
    st, ct = np.sinh(t), np.cosh(t)
    rd = np.sqrt(c1 - c2)
    den = (c1 * ct * ct - c2 * st * st) + (c1 * st * st - c2 * ct * ct) * (x * x)
    k = (2.0 * rd) / den
    q1 = ((c1 * ct * ct - 2.0 * c1 - c2 * st * st)
          + (c1 * st * st + 2.0 * c1 - c2 * ct * ct) * (x * x)) / (2.0 * np.sqrt(c1) * rd)
    q2 = ((c1 * ct * ct - 2.0 * c2 - c2 * st * st)
          + (c1 * st * st + 2.0 * c2 - c2 * ct * ct) * (x * x)) / (2.0 * np.sqrt(c2) * rd)
    # (s_t + i c_t x) z  and  (c_t + i s_t x) conj(z)
    return (
        k * (st * zr - ct * (x * zi)),
        k * (st * zi + ct * (x * zr)),
        k * q1,
        k * (ct * zr + st * (x * zi)),
        k * (st * (x * zr) - ct * zi),
        k * q2,
    )


def chart_to_sphere_jets(chart, u1: Jet2, u2: Jet2):
    """``(Re z, Im z, x)`` as jets of the chart variables."""
    if chart == CYLINDER:
        sech = 1.0 / J.cosh(u1)
        return sech * J.cos(u2), sech * J.sin(u2), J.tanh(u1)
    if chart == SPHERE:
        r = J.sqrt(1.0 - u1 * u1)
        return r * J.cos(u2), r * J.sin(u2), u1
    raise ValueError(f"unknown chart code {chart!r}")


def phi_jets_python(c1, c2, t, chart, u1, u2) -> np.ndarray:
    zr, zi, x = chart_to_sphere_jets(chart, Jet2.variable(u1, 1), Jet2.variable(u2, 2))
    jet = Jet2.stack(phi_components(c1, c2, t, zr, zi, x))
    return np.stack([np.broadcast_to(c, np.shape(u1) + (6,)) for c in jet.components()])


def phi_jets(c1, c2, t, chart, u1, u2, backend=None) -> np.ndarray:
    """2-jets of Phi_t at flat arrays of chart points, shape ``(6, n, 6)``."""
    backend = backend or BACKEND
    u1 = np.ascontiguousarray(u1, dtype=float)
    u2 = np.ascontiguousarray(u2, dtype=float)
    if backend == "compiled":
        if _phi_jets_compiled is None:
            raise RuntimeError("compiled kernel not available")
        return _phi_jets_compiled(float(c1), float(c2), float(t), int(chart), u1, u2)
    return phi_jets_python(c1, c2, t, chart, u1, u2)


def compiled_available() -> bool:
    return _phi_jets_compiled is not None
