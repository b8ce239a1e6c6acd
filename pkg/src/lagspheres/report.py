"""Assembly of verification reports, field dumps and the area-scan plot."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from . import __version__, ambient, identities, integrals
from ._kernels import BACKEND
from .ambient import Params
from .calculus import DEFAULT_POLE_BAND, DEFAULT_STEP, Stencil, local_geometry, richardson
from .charts import sphere_coords_to_cyl
from .errors import DomainError
from .immersions import MINIMAL_HAT_SCALE, closed_div_jh, family_chart


@dataclass
class RunConfig:
    c1: float = 4.0
    c2: float = 1.0
    t: float = 0.0
    n_x: int = 200
    n_theta: int = 256
    fd_step: float = DEFAULT_STEP
    samples: int = 1000
    seed: int = 0
    pole_band: float = DEFAULT_POLE_BAND
    tol_profile: str = "default"

    def validate(self) -> Params:
        params = Params(self.c1, self.c2)
        if not math.isfinite(self.t):
            raise DomainError(f"t must be finite, got {self.t}")
        if self.n_x < 16 or self.n_theta < 16:
            raise DomainError(f"grid must be at least 16x16, got {self.n_x}x{self.n_theta}")
        if not 0.0 < self.fd_step <= 1e-2:
            raise DomainError(f"fd step must lie in (0, 1e-2], got {self.fd_step}")
        if self.samples < 1:
            raise DomainError("need at least one sample point")
        if not 0.0 < self.pole_band < 1.0:
            raise DomainError(f"pole band must lie in (0, 1), got {self.pole_band}")
        if self.tol_profile not in identities.TOLERANCE_PROFILES:
            raise DomainError(f"unknown tolerance profile {self.tol_profile!r}")
        return params

    @property
    def grid(self) -> integrals.QuadratureGrid:
        return integrals.QuadratureGrid(self.n_x, self.n_theta)


def jsonable(obj):
    """Plain JSON types; non-finite floats become null."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    return obj


def _order_field(order):
    if order is None:
        return None
    return "converged" if math.isinf(order) else order


def identity_entry(r: identities.IdentityResidual) -> dict:
    finite = r.residual[np.isfinite(r.residual)]
    return {
        "kind": "identity",
        "id": r.id,
        "paper_ref": r.paper_ref,
        "gated": r.gated,
        "expectation": r.expectation,
        "passed": r.passed,
        "observed_holds": r.holds if r.tol is not None else None,
        "max_residual": r.max_residual,
        "tol": r.tol,
        "sample_size": int(finite.size),
        "skipped": r.skipped,
        "richardson_order": _order_field(r.order),
        "note": r.note,
    }


def global_entry(c: integrals.GlobalCheck) -> dict:
    return {
        "kind": "integral",
        "id": c.id,
        "paper_ref": c.paper_ref,
        "gated": c.gated,
        "expectation": "holds" if c.gated else "report-only",
        "passed": c.passed if c.gated else None,
        "value": c.value,
        "expected": c.expected,
        "abs_err": c.abs_err,
        "rel_err": c.rel_err if c.expected != 0 else None,
        "tol": c.tol,
        "tol_kind": c.tol_kind,
        "refinement": c.refinement,
        "note": c.note,
        "details": c.details,
    }


def verify(cfg: RunConfig) -> dict:
    """Run every suite for ``cfg`` and return the report as an ordered dict."""
    params = cfg.validate()
    scale = identities.TOLERANCE_PROFILES[cfg.tol_profile]
    t = cfg.t
    checks = []

    calib = identities.calibrate_orientation(params)
    checks.append({
        "kind": "calibration",
        "id": "j_orientation",
        "paper_ref": "normal part of d/dt Phi_t at t=0 equals J grad f",
        "gated": True,
        "expectation": "holds",
        "passed": calib["orientation"] == ambient.J_ORIENTATION,
        "value": calib["orientation"],
        "expected": ambient.J_ORIENTATION,
        "details": calib,
    })

    s1, s2 = identities.sample_points(cfg.samples, cfg.seed)
    for r in identities.exact_suite(params, t, s1, s2, cfg.fd_step, cfg.tol_profile):
        checks.append(identity_entry(r))

    b1, b2 = identities.sample_points(cfg.samples, cfg.seed + 1, band=cfg.pole_band)
    for r in identities.derivative_suite(params, t, b1, b2, cfg.fd_step, cfg.pole_band,
                                         cfg.tol_profile):
        checks.append(identity_entry(r))

    var = identities.variation_field_residual(params, b1, b2, pole_band=cfg.pole_band)
    tol = 1e-5 * scale
    vmax = float(np.max(var))
    checks.append({
        "kind": "identity",
        "id": "variation_field",
        "paper_ref": "normal part of d/dt Phi_t at t=0 equals J grad f",
        "gated": True,
        "expectation": "holds",
        "passed": bool(vmax <= tol),
        "max_residual": vmax,
        "tol": tol,
        "sample_size": int(var.size),
        "skipped": 0,
        "richardson_order": None,
        "note": "property of the deformation at t = 0, independent of --t",
    })

    for c in integrals.global_checks(params, t, cfg.grid, cfg.fd_step, tol_scale=scale):
        checks.append(global_entry(c))

    gated = [c for c in checks if c["gated"]]
    failed = [c["id"] for c in gated if not c["passed"]]
    report = {
        "meta": {
            "tool": "lagspheres",
            "version": __version__,
            "backend": BACKEND,
            "config": asdict(cfg),
            "j_orientation": {
                "frozen": ambient.J_ORIENTATION,
                "calibrated": calib["orientation"],
                "rule": "J rotates each factor by +90 degrees about the inward normal",
            },
            "inversion_scale": {
                "factor": MINIMAL_HAT_SCALE,
                "note": "the minimal embeddings are scaled by 1/4 before inversion; "
                        "unscaled they do not reproduce Phi_t",
            },
            "report_only_note": identities.INCONSISTENCY_NOTE,
            "stationary": t == 0.0,
        },
        "checks": checks,
        "overall": {
            "passed": not failed,
            "gated_count": len(gated),
            "failed": failed,
        },
    }
    return jsonable(report)


# field dumps -------------------------------------------------------------

FIELD_QUANTITIES = ("C", "H2", "K", "divJH", "theta", "xi", "sigma2", "conf")
_FD_QUANTITIES = ("K", "divJH")


def field_rows(cfg: RunConfig, quantity: str):
    """Rows ``(s1, s2, x, theta, value)`` on the quadrature nodes, x-major order.

    Difference-based quantities are restricted to ``|x| <= pole_band``; ``xi``
    skips nodes where |H| is within the zero band.
    """
    if quantity not in FIELD_QUANTITIES:
        raise DomainError(f"unknown quantity {quantity!r}; choose from {', '.join(FIELD_QUANTITIES)}")
    params = cfg.validate()
    x, th, _ = cfg.grid.nodes()
    if quantity in _FD_QUANTITIES:
        keep = np.abs(x) <= cfg.pole_band
        x, th = x[keep], th[keep]
    s1, s2 = sphere_coords_to_cyl(x, th)
    cmap = family_chart(params, cfg.t, "cylinder")
    g = local_geometry(params, cmap, s1, s2)
    D, S = params.D, params.S
    if quantity == "C":
        val = g.C
    elif quantity == "H2":
        val = g.H2
    elif quantity == "sigma2":
        val = g.sigma2
    elif quantity == "conf":
        val = g.conformal_defect
    elif quantity == "theta":
        val = np.abs(g.hopf_g - 8.0 / D * g.hopf_h ** 2)
    elif quantity == "xi":
        keep = np.sqrt(g.H2) > identities.H_ZERO_BAND * np.sqrt(D)
        val = np.abs(g.hopf_f / np.where(keep, g.hopf_h, 1.0) + S / D * g.hopf_g)
        s1, s2, x, th, val = s1[keep], s2[keep], x[keep], th[keep], val[keep]
    else:
        def est(h):
            st = Stencil(params, cmap, s1, s2, h, metric_only=quantity == "K")
            return st.gauss_curvature() if quantity == "K" else st.divergence(lambda gg: gg.JH)
        val = richardson(est, cfg.fd_step).value
    return np.column_stack([s1, s2, x, th, val])


def field_reference(params: Params, t: float, rows) -> Optional[np.ndarray]:
    """Closed-form divJH on field rows (for cross checks)."""
    return closed_div_jh(params, t, rows[:, 2])


# point dump --------------------------------------------------------------

def _point_residual(r):
    return {"residual": r.max_residual, "tol": r.tol, "gated": r.gated,
            "expectation": r.expectation, "passed": r.passed}


def point_dump(cfg: RunConfig, s1: float, s2: float) -> dict:
    params = cfg.validate()
    if not (math.isfinite(s1) and math.isfinite(s2)):
        raise DomainError("s1 and s2 must be finite")
    cmap = family_chart(params, cfg.t, "cylinder")
    g = local_geometry(params, cmap, np.array([s1]), np.array([s2]))
    fd = identities.frozen_fd_values(params, cfg.t, np.array([s1]), np.array([s2]), cfg.fd_step)

    def one(a):
        return np.asarray(a)[0]

    geometry = {
        "s1": s1, "s2": s2, "x": math.tanh(s1),
        "point": one(g.point),
        "E": one(g.E), "F": one(g.F), "G": one(g.G), "e2u": one(g.e2u),
        "conformal_defect": one(g.conformal_defect),
        "C": one(g.C), "C_conformal": one(g.C_conformal),
        "H2": one(g.H2), "sigma2": one(g.sigma2),
        "K_gauss_equation": one(g.K_gauss), "K_brioschi": one(fd["K"]),
        "H": one(g.H), "JH": one(g.JH),
        "hopf_g": one(g.hopf_g), "hopf_h": one(g.hopf_h), "hopf_f": one(g.hopf_f),
        "grad_C_norm2": one(fd["grad_c"]), "lap_log_H": one(fd["lap_log_h"]),
        "div_JH": one(fd["div_jh"]), "div_JH_closed": float(closed_div_jh(params, cfg.t, math.tanh(s1))),
    }
    residuals = {}
    for r in identities.exact_suite(params, cfg.t, np.array([s1]), np.array([s2]), cfg.fd_step,
                                    cfg.tol_profile):
        residuals[r.id] = _point_residual(r)
    if abs(math.tanh(s1)) <= cfg.pole_band:
        for r in identities.derivative_suite(params, cfg.t, np.array([s1]), np.array([s2]),
                                             cfg.fd_step, cfg.pole_band, cfg.tol_profile):
            residuals[r.id] = _point_residual(r)
    return jsonable({"meta": {"config": asdict(cfg), "backend": BACKEND},
                     "geometry": geometry, "residuals": residuals})


# area scan plot ----------------------------------------------------------

def area_svg(rows, width: int = 640, height: int = 400) -> str:
    """Self-contained SVG 1.1 polyline of A(t) with labelled axes."""
    ts = np.array([r.t for r in rows])
    a = np.array([r.A_closed for r in rows])
    left, right, top, bottom = 60, 20, 20, 50
    pw, ph = width - left - right, height - top - bottom
    a_max = float(np.max(a)) * 1.05

    def px(t):
        return left + (t - ts[0]) / (ts[-1] - ts[0]) * pw

    def py(v):
        return top + ph - v / a_max * ph

    pts = " ".join(f"{px(t):.2f},{py(v):.2f}" for t, v in zip(ts, a))
    x_axis_y = py(0.0)
    zero_x = px(0.0) if ts[0] <= 0.0 <= ts[-1] else left
    ticks = []
    for tv in np.linspace(ts[0], ts[-1], 7):
        ticks.append(f'<line x1="{px(tv):.2f}" y1="{x_axis_y:.2f}" x2="{px(tv):.2f}" '
                     f'y2="{x_axis_y + 5:.2f}" stroke="black"/>'
                     f'<text x="{px(tv):.2f}" y="{x_axis_y + 18:.2f}" font-size="11" '
                     f'text-anchor="middle">{tv:g}</text>')
    for av in np.linspace(0.0, float(np.max(a)), 5):
        ticks.append(f'<line x1="{zero_x - 5:.2f}" y1="{py(av):.2f}" x2="{zero_x:.2f}" '
                     f'y2="{py(av):.2f}" stroke="black"/>'
                     f'<text x="{zero_x - 8:.2f}" y="{py(av) + 4:.2f}" font-size="11" '
                     f'text-anchor="end">{av:.2f}</text>')
    return "\n".join([
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<line x1="{left}" y1="{x_axis_y:.2f}" x2="{left + pw}" y2="{x_axis_y:.2f}" stroke="black"/>',
        f'<line x1="{zero_x:.2f}" y1="{top}" x2="{zero_x:.2f}" y2="{top + ph}" stroke="black"/>',
        *ticks,
        f'<polyline fill="none" stroke="#1f4e9c" stroke-width="2" points="{pts}"/>',
        f'<text x="{left + pw / 2:.2f}" y="{height - 10}" font-size="13" text-anchor="middle">t</text>',
        f'<text x="{zero_x + 8:.2f}" y="{top + 12}" font-size="13">A(t)</text>',
        '</svg>',
        '',
    ])
