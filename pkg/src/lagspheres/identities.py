"""Pointwise residuals of the local identities along the family Phi_t.

Two suites are evaluated in the (conformal) cylinder chart ``(s1, s2)``:

* the *exact* suite uses only 2-jets of the immersion, so its residuals
  sit at rounding level;
* the *derivative* suite needs one more derivative of a jet-exact field
  and uses Richardson-extrapolated central differences.

Which entries are gated, their tolerances and whether they only hold for
the Hamiltonian stationary member (``scope="stationary"``, i.e. t = 0) is
data in :data:`REGISTRY`, not code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import ambient
from .ambient import Params
from .calculus import (DEFAULT_POLE_BAND, DEFAULT_STEP, Stencil, check_pole_band,
                       local_geometry, richardson)
from .charts import cyl_to_sphere
from .errors import DomainError
from .immersions import closed_div_jh, family_chart, hamiltonian_potential, phi_family
from .jets import Jet2

# Relative size of the |H| band excluded around zeros of H.
H_ZERO_BAND = 1e-3


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    formula: str
    suite: str            # "exact" | "derivative"
    scope: str            # "all" | "stationary"
    tol: Optional[float]  # None: report-only
    expect_fail_off_stationary: bool = False
    note: str = ""

    @property
    def report_only(self) -> bool:
        return self.tol is None


INCONSISTENCY_NOTE = (
    "At a C = 0 point with |H|^2 = (c1-c2)/4 the displayed polynomial "
    "a|H|^4 + b|H|^2 + c exceeds K|H|^2 + |nabla^perp H|^2 built from the "
    "K(|H|) formula by (c1-c2)^2/8 (-9/8 at c1=4, c2=1); kept report-only."
)

REGISTRY = [
    IdentitySpec("lagrangian", "omega(Phi_1, Phi_2) = 0", "exact", "all", 1e-9),
    IdentitySpec("norm_sum", "|dphi e1|^2 + |dphi e2|^2 = |dpsi e1|^2 + |dpsi e2|^2 = 1",
                 "exact", "all", 1e-9),
    IdentitySpec("frenet3", "P dPhi = 2(e^{-2u} <dPhi, P dPhi> dbarPhi + i C J dPhi)",
                 "exact", "all", 1e-9),
    IdentitySpec("gauss_eq", "K = (c1+c2) C^2 + 2|H|^2 - |sigma|^2/2", "exact", "all", 1e-5,
                 note="K from the Brioschi formula (extrapolated differences)"),
    IdentitySpec("moduli", "|<dPhi,P dPhi>|^2 = e^{4u}(1-4C^2)/4, |<H,J dPhi>|^2 = e^{2u}|H|^2/4",
                 "exact", "all", 1e-9),
    IdentitySpec("theta", "<dPhi,P dPhi> - 8/(c1-c2) <H,J dPhi>^2 = 0", "exact", "stationary", 1e-9),
    IdentitySpec("hoc", "|H|^2 = (c1-c2)/4 sqrt(1-4C^2)", "exact", "stationary", 1e-9),
    IdentitySpec("esfera2", "<dd Phi, J dPhi> = -8(c1+c2)/(c1-c2)^2 <H,J dPhi>^3",
                 "exact", "stationary", 1e-9),
    IdentitySpec("koh", "K = (c1+c2)C^2 + |H|^2/2 - 8(c1+c2)^2/(c1-c2)^4 |H|^6",
                 "exact", "stationary", 1e-9, note="K from the Gauss equation (jets)"),
    IdentitySpec("s0_membership", "Re(z1 z2) = 0, sqrt(c2) x1 - sqrt(c1) x2 = (c2-c1)/sqrt(c1 c2)",
                 "exact", "stationary", 1e-9),
    IdentitySpec("d_maslov", "Im dbar<H,J dPhi> = (c1-c2) e^{2u} C / 8", "derivative", "all", 5e-5),
    IdentitySpec("ham_stat", "Re dbar<H,J dPhi> = -(e^{2u}/4) div JH = 0", "derivative",
                 "stationary", 1e-4, expect_fail_off_stationary=True),
    IdentitySpec("g_zbar", "dbar<dPhi,P dPhi> = 2i e^{2u} C <H,J dPhi>", "derivative", "all", 5e-5),
    IdentitySpec("xi", "<dd Phi,J dPhi>/<H,J dPhi> + (c1+c2)/(c1-c2) <dPhi,P dPhi> = 0",
                 "derivative", "stationary", 1e-4, note="jet-exact; |H| band excluded"),
    IdentitySpec("grad_c", "|grad C|^2 = (1-4C^2)|H|^2/4 (1+4(c1+c2)|H|^2/(c1-c2)^2)^2",
                 "derivative", "stationary", 1e-4),
    IdentitySpec("delta_c", "Lap C = -2|H|^2 C (1+4(c1+c2)|H|^2/(c1-c2)^2)^2",
                 "derivative", "stationary", 1e-4),
    IdentitySpec("lalog2", "Lap log|H| = -|H|^2/2 (1+4(c1+c2)|H|^2/(c1-c2)^2)^2",
                 "derivative", "stationary", 1e-4, note="|H| band excluded"),
    IdentitySpec("lalog_k", "Lap log|H| = K - |H|^2 - (c1+c2)/4",
                 "derivative", "stationary", 1e-4, note="|H| band excluded"),
    IdentitySpec("div_match", "div JH_t = (c2-c1) sinh(2t) x / (2(1+x^2))",
                 "derivative", "all", 5e-6),
    IdentitySpec("perp_h_closed", "|nabla^perp H|^2 = 2C^2((c1+c2)^2|H|^4/(c1-c2)^2 - (c1-c2)^2/16)",
                 "derivative", "stationary", None, note=INCONSISTENCY_NOTE),
    IdentitySpec("poly_abc", "K|H|^2 + |nabla^perp H|^2 = a|H|^4 + b|H|^2 + c",
                 "derivative", "stationary", None, note=INCONSISTENCY_NOTE),
]

SPECS = {s.id: s for s in REGISTRY}

TOLERANCE_PROFILES = {"default": 1.0, "strict": 0.1}


@dataclass
class IdentityResidual:
    """Residuals of one identity over a batch of points."""

    id: str
    paper_ref: str
    residual: np.ndarray
    normalizer: np.ndarray
    gated: bool
    tol: Optional[float]
    order: Optional[float] = None
    skipped: int = 0
    expectation: str = "holds"
    note: str = ""
    details: dict = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        finite = self.residual[np.isfinite(self.residual)]
        return float(np.max(finite)) if finite.size else float("nan")

    @property
    def holds(self) -> bool:
        """Residual below tolerance (tolerance of the registry, even if not gated)."""
        tol = self.tol if self.tol is not None else 0.0
        return bool(np.isfinite(self.max_residual) and self.max_residual <= tol)

    @property
    def passed(self) -> Optional[bool]:
        """Outcome against the expectation; ``None`` when nothing is expected."""
        if self.expectation == "fails":
            return not self.holds
        if self.expectation == "holds":
            return self.holds
        return None


def _make(spec: IdentitySpec, t: float, residual, normalizer, profile="default", **kw):
    stationary = t == 0.0
    tol = None if spec.tol is None else spec.tol * TOLERANCE_PROFILES[profile]
    gated = tol is not None and (spec.scope == "all" or stationary)
    if spec.scope == "stationary" and not stationary:
        expectation = "fails" if spec.expect_fail_off_stationary else "not applicable"
    elif tol is None:
        expectation = "report-only"
    else:
        expectation = "holds"
    residual = np.abs(np.asarray(residual, dtype=float))
    normalizer = np.broadcast_to(np.asarray(normalizer, dtype=float), residual.shape)
    return IdentityResidual(spec.id, spec.formula, residual, normalizer, gated, tol,
                            expectation=expectation, note=spec.note, **kw)


def sample_points(n: int, seed: int = 0, band: Optional[float] = None):
    """Area-uniform random points on the sphere, returned as cylinder coordinates.

    ``band`` restricts to ``|x| <= band``.
    """
    rng = np.random.default_rng(seed)
    lim = 1.0 if band is None else band
    x = rng.uniform(-lim, lim, n)
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    return np.arctanh(x), theta


def _norm(v):
    return np.sqrt(np.sum(np.abs(v) ** 2, axis=-1))


def _conformal_or_raise(geom, where):
    if not geom.is_conformal():
        raise DomainError(f"{where} needs a conformal chart "
                          f"(defect {np.max(geom.conformal_defect):.2e})")


def exact_suite(params: Params, t: float, s1, s2, h: float = DEFAULT_STEP,
                profile: str = "default") -> list[IdentityResidual]:
    """Jet-exact identities at cylinder points ``(s1, s2)`` of Phi_t."""
    s1, s2 = np.broadcast_arrays(np.asarray(s1, dtype=float), np.asarray(s2, dtype=float))
    cmap = family_chart(params, t, "cylinder")
    g = local_geometry(params, cmap, s1, s2)
    _conformal_or_raise(g, "exact_suite")
    c1, c2, D, S = params.c1, params.c2, params.D, params.S
    e2u = g.e2u
    eu = np.sqrt(e2u)
    C, H2 = g.C, g.H2
    X = g.point
    out = []

    out.append(_make(SPECS["lagrangian"], t, g.lagrangian, 1.0, profile))
    out.append(_make(SPECS["norm_sum"], t,
                     np.maximum(np.abs(g.norm_phi - 1.0), np.abs(g.norm_psi - 1.0)), 1.0, profile))

    J_delta = ambient.apply_J(params, X, g.delta, check=False)
    frenet = ambient.apply_P(g.delta) - 2.0 * (
        (g.hopf_g / e2u)[..., None] * np.conj(g.delta) + 1j * C[..., None] * J_delta)
    out.append(_make(SPECS["frenet3"], t, _norm(frenet) / eu, eu, profile))

    K_fd = richardson(lambda hh: Stencil(params, cmap, s1, s2, hh, metric_only=True)
                      .gauss_curvature(), h)
    out.append(_make(SPECS["gauss_eq"], t, (K_fd.value - g.K_gauss) / D, D, profile,
                     order=K_fd.order))

    m1 = (np.abs(g.hopf_g) ** 2 - e2u ** 2 * (1.0 - 4.0 * C * C) / 4.0) / e2u ** 2
    m2 = (np.abs(g.hopf_h) ** 2 - e2u * H2 / 4.0) / (e2u * D)
    out.append(_make(SPECS["moduli"], t, np.maximum(np.abs(m1), np.abs(m2)), e2u ** 2, profile))

    theta = g.hopf_g - 8.0 / D * g.hopf_h ** 2
    out.append(_make(SPECS["theta"], t, np.abs(theta) / e2u, e2u, profile,
                     details={"coefficient": theta}))

    hoc = (H2 - D / 4.0 * np.sqrt(np.clip(1.0 - 4.0 * C * C, 0.0, None))) / D
    out.append(_make(SPECS["hoc"], t, hoc, D, profile))

    esf = g.hopf_f + 8.0 * S / D ** 2 * g.hopf_h ** 3
    nrm = e2u * eu * np.sqrt(D)
    out.append(_make(SPECS["esfera2"], t, np.abs(esf) / nrm, nrm, profile))

    koh = (g.K_gauss - (S * C * C + H2 / 2.0 - 8.0 * S ** 2 / D ** 4 * H2 ** 3)) / D
    out.append(_make(SPECS["koh"], t, koh, D, profile))

    z1 = X[..., 0] + 1j * X[..., 1]
    z2 = X[..., 3] + 1j * X[..., 4]
    r1 = np.abs((z1 * z2).real) * np.sqrt(c1 * c2)
    lin = np.sqrt(c2) * X[..., 2] - np.sqrt(c1) * X[..., 5]
    r2 = np.abs(lin - (c2 - c1) / np.sqrt(c1 * c2))
    out.append(_make(SPECS["s0_membership"], t, np.maximum(r1, r2), 1.0, profile,
                     details={"linear_form": lin}))
    return out


def _fd_fields(st: Stencil) -> dict:
    """Every finite-difference quantity of the derivative suite on one stencil."""
    return {
        "dwbar_h": st.d_wbar(lambda g: g.hopf_h),
        "dwbar_g": st.d_wbar(lambda g: g.hopf_g),
        "grad_c": st.gradient_norm2(lambda g: g.C),
        "lap_c": st.laplacian(lambda g: g.C),
        "lap_log_h": st.laplacian(lambda g: 0.5 * np.log(g.H2)),
        "K": st.gauss_curvature(),
        "div_jh": st.divergence(lambda g: g.JH),
        "perp_h": st.normal_connection_norm2(),
    }


def derivative_suite(params: Params, t: float, s1, s2, h: float = DEFAULT_STEP,
                     pole_band: float = DEFAULT_POLE_BAND,
                     profile: str = "default") -> list[IdentityResidual]:
    """Identities needing one derivative beyond the jets, via Richardson-extrapolated differences."""
    s1, s2 = np.broadcast_arrays(np.asarray(s1, dtype=float), np.asarray(s2, dtype=float))
    cmap = family_chart(params, t, "cylinder")
    check_pole_band(cmap, s1, pole_band)
    cache = {}

    def fields_at(hh):
        if hh not in cache:
            cache[hh] = _fd_fields(Stencil(params, cmap, s1, s2, hh))
        return cache[hh]

    names = ("dwbar_h", "dwbar_g", "grad_c", "lap_c", "lap_log_h", "K", "div_jh", "perp_h")
    rich = {k: richardson(lambda hh, k=k: fields_at(hh)[k], h) for k in names}
    val = {k: r.value for k, r in rich.items()}
    order = {k: r.order for k, r in rich.items()}

    g = local_geometry(params, cmap, s1, s2)
    _conformal_or_raise(g, "derivative_suite")
    D, S = params.D, params.S
    e2u = g.e2u
    C, H2 = g.C, g.H2
    x = np.tanh(s1)
    away = np.sqrt(H2) > H_ZERO_BAND * np.sqrt(D)
    skipped = int(np.count_nonzero(~away))
    amp = (1.0 + 4.0 * S * H2 / D ** 2) ** 2

    def masked(r):
        return np.where(away, r, np.nan)

    out = []
    n1 = e2u * D
    out.append(_make(SPECS["d_maslov"], t, (val["dwbar_h"].imag - D * e2u * C / 8.0) / n1, n1,
                     profile, order=order["dwbar_h"]))
    out.append(_make(SPECS["ham_stat"], t, val["dwbar_h"].real / n1, n1, profile,
                     order=order["dwbar_h"],
                     details={"relation_to_div": np.max(np.abs(
                         val["dwbar_h"].real + e2u / 4.0 * val["div_jh"]) / n1)}))
    n3 = e2u ** 1.5 * np.sqrt(D)
    out.append(_make(SPECS["g_zbar"], t,
                     np.abs(val["dwbar_g"] - 2j * e2u * C * g.hopf_h) / n3, n3, profile,
                     order=order["dwbar_g"]))
    with np.errstate(divide="ignore", invalid="ignore"):
        xi = g.hopf_f / g.hopf_h + S / D * g.hopf_g
    out.append(_make(SPECS["xi"], t, masked(np.abs(xi) / e2u), e2u, profile, skipped=skipped))
    out.append(_make(SPECS["grad_c"], t, (val["grad_c"] - (1 - 4 * C * C) * H2 / 4.0 * amp) / D, D,
                     profile, order=order["grad_c"]))
    out.append(_make(SPECS["delta_c"], t, (val["lap_c"] + 2.0 * H2 * C * amp) / D, D, profile,
                     order=order["lap_c"]))
    out.append(_make(SPECS["lalog2"], t, masked((val["lap_log_h"] + H2 / 2.0 * amp) / D), D,
                     profile, order=order["lap_log_h"], skipped=skipped))
    out.append(_make(SPECS["lalog_k"], t,
                     masked((val["lap_log_h"] - (val["K"] - H2 - S / 4.0)) / D), D, profile,
                     order=min(order["lap_log_h"], order["K"]), skipped=skipped))
    div_norm = D * (abs(np.sinh(2.0 * t)) / 4.0 if t != 0.0 else 1.0)
    out.append(_make(SPECS["div_match"], t, (val["div_jh"] - closed_div_jh(params, t, x)) / div_norm,
                     div_norm, profile, order=order["div_jh"],
                     details={"sup_abs_div": float(np.max(np.abs(val["div_jh"])))}))
    perp_closed = 2.0 * C * C * (S ** 2 * H2 ** 2 / D ** 2 - D ** 2 / 16.0)
    out.append(_make(SPECS["perp_h_closed"], t, (val["perp_h"] - perp_closed) / D ** 2, D ** 2,
                     profile, order=order["perp_h"]))
    a = (4.0 * S ** 2 * C * C - 2.0 * params.c1 * params.c2) / D ** 2
    b = S * C * C
    c = D ** 2 / 8.0
    lhs = val["K"] * H2 + val["perp_h"]
    out.append(_make(SPECS["poly_abc"], t, (lhs - (a * H2 ** 2 + b * H2 + c)) / D ** 2, D ** 2,
                     profile, order=min(order["K"], order["perp_h"])))
    return out


def frozen_fd_values(params: Params, t: float, s1, s2, h: float = DEFAULT_STEP) -> dict:
    """Richardson-extrapolated finite-difference fields (for dumps and spot checks)."""
    cmap = family_chart(params, t, "cylinder")
    cache = {}

    def fields_at(hh):
        if hh not in cache:
            cache[hh] = _fd_fields(Stencil(params, cmap, s1, s2, hh))
        return cache[hh]

    return {k: richardson(lambda hh, k=k: fields_at(hh)[k], h).value
            for k in ("dwbar_h", "dwbar_g", "grad_c", "lap_c", "lap_log_h", "K", "div_jh", "perp_h")}


def variation_field_residual(params: Params, s1, s2, h_t: float = 1e-4,
                             pole_band: float = DEFAULT_POLE_BAND,
                             orientation: int = ambient.J_ORIENTATION) -> np.ndarray:
    """Mismatch between the normal part of d/dt Phi_t at t=0 and J grad f, times sqrt(c1-c2)."""
    s1, s2 = np.broadcast_arrays(np.asarray(s1, dtype=float), np.asarray(s2, dtype=float))
    cmap = family_chart(params, 0.0, "cylinder")
    check_pole_band(cmap, s1, pole_band)
    z, x = cyl_to_sphere(s1, s2)
    velocity = (phi_family(params, h_t, z, x) - phi_family(params, -h_t, z, x)) / (2.0 * h_t)
    g = local_geometry(params, cmap, s1, s2)
    normal = g.surface_normal_part(ambient.project_to_tangent(g.point, velocity))

    from . import jets as J
    f = hamiltonian_potential(params, None, J.tanh(Jet2.variable(s1, 1)))
    f1, f2 = np.broadcast_to(f.d1, s1.shape), np.broadcast_to(f.d2, s1.shape)
    i11, i12, i22 = g.ginv
    grad = (i11 * f1 + i12 * f2)[..., None] * g.d1 + (i12 * f1 + i22 * f2)[..., None] * g.d2
    jgrad = ambient.apply_J(params, g.point, grad, orientation=orientation, check=False)
    return _norm(normal - jgrad) * np.sqrt(params.D)


def calibrate_orientation(params: Params, s1: float = 0.5, s2: float = 0.0) -> dict:
    """Pick the global sign of J from the deformation field at one point of Phi_0."""
    res = {o: float(variation_field_residual(params, s1, s2, orientation=o)) for o in (1, -1)}
    chosen = min(res, key=res.get)
    return {"orientation": chosen, "residuals": res, "point": [s1, s2]}
