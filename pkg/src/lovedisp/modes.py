"""Construction and verification of guided-wave eigenfunctions.

A mode at a dispersion root ``(omega, k)`` is assembled layer by layer from
the propagated pair ``(phi, mu phi'/omega)``, normalized to ``phi(0) = 1``
and ``phi'(0) = 0``.  Inside each finite layer the displacement is a
cos/cosh combination; below the last interface it decays exponentially.
Norm integrals are evaluated in closed form per layer, which keeps the
quotient identities accurate to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import _dispersion_scale_floor, _dispersion_scaled
from .errors import NotOnBranch
from .medium import Medium

__all__ = ["ModeShape", "ModeDiagnostics", "mode_shape", "mode_residuals", "mode_norms"]


@dataclass(frozen=True)
class LayerCoefficients:
    """Values at a layer top: displacement and scaled stress ``mu phi'/omega``."""

    phi: float
    q: float


@dataclass(frozen=True)
class ModeShape:
    """Eigenfunction at a dispersion root, normalized to ``phi(0) = 1``.

    ``tops[j]`` holds the displacement and scaled stress at interface j,
    i.e. the top of finite layer j+1.  Below the last interface the shape
    is ``a_inf * exp(-decay_rate * (z - H_last))``; a zero decay rate means
    the point sits on the half-space slowness and the shape is not square
    integrable (no guided mode there).
    """

    medium: Medium
    omega: float
    k: float
    tops: tuple[LayerCoefficients, ...]
    a_inf: float
    decay_rate: float

    @property
    def y(self) -> float:
        return self.k / self.omega

    @property
    def is_l2(self) -> bool:
        return self.decay_rate > 0.0

    def evaluate(self, z) -> tuple[np.ndarray, np.ndarray]:
        """Displacement and stress ``mu phi'`` on depth array ``z``."""
        z = np.atleast_1d(np.asarray(z, dtype=float))
        m = self.medium
        phi = np.empty_like(z)
        stress = np.empty_like(z)
        h_last = float(m.depths[-1])
        layer = np.searchsorted(m.depths[1:], z, side="right")
        for j in range(m.n):
            sel = layer == j
            if not np.any(sel):
                continue
            phi[sel], stress[sel] = self._eval_layer(j, z[sel])
        deep = layer == m.n
        if np.any(deep):
            tail = self.a_inf * np.exp(-self.decay_rate * (z[deep] - h_last))
            phi[deep] = tail
            stress[deep] = -float(m.mu[-1]) * self.decay_rate * tail
        return phi, stress

    def _eval_layer(self, j: int, z: np.ndarray):
        m = self.medium
        mu_j = float(m.mu[j])
        dz = z - float(m.depths[j])
        a = self.tops[j].phi
        q = self.tops[j].q
        inv = float(m.slowness[j])
        d = self.y * self.y - float(m.slowness_sq[j])
        mag = float(np.sqrt(abs(d)))
        if self.y == inv or mag == 0.0:
            slope = self.omega * q / mu_j
            return a + slope * dz, np.full_like(dz, mu_j * slope)
        nu = self.omega * mag
        if self.y > inv:
            b = q / (mu_j * mag)
            phi = a * np.cosh(nu * dz) + b * np.sinh(nu * dz)
            dphi = nu * (a * np.sinh(nu * dz) + b * np.cosh(nu * dz))
        else:
            b = q / (mu_j * mag)
            phi = a * np.cos(nu * dz) + b * np.sin(nu * dz)
            dphi = nu * (-a * np.sin(nu * dz) + b * np.cos(nu * dz))
        return phi, mu_j * dphi


@dataclass(frozen=True)
class ModeDiagnostics:
    """Self-consistency report of a constructed mode (all relative)."""

    phi_jump: float
    stress_jump: float
    ode_residual: float
    decay_error: float
    rayleigh_residual: float
    rayleigh_quotient: float


def _true_pq_tops(medium: Medium, omega: float, y: float):
    """Unscaled per-interface ``(phi, q)`` values, phi(0)=1, phi'(0)=0.

    Plain-float propagation: adequate for moderate frequency-thickness
    products (the scaled path in :mod:`lovedisp.dispersion` exists for the
    extreme ones, but a mode with an astronomically scaled interior has no
    meaningful normalized shape anyway).
    """
    tops = [LayerCoefficients(phi=1.0, q=0.0)]
    phi, q = 1.0, 0.0
    for j in range(medium.n):
        mu_j = float(medium.mu[j])
        t_j = float(medium.thickness[j])
        inv = float(medium.slowness[j])
        d = y * y - float(medium.slowness_sq[j])
        mag = float(np.sqrt(abs(d)))
        if y == inv or mag == 0.0:
            phi, q = phi + (omega * t_j / mu_j) * q, q
        else:
            x = omega * mag * t_j
            a = mu_j * mag
            if y > inv:
                phi, q = (
                    np.cosh(x) * phi + np.sinh(x) / a * q,
                    a * np.sinh(x) * phi + np.cosh(x) * q,
                )
            else:
                phi, q = (
                    np.cos(x) * phi + np.sin(x) / a * q,
                    -a * np.sin(x) * phi + np.cos(x) * q,
                )
        tops.append(LayerCoefficients(phi=float(phi), q=float(q)))
    return tops


def mode_shape(
    medium: Medium, omega: float, k: float, residual_floor: float = 1e-8
) -> ModeShape:
    """Build the eigenfunction at a dispersion root ``(omega, k)``.

    Raises
    ------
    NotOnBranch
        If the normalized dispersion residual at ``(omega, k/omega)``
        exceeds ``residual_floor``.
    """
    if not omega > 0.0:
        raise ValueError("omega must be > 0")
    y = k / omega
    lo, hi = medium.slowness_domain
    if not lo <= y < hi:
        raise ValueError(f"slowness {y!r} outside [{lo}, {hi})")
    # on-branch test: either the dispersion function changes sign within a
    # few refinement widths of y (strong evanescence can put an irreducible
    # cancellation floor under the pointwise value), or the value itself is
    # below the global floor
    delta = max(1e-11 * y, 8.0 * np.spacing(y))
    probe = np.array([y - delta, y, y + delta])
    vals, logs = _dispersion_scaled(medium, omega, probe)
    res = abs(float(vals[1])) / _dispersion_scale_floor(medium)
    brackets = vals[0] == 0.0 or vals[2] == 0.0 or np.sign(vals[0]) != np.sign(vals[2])
    if not brackets and res > residual_floor:
        raise NotOnBranch(
            f"no dispersion zero within {delta:.2e} of y={y!r} and normalized "
            f"residual {res:.3e} exceeds floor {residual_floor:.1e} "
            f"at (omega={omega:g}, k={k:g})"
        )
    tops = _true_pq_tops(medium, omega, y)
    nu_inf = omega * float(np.sqrt(max(y * y - float(medium.slowness_sq[-1]), 0.0)))
    return ModeShape(
        medium=medium,
        omega=float(omega),
        k=float(k),
        tops=tuple(tops[:-1]),
        a_inf=float(tops[-1].phi),
        decay_rate=nu_inf,
    )


def mode_residuals(
    shape: ModeShape, n_depths: int = 100, decay_span: float = 1.0
) -> ModeDiagnostics:
    """Verify a constructed mode against the equations that define it.

    Checks continuity of displacement and stress at every interface, the
    pointwise layer ODE at ``n_depths`` sample depths per layer, the
    exponential decay rate below the last interface, and the quotient
    identity tying the three closed-form norms together.
    """
    m = shape.medium
    omega, k, y = shape.omega, shape.k, shape.y

    # interface jumps: evaluate the layer form at its bottom vs the stored top
    phi_jump = 0.0
    stress_jump = 0.0
    stress_scale = _dispersion_scale_floor(m) * omega
    for j in range(m.n):
        bottom = float(m.depths[j + 1])
        phi_b, stress_b = shape._eval_layer(j, np.array([bottom]))
        if j + 1 < m.n:
            phi_t = shape.tops[j + 1].phi
            stress_t = omega * shape.tops[j + 1].q
        else:
            phi_t = shape.a_inf
            stress_t = -float(m.mu[-1]) * shape.decay_rate * shape.a_inf
        phi_scale = max(abs(phi_b[0]), abs(phi_t), 1e-300)
        phi_jump = max(phi_jump, abs(phi_b[0] - phi_t) / phi_scale)
        s_scale = max(abs(stress_b[0]), abs(stress_t), stress_scale)
        stress_jump = max(stress_jump, abs(stress_b[0] - stress_t) / s_scale)

    # pointwise ODE residual, second derivative from the analytic layer form
    ode_residual = 0.0
    for j in range(m.n):
        zs = np.linspace(float(m.depths[j]), float(m.depths[j + 1]), n_depths + 2)[1:-1]
        phi, _ = shape._eval_layer(j, zs)
        mu_j, rho_j = float(m.mu[j]), float(m.rho[j])
        coef = (mu_j * k * k - rho_j * omega * omega) / mu_j
        d2 = coef * phi if _is_exact_hit(m, j, y) else _second_derivative(shape, j, zs)
        scale = np.max(np.abs(coef * phi)) + np.max(np.abs(d2)) + 1e-300
        ode_residual = max(ode_residual, float(np.max(np.abs(d2 - coef * phi)) / scale))

    # exponential decay below the last interface
    h_last = float(m.depths[-1])
    if shape.decay_rate > 0.0:
        dz = min(1.0 / shape.decay_rate, h_last if h_last > 0 else 1.0) * decay_span
        ratio = shape.evaluate(np.array([h_last + dz]))[0][0] / shape.a_inf
        decay_error = abs(ratio - np.exp(-shape.decay_rate * dz)) / abs(ratio)
    else:
        decay_error = np.inf  # constant tail: not square integrable

    if shape.is_l2:
        mu_dphi_sq, rho_phi_sq, mu_phi_sq = mode_norms(shape)
        lhs = mu_dphi_sq - omega * omega * rho_phi_sq
        rhs = -k * k * mu_phi_sq
        rayleigh_residual = abs(lhs - rhs) / abs(rhs)
        rayleigh_quotient = omega * omega * rho_phi_sq / (k * k * mu_phi_sq)
    else:
        rayleigh_residual = np.inf
        rayleigh_quotient = np.nan

    return ModeDiagnostics(
        phi_jump=float(phi_jump),
        stress_jump=float(stress_jump),
        ode_residual=float(ode_residual),
        decay_error=float(decay_error),
        rayleigh_residual=float(rayleigh_residual),
        rayleigh_quotient=float(rayleigh_quotient),
    )


def _is_exact_hit(m: Medium, j: int, y: float) -> bool:
    return y == float(m.slowness[j]) or y * y == float(m.slowness_sq[j])


def _second_derivative(shape: ModeShape, j: int, zs: np.ndarray) -> np.ndarray:
    """Analytic second derivative of the layer form at depths ``zs``."""
    m = shape.medium
    mu_j = float(m.mu[j])
    dz = zs - float(m.depths[j])
    a = shape.tops[j].phi
    b = shape.tops[j].q / (mu_j * float(np.sqrt(abs(shape.y**2 - m.slowness_sq[j]))))
    d = shape.y**2 - float(m.slowness_sq[j])
    nu = shape.omega * float(np.sqrt(abs(d)))
    if d > 0:
        return nu * nu * (a * np.cosh(nu * dz) + b * np.sinh(nu * dz))
    return -nu * nu * (a * np.cos(nu * dz) + b * np.sin(nu * dz))


def mode_norms(shape: ModeShape) -> tuple[float, float, float]:
    """Closed-form norms ``(||sqrt(mu) phi'||^2, ||sqrt(rho) phi||^2, ||sqrt(mu) phi||^2)``.

    Each finite layer contributes analytic integrals of its cos/cosh form;
    the half-space contributes the exponential tail.  Requires a decaying
    (square-integrable) mode.
    """
    if not shape.is_l2:
        raise ValueError("mode is not square integrable (zero decay rate)")
    m = shape.medium
    omega, y = shape.omega, shape.y
    phi_sq = np.zeros(m.n + 1)
    dphi_sq = np.zeros(m.n + 1)
    for j in range(m.n):
        t_j = float(m.thickness[j])
        mu_j = float(m.mu[j])
        a = shape.tops[j].phi
        q = shape.tops[j].q
        d = y * y - float(m.slowness_sq[j])
        mag = float(np.sqrt(abs(d)))
        if _is_exact_hit(m, j, y) or mag == 0.0:
            slope = omega * q / mu_j
            phi_sq[j] = a * a * t_j + a * slope * t_j**2 + slope**2 * t_j**3 / 3.0
            dphi_sq[j] = slope * slope * t_j
            continue
        nu = omega * mag
        b = q / (mu_j * mag)
        if d > 0:
            i_cc = 0.5 * t_j + np.sinh(2 * nu * t_j) / (4 * nu)
            i_ss = -0.5 * t_j + np.sinh(2 * nu * t_j) / (4 * nu)
            i_cs = np.sinh(nu * t_j) ** 2 / (2 * nu)
            phi_sq[j] = a * a * i_cc + 2 * a * b * i_cs + b * b * i_ss
            dphi_sq[j] = nu * nu * (a * a * i_ss + 2 * a * b * i_cs + b * b * i_cc)
        else:
            i_cc = 0.5 * t_j + np.sin(2 * nu * t_j) / (4 * nu)
            i_ss = 0.5 * t_j - np.sin(2 * nu * t_j) / (4 * nu)
            i_cs = np.sin(nu * t_j) ** 2 / (2 * nu)
            phi_sq[j] = a * a * i_cc + 2 * a * b * i_cs + b * b * i_ss
            dphi_sq[j] = nu * nu * (a * a * i_ss - 2 * a * b * i_cs + b * b * i_cc)
    nu_inf = shape.decay_rate
    phi_sq[-1] = shape.a_inf**2 / (2 * nu_inf)
    dphi_sq[-1] = shape.a_inf**2 * nu_inf / 2
    mu_dphi = float(np.dot(m.mu, dphi_sq))
    rho_phi = float(np.dot(m.rho, phi_sq))
    mu_phi = float(np.dot(m.mu, phi_sq))
    return mu_dphi, rho_phi, mu_phi
