"""Dispersion function of the layered half-space, via scaled transfer matrices.

The pair ``(P, Q)`` proportional to ``(phi, mu phi'/omega)`` is propagated
from the surface through the finite layers by 2x2 real matrices.  The
dispersion function

    F(omega, y) = mu_inf * nu_inf(y) * P_n(omega, y) + Q_n(omega, y)

is real on the slowness strip ``y in [1/c_inf, 1/c0)`` and vanishes exactly
at the guided-wave slownesses.  Oscillatory layers use cos/sin forms, never
complex arithmetic.  Evanescent layers factor out ``exp(x)`` per layer and
the state is renormalized after every multiply, so arbitrarily large
frequency-thickness products stay inside double range; the accumulated
positive factor is tracked as ``log_scale``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .medium import Medium

__all__ = ["PQState", "DispersionValue", "layer_matrix", "pq_state", "dispersion_value"]


@dataclass(frozen=True)
class PQState:
    """Scaled propagated pair: the true values are ``exp(log_scale) * (p, q)``."""

    p: float
    q: float
    log_scale: float


@dataclass(frozen=True)
class DispersionValue:
    """Scaled dispersion value: the true value is ``exp(log_scale) * value``."""

    value: float
    log_scale: float
    sign: int


def _layer_factors(mu_j, invc_j, invc2_j, t_j, omega, y):
    """Scaled transfer-matrix entries of one layer, broadcast over (omega, y).

    Returns ``(m11, m12, m21, m22, log_factor)``; the true matrix is
    ``exp(log_factor) * [[m11, m12], [m21, m22]]``.  The evanescent branch is
    scaled by ``exp(-x)`` so entries stay O(1); oscillatory and degenerate
    branches carry no factor.
    """
    omega, y = np.broadcast_arrays(omega, y)
    d = y * y - invc2_j
    mag = np.sqrt(np.abs(d))
    zero = (y == invc_j) | (mag == 0.0)
    evan = (y > invc_j) & ~zero
    osci = (y < invc_j) & ~zero

    shape = d.shape
    m11 = np.ones(shape)
    m12 = np.zeros(shape)
    m21 = np.zeros(shape)
    m22 = np.ones(shape)
    lf = np.zeros(shape)

    if np.any(evan):
        x = omega[evan] * mag[evan] * t_j
        # cosh x = e^x (1 + e^-2x)/2, sinh x = -e^x expm1(-2x)/2: exact at x=0
        ch = 0.5 * (1.0 + np.exp(-2.0 * x))
        sh = -0.5 * np.expm1(-2.0 * x)
        a = mu_j * mag[evan]
        m11[evan] = ch
        m12[evan] = sh / a
        m21[evan] = a * sh
        m22[evan] = ch
        lf[evan] = x
    if np.any(osci):
        x = omega[osci] * mag[osci] * t_j
        cx = np.cos(x)
        sx = np.sin(x)
        a = mu_j * mag[osci]
        m11[osci] = cx
        m12[osci] = sx / a
        m21[osci] = -a * sx
        m22[osci] = cx
    if np.any(zero):
        # exact degenerate hit: the limit matrix [[1, omega T / mu], [0, 1]]
        m12[zero] = omega[zero] * t_j / mu_j
    return m11, m12, m21, m22, lf


def _pq_scaled(medium: Medium, omega, y):
    """Vectorized scaled propagation: returns arrays ``(p, q, log_scale)``.

    ``omega`` and ``y`` must be broadcast-compatible; ``omega >= 0``.  After
    every layer the state is divided by ``max(|p|, |q|)``, so the returned
    components satisfy ``max(|p|, |q|) == 1`` except for the untouched
    initial state at ``omega == 0``.
    """
    omega = np.asarray(omega, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast_shapes(omega.shape, y.shape)
    p = np.ones(shape)
    q = np.zeros(shape)
    ls = np.zeros(shape)
    for j in range(medium.n):
        m11, m12, m21, m22, lf = _layer_factors(
            float(medium.mu[j]),
            float(medium.slowness[j]),
            float(medium.slowness_sq[j]),
            float(medium.thickness[j]),
            omega,
            y,
        )
        p, q = m11 * p + m12 * q, m21 * p + m22 * q
        s = np.maximum(np.abs(p), np.abs(q))
        p = p / s
        q = q / s
        ls = ls + np.log(s) + lf
    return p, q, ls


def _halfspace_decay(medium: Medium, y):
    """Nonnegative half-space decay factor ``sqrt(y^2 - 1/c_inf^2)``."""
    d = np.asarray(y, dtype=float) ** 2 - float(medium.slowness_sq[-1])
    return np.sqrt(np.maximum(d, 0.0))


def _sturm_count(medium: Medium, omega, y):
    """Exact number of dispersion roots with slowness strictly above ``y``.

    Counts the interior zeros of the surface-normalized solution down
    through the stack and the decaying tail; by Sturm oscillation theory
    that zero count equals the number of eigenvalues below the shooting
    slowness.  Per layer the zero count is closed-form: a rigid rotation
    crossing in oscillatory layers, at most one sign change in evanescent
    (or exactly degenerate) layers.  The tail contributes one more zero
    exactly when the dispersion value and the displacement at the last
    interface have opposite signs.

    Vectorized over broadcastable ``omega`` and ``y``; returns an int64
    array (0-d for scalars).
    """
    omega = np.asarray(omega, dtype=float)
    y = np.asarray(y, dtype=float)
    shape = np.broadcast_shapes(omega.shape, y.shape)
    omega = np.broadcast_to(omega, shape)
    y = np.broadcast_to(y, shape)
    p = np.ones(shape)
    q = np.zeros(shape)
    total = np.zeros(shape, dtype=np.int64)
    half_pi = 0.5 * np.pi
    for j in range(medium.n):
        mu_j = float(medium.mu[j])
        t_j = float(medium.thickness[j])
        inv = float(medium.slowness[j])
        d = y * y - float(medium.slowness_sq[j])
        mag = np.sqrt(np.abs(d))
        zero = (y == inv) | (mag == 0.0)
        evan = (y > inv) & ~zero
        osci = (y < inv) & ~zero

        p2 = np.empty(shape)
        q2 = np.empty(shape)
        if np.any(evan | zero):
            sel = evan | zero
            x = omega[sel] * mag[sel] * t_j
            # exp(x)-scaled hyperbolic entries: positive scale, same signs
            ch = 0.5 * (1.0 + np.exp(-2.0 * x))
            sh = -0.5 * np.expm1(-2.0 * x)
            a = np.where(zero[sel], 1.0, mu_j * mag[sel])
            p2[sel] = np.where(
                zero[sel], p[sel] + omega[sel] * t_j / mu_j * q[sel],
                ch * p[sel] + sh / a * q[sel],
            )
            q2[sel] = np.where(zero[sel], q[sel], a * sh * p[sel] + ch * q[sel])
            # monotone-type layer: at most one interior sign change
            flip = (p[sel] != 0.0) & (
                (p2[sel] == 0.0) | (np.sign(p2[sel]) == -np.sign(p[sel]))
            )
            inc = np.zeros(shape, dtype=np.int64)
            inc[sel] = flip.astype(np.int64)
            total += inc
        if np.any(osci):
            x = omega[osci] * mag[osci] * t_j
            a = mu_j * mag[osci]
            v0 = q[osci] / a
            cx, sx = np.cos(x), np.sin(x)
            p2[osci] = cx * p[osci] + sx * v0
            q2[osci] = a * (-sx * p[osci] + cx * v0)
            # zeros of R cos(t - delta) for the rotation angle t in (0, x]
            delta = np.arctan2(v0, p[osci])
            inc = np.zeros(shape, dtype=np.int64)
            inc[osci] = (
                np.floor((x - delta - half_pi) / np.pi)
                - np.floor((-delta - half_pi) / np.pi)
            ).astype(np.int64)
            total += inc
        s = np.maximum(np.abs(p2), np.abs(q2))
        p = p2 / s
        q = q2 / s
    f = float(medium.mu[-1]) * _halfspace_decay(medium, y) * p + q
    tail = (p != 0.0) & (np.sign(f) == -np.sign(p))
    return total + tail.astype(np.int64)


def _dispersion_scaled(medium: Medium, omega, y):
    """Vectorized scaled dispersion value: returns ``(value, log_scale)``."""
    p, q, ls = _pq_scaled(medium, omega, y)
    val = float(medium.mu[-1]) * _halfspace_decay(medium, y) * p + q
    return val, ls


def _dispersion_scale_floor(medium: Medium) -> float:
    """Magnitude floor for normalizing dispersion residuals.

    Near a cutoff both assembled terms vanish together, so residuals are
    normalized against this slowness-bandwidth proxy instead of the local
    term magnitudes alone.
    """
    lo, hi = medium.slowness_domain
    return float(medium.mu[-1]) * float(np.sqrt(hi * hi - lo * lo))


def _check_point(medium: Medium, omega: float, y: float) -> None:
    if not omega >= 0.0:
        raise ValueError("omega must be >= 0")
    lo = float(medium.slowness[-1])
    if y < lo * (1.0 - 1e-12):
        raise ValueError(
            f"slowness {y!r} below the half-space slowness {lo!r}: the "
            "dispersion function is complex there"
        )


def layer_matrix(medium: Medium, j: int, omega: float, y: float) -> np.ndarray:
    """True (unscaled) 2x2 transfer matrix of finite layer ``j`` (1-based).

    Unit determinant in every branch.  For very large ``omega * T`` the
    hyperbolic entries can overflow double range; the propagation path in
    :func:`pq_state` is immune to that because it rescales per layer.
    """
    if not 1 <= j <= medium.n:
        raise ValueError(f"layer index {j} outside 1..{medium.n}")
    _check_point(medium, omega, y)
    mu_j = float(medium.mu[j - 1])
    t_j = float(medium.thickness[j - 1])
    inv = float(medium.slowness[j - 1])
    d = y * y - float(medium.slowness_sq[j - 1])
    mag = float(np.sqrt(abs(d)))
    if y == inv or mag == 0.0:
        return np.array([[1.0, omega * t_j / mu_j], [0.0, 1.0]])
    x = omega * mag * t_j
    a = mu_j * mag
    if y > inv:
        return np.array(
            [[np.cosh(x), np.sinh(x) / a], [a * np.sinh(x), np.cosh(x)]]
        )
    return np.array([[np.cos(x), np.sin(x) / a], [-a * np.sin(x), np.cos(x)]])


def pq_state(medium: Medium, omega: float, y: float) -> PQState:
    """Scaled ``(P, Q)`` after propagation through all finite layers."""
    _check_point(medium, omega, y)
    p, q, ls = _pq_scaled(medium, np.asarray(float(omega)), np.asarray(float(y)))
    return PQState(p=float(p), q=float(q), log_scale=float(ls))


def dispersion_value(medium: Medium, omega: float, y: float) -> DispersionValue:
    """Scaled dispersion value at ``(omega, y)``.

    Zeros of this function on ``y in (1/c_inf, 1/c0)`` are the guided-wave
    slownesses at ``omega``; at ``omega = 0`` the value reduces exactly to
    ``mu_inf * nu_inf(y)``.
    """
    _check_point(medium, omega, y)
    val, ls = _dispersion_scaled(
        medium, np.asarray(float(omega)), np.asarray(float(y))
    )
    v = float(val)
    return DispersionValue(value=v, log_scale=float(ls), sign=int(np.sign(v)))
