import numpy as np
import pytest
from scipy.integrate import quad

from lovedisp import (
    NotOnBranch,
    cutoff_frequencies,
    mode_norms,
    mode_residuals,
    mode_shape,
    roots_at_omega,
)


def _first_mode(medium, omega):
    y = roots_at_omega(medium, omega)[0]
    return mode_shape(medium, omega, omega * y)


def test_surface_normalization(medium_a):
    ms = _first_mode(medium_a, 100.0)
    phi, stress = ms.evaluate(np.array([0.0]))
    assert phi[0] == 1.0
    assert stress[0] == 0.0


def test_interface_continuity(medium_a):
    ms = _first_mode(medium_a, 100.0)
    h = 100.0
    below = ms.evaluate(np.array([h * (1 - 1e-12)]))
    above = ms.evaluate(np.array([h * (1 + 1e-12)]))
    assert below[0][0] == pytest.approx(above[0][0], rel=1e-9)
    assert below[1][0] == pytest.approx(above[1][0], rel=1e-6)


def test_diagnostics_clean_on_branch(medium_a):
    for omega in (40.0, 100.0):
        for y in roots_at_omega(medium_a, omega):
            d = mode_residuals(mode_shape(medium_a, omega, omega * y))
            assert d.phi_jump < 1e-9
            assert d.stress_jump < 1e-9
            assert d.ode_residual < 1e-9
            assert d.decay_error < 1e-9
            assert d.rayleigh_residual < 1e-6
            assert d.rayleigh_quotient > 1.0


def test_off_branch_rejected(medium_a):
    roots = roots_at_omega(medium_a, 100.0)
    y_off = 0.5 * (roots[0] + roots[1])  # between two roots
    with pytest.raises(NotOnBranch):
        mode_shape(medium_a, 100.0, 100.0 * y_off)


def test_cutoff_point_flagged_non_l2(medium_a):
    # at a branch start the shape exists but does not decay
    w2 = float(cutoff_frequencies(medium_a, 2)[1])
    k = w2 * 1e-4
    ms = mode_shape(medium_a, w2, k)
    assert ms.decay_rate == 0.0
    assert not ms.is_l2
    d = mode_residuals(ms)
    assert np.isinf(d.decay_error)


def test_perturbed_coefficients_detected(medium_b):
    omega = 150.0
    y = roots_at_omega(medium_b, omega)[0]
    ms = mode_shape(medium_b, omega, omega * y)
    clean = mode_residuals(ms)
    tops = list(ms.tops)
    tops[1] = type(tops[1])(phi=tops[1].phi, q=tops[1].q + 1e-3 * abs(tops[1].q) + 1e-6)
    broken = type(ms)(
        medium=ms.medium,
        omega=ms.omega,
        k=ms.k,
        tops=tuple(tops),
        a_inf=ms.a_inf,
        decay_rate=ms.decay_rate,
    )
    d = mode_residuals(broken)
    assert d.stress_jump > 100 * max(clean.stress_jump, 1e-12)


def test_norms_match_numerical_quadrature(medium_b):
    # closed-form layer integrals vs adaptive quadrature of the evaluated shape
    omega = 80.0
    y = roots_at_omega(medium_b, omega)[1]
    ms = mode_shape(medium_b, omega, omega * y)
    mu_dphi_sq, rho_phi_sq, mu_phi_sq = mode_norms(ms)

    m = ms.medium
    pieces = list(m.depths) + [float(m.depths[-1]) + 12.0 / ms.decay_rate]

    def piecewise(f):
        total = 0.0
        for a, b in zip(pieces[:-1], pieces[1:]):
            val, _ = quad(f, a, b, limit=200)
            total += val
        return total

    def mu_rho_at(z):
        idx = int(np.searchsorted(m.depths[1:], z, side="right"))
        return float(m.mu[idx]), float(m.rho[idx])

    q_mu_phi = piecewise(lambda z: mu_rho_at(z)[0] * ms.evaluate(z)[0][0] ** 2)
    q_rho_phi = piecewise(lambda z: mu_rho_at(z)[1] * ms.evaluate(z)[0][0] ** 2)
    q_mu_dphi = piecewise(
        lambda z: ms.evaluate(z)[1][0] ** 2 / mu_rho_at(z)[0]
    )
    assert mu_phi_sq == pytest.approx(q_mu_phi, rel=1e-7)
    assert rho_phi_sq == pytest.approx(q_rho_phi, rel=1e-7)
    assert mu_dphi_sq == pytest.approx(q_mu_dphi, rel=1e-7)


def test_rayleigh_identity_from_norms(medium_a):
    omega = 200.0
    for y in roots_at_omega(medium_a, omega)[:3]:
        ms = mode_shape(medium_a, omega, omega * y)
        mu_dphi_sq, rho_phi_sq, mu_phi_sq = mode_norms(ms)
        lhs = mu_dphi_sq - omega**2 * rho_phi_sq
        rhs = -((omega * y) ** 2) * mu_phi_sq
        assert lhs == pytest.approx(rhs, rel=1e-6)
        assert omega**2 * rho_phi_sq / ((omega * y) ** 2 * mu_phi_sq) > 1.0


def test_halfspace_decay_profile(medium_a):
    ms = _first_mode(medium_a, 60.0)
    h = float(ms.medium.depths[-1])
    dz = 2.0 / ms.decay_rate
    phi, _ = ms.evaluate(np.array([h, h + dz]))
    assert phi[1] / phi[0] == pytest.approx(np.exp(-ms.decay_rate * dz), rel=1e-12)
