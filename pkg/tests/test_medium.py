import numpy as np
import pytest

from lovedisp import (
    Medium,
    NoLoveWaves,
    NonPositiveParameter,
    WavenumberKind,
    lateral_wavenumber,
    ordered_profile,
    validate_medium,
)


def test_benchmark_medium_velocities(medium_a):
    assert np.allclose(medium_a.c, [1000.0, 10000.0])
    assert medium_a.c0 == 1000.0
    assert medium_a.c_inf == 10000.0
    assert medium_a.n == 1


def test_config_velocity_form_matches_modulus_form():
    via_c = validate_medium(
        {
            "n": 1,
            "layers": [
                {"c": 1000.0, "rho": 1.0, "thickness": 100.0},
                {"c": 10000.0, "rho": 1.0},
            ],
        }
    )
    via_mu = validate_medium(
        {
            "layers": [
                {"mu": 1e6, "rho": 1.0, "thickness": 100.0},
                {"mu": 1e8, "rho": 1.0},
            ]
        }
    )
    assert np.array_equal(via_c.mu, via_mu.mu)
    assert np.array_equal(via_c.c, via_mu.c)


def test_no_love_waves_when_surface_is_fastest():
    with pytest.raises(NoLoveWaves):
        Medium(mu=[1e8, 1e6], rho=[1.0, 1.0], thickness=[100.0])


@pytest.mark.parametrize(
    "mu,rho,thickness",
    [
        ([0.0, 1e8], [1.0, 1.0], [100.0]),
        ([1e6, 1e8], [1.0, -1.0], [100.0]),
        ([1e6, 1e8], [1.0, 1.0], [0.0]),
        ([1e6, 1e8], [1.0, 1.0], [np.inf]),
    ],
)
def test_nonpositive_parameters_rejected(mu, rho, thickness):
    with pytest.raises(NonPositiveParameter):
        Medium(mu=mu, rho=rho, thickness=thickness)


def test_config_rejects_bad_layer_specs():
    with pytest.raises(ValueError):
        validate_medium({"layers": [{"rho": 1.0, "thickness": 1.0}, {"c": 2.0, "rho": 1.0}]})
    with pytest.raises(ValueError):
        validate_medium(
            {
                "layers": [
                    {"c": 1.0, "mu": 1.0, "rho": 1.0, "thickness": 1.0},
                    {"c": 2.0, "rho": 1.0},
                ]
            }
        )
    with pytest.raises(ValueError):
        validate_medium(
            {
                "n": 3,
                "layers": [{"c": 1.0, "rho": 1.0, "thickness": 1.0}, {"c": 2.0, "rho": 1.0}],
            }
        )


def test_ordered_profile_already_sorted(medium_a):
    prof = ordered_profile(medium_a)
    assert np.allclose(prof.c_tilde, [1000.0, 10000.0])
    assert prof.sigma == (1, 2)


def test_ordered_profile_sorts_triple():
    m = Medium(mu=[1818.0**2, 1e6, 1e8], rho=[1.0, 1.0, 1.0], thickness=[50.0, 70.0])
    prof = ordered_profile(m)
    assert np.allclose(prof.c_tilde, [1000.0, 1818.0, 10000.0])
    assert prof.sigma == (2, 1, 3)
    assert prof.t_tilde[0] == 70.0 and prof.t_tilde[1] == 50.0
    assert np.isnan(prof.t_tilde[2])


def test_ordered_profile_stable_on_ties():
    m = Medium(mu=[1e6, 1e6, 1e8], rho=[1.0, 1.0, 1.0], thickness=[10.0, 20.0])
    prof = ordered_profile(m)
    assert prof.sigma == (1, 2, 3)


def test_ordered_profile_idempotent(medium_b_swapped):
    prof = ordered_profile(medium_b_swapped)
    again = np.sort(prof.c_tilde, kind="stable")
    assert np.array_equal(prof.c_tilde, again)


def test_lateral_wavenumber_oscillatory_example(medium_a):
    # sqrt(1/1000^2 - (1e-4)^2) computed independently
    expected = np.sqrt(1e-6 - 1e-8)
    lw = lateral_wavenumber(medium_a, 1, 1e-4)
    assert lw.kind is WavenumberKind.OSCILLATORY
    assert lw.magnitude == pytest.approx(expected, rel=1e-15)
    assert lw.complex_value == pytest.approx(-1j * expected)


def test_lateral_wavenumber_zero_and_evanescent(medium_a):
    lw0 = lateral_wavenumber(medium_a, 2, float(medium_a.slowness[1]))
    assert lw0.kind is WavenumberKind.ZERO and lw0.magnitude == 0.0
    lw = lateral_wavenumber(medium_a, 2, 2e-4)
    assert lw.kind is WavenumberKind.EVANESCENT
    assert lw.magnitude == pytest.approx(np.sqrt(4e-8 - 1e-8), rel=1e-15)


def test_lateral_wavenumber_kind_switch_is_continuous(medium_b):
    # magnitude goes to zero from both sides of each stored slowness
    for j in range(1, medium_b.n + 2):
        inv = float(medium_b.slowness[j - 1])
        for eps in (1e-9, 1e-12):
            below = lateral_wavenumber(medium_b, j, inv * (1 - eps))
            above = lateral_wavenumber(medium_b, j, inv * (1 + eps))
            assert below.kind is WavenumberKind.OSCILLATORY
            assert above.kind is WavenumberKind.EVANESCENT
            scale = inv * np.sqrt(2 * eps) * 1.1
            assert below.magnitude < scale
            assert above.magnitude < scale


def test_medium_arrays_are_readonly(medium_a):
    with pytest.raises(ValueError):
        medium_a.mu[0] = 2.0
