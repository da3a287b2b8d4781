from dataclasses import replace

import pytest

from rydimer import wells
from rydimer.params import from_2pi_ghz, from_2pi_khz, from_2pi_mhz, to_2pi_mhz


def test_two_photon_rabi_reference_value(defaults):
    omega2 = wells.two_photon_rabi(defaults.coeffs, defaults.mw)
    assert omega2 == pytest.approx(from_2pi_mhz(55.0), abs=from_2pi_mhz(2.0))


def test_two_photon_rabi_zero_drive(defaults):
    mw = replace(defaults.mw, omega=0.0)
    assert wells.two_photon_rabi(defaults.coeffs, mw) == 0.0


def test_two_photon_rabi_without_exchange(defaults):
    # plug-in evaluation of 2 Omega^2 (C6ee - C6rr) / (|Delta| (C6ee + C6rr))
    coeffs = replace(defaults.coeffs, c3_er=0.0)
    omega, delta = defaults.mw.omega, abs(defaults.mw.delta)
    expected = 2.0 * omega**2 * (coeffs.c6_ee - coeffs.c6_rr) / (
        delta * (coeffs.c6_ee + coeffs.c6_rr))
    assert to_2pi_mhz(abs(expected)) == pytest.approx(112.3, abs=0.1)
    assert wells.two_photon_rabi(coeffs, defaults.mw) == pytest.approx(abs(expected), rel=1e-12)


def test_two_photon_rabi_divergence(defaults):
    # tune c3_er so the denominator vanishes (possible when c6_ee + c6_rr > 0)
    from math import sqrt

    coeffs = replace(defaults.coeffs, c6_rr=-from_2pi_ghz(50.0))
    delta = abs(defaults.mw.delta)
    span = coeffs.c6_ee - coeffs.c6_rr
    c3_critical = delta * (coeffs.c6_ee + coeffs.c6_rr) / sqrt(2.0 * delta * span)
    with pytest.raises(wells.DivergentRabiError):
        wells.two_photon_rabi(replace(coeffs, c3_er=c3_critical), defaults.mw)


def test_harmonic_well_m(defaults):
    hw = wells.harmonic_parameters("m", defaults.coeffs, defaults.mw, defaults.species)
    assert hw.nu == pytest.approx(from_2pi_mhz(2.0), rel=0.10)
    assert hw.sigma * 1e3 == pytest.approx(10.7, abs=0.3)  # nm
    assert hw.r_center == pytest.approx(2.74, abs=0.02)
    # the two-level stationary point is a diagnostic near the numeric one
    assert hw.r_center_analytic == pytest.approx(hw.r_center, abs=0.01)


def test_harmonic_well_u(defaults):
    hw = wells.harmonic_parameters("u", defaults.coeffs, defaults.mw, defaults.species)
    assert hw.nu == pytest.approx(from_2pi_khz(450.0), rel=0.10)
    assert hw.r_center == pytest.approx(2.85, abs=0.03)


def test_vibration_frequency_mass_scaling(defaults):
    from math import sqrt

    heavy = replace(defaults.species, mass_kg=2.0 * defaults.species.mass_kg)
    hw = wells.harmonic_parameters("m", defaults.coeffs, defaults.mw, defaults.species)
    hw_heavy = wells.harmonic_parameters("m", defaults.coeffs, defaults.mw, heavy)
    assert hw_heavy.nu == pytest.approx(hw.nu / sqrt(2.0), rel=1e-12)


def test_kappa_scales_inversely_with_rabi(defaults):
    # doubling Omega quadruples Omega^(2) and quarters kappa_m (slopes frozen)
    hw = wells.harmonic_parameters("m", defaults.coeffs, defaults.mw, defaults.species)
    double = replace(defaults.mw, omega=2.0 * defaults.mw.omega)
    assert wells.two_photon_rabi(defaults.coeffs, double) == pytest.approx(
        4.0 * wells.two_photon_rabi(defaults.coeffs, defaults.mw), rel=1e-12)
    hw2 = wells.harmonic_parameters("m", defaults.coeffs, double, defaults.species)
    assert hw2.kappa == pytest.approx(hw.kappa / 4.0, rel=1e-12)


def test_harmonic_validity(defaults):
    hw = wells.harmonic_parameters("m", defaults.coeffs, defaults.mw, defaults.species)
    assert abs(defaults.mw.delta) / hw.nu > 50


def test_second_derivative_exact_for_quadratic():
    k = 7.3
    d2 = wells.second_derivative(lambda r: 0.5 * k * (r - 2.7) ** 2, 2.7)
    assert d2 == pytest.approx(k, rel=1e-6)


def test_numeric_curvature_brackets_analytic(defaults):
    for label in ("m", "u"):
        hw = wells.harmonic_parameters(label, defaults.coeffs, defaults.mw,
                                       defaults.species)
        kappa_num = wells.numeric_curvature(label, defaults.coeffs, defaults.mw,
                                            hw.r_center)
        ratio = kappa_num / hw.kappa
        assert 0.5 <= ratio <= 2.0


def test_numeric_curvature_rejects_maximum(defaults):
    # E_l has a local maximum near 2.77 um; curvature there is negative
    with pytest.raises(ValueError):
        wells.numeric_curvature("l", defaults.coeffs, defaults.mw, 2.766)


def test_invalid_well_selector(defaults):
    with pytest.raises(ValueError):
        wells.harmonic_parameters("x", defaults.coeffs, defaults.mw, defaults.species)
