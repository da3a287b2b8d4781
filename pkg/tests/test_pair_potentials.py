from dataclasses import replace
from math import sqrt

import numpy as np
import pytest

from rydimer import pair_potentials as pp
from rydimer.params import from_2pi_ghz, from_2pi_mhz, to_2pi_ghz, to_2pi_mhz


def test_bare_energies_noninteracting_limit(defaults):
    bare = pp.bare_energies(1e6, defaults.coeffs, defaults.mw)
    omega = defaults.mw.omega
    assert abs(bare.e_ee) < 1e-12 * omega
    assert bare.e_er_plus == pytest.approx(5.0 * omega, rel=1e-9)
    assert bare.e_er_minus == pytest.approx(5.0 * omega, rel=1e-9)
    assert bare.e_rr == pytest.approx(10.0 * omega, rel=1e-9)


def test_bare_energies_rejects_nonpositive_r(defaults):
    with pytest.raises(ValueError):
        pp.bare_energies(0.0, defaults.coeffs, defaults.mw)


def test_exchange_splitting_closed_form(defaults):
    bare = pp.bare_energies(2.75, defaults.coeffs, defaults.mw)
    expected = 2.0 * from_2pi_ghz(3.8) / 2.75**3
    assert bare.e_er_plus - bare.e_er_minus == pytest.approx(expected, rel=1e-12)
    assert to_2pi_ghz(expected) == pytest.approx(0.3655, abs=2e-4)


def test_crossing_radii_match_reference(defaults):
    cp = pp.crossing_points(defaults.coeffs, defaults.mw)
    assert cp.r1 == pytest.approx(2.36, abs=0.01)
    assert cp.r2 == pytest.approx(2.75, abs=0.01)
    assert cp.r3 == pytest.approx(3.05, abs=0.01)
    assert cp.r1 < cp.r2 < cp.r3


def test_crossing_energies(defaults):
    cp = pp.crossing_points(defaults.coeffs, defaults.mw)
    # E_c2 = 2 hbar |Delta| C6ee / (C6ee - C6rr), evaluated independently
    ec2 = 2.0 * abs(defaults.mw.delta) * defaults.coeffs.c6_ee / (
        defaults.coeffs.c6_ee - defaults.coeffs.c6_rr)
    assert cp.ec2 == pytest.approx(ec2, rel=1e-12)
    assert to_2pi_mhz(cp.ec2) == pytest.approx(321.8, abs=0.1)


def test_bare_energies_equal_at_crossings(defaults):
    cp = pp.crossing_points(defaults.coeffs, defaults.mw)
    scale = abs(defaults.mw.delta)
    b1 = pp.bare_energies(cp.r1, defaults.coeffs, defaults.mw)
    assert abs(b1.e_ee - b1.e_er_plus) < 1e-9 * scale
    assert abs(b1.e_ee - cp.ec1) < 1e-9 * scale
    b2 = pp.bare_energies(cp.r2, defaults.coeffs, defaults.mw)
    assert abs(b2.e_ee - b2.e_rr) < 1e-9 * scale
    b3 = pp.bare_energies(cp.r3, defaults.coeffs, defaults.mw)
    assert abs(b3.e_rr - b3.e_er_plus) < 1e-9 * scale
    assert abs(b3.e_rr - cp.ec3) < 1e-9 * scale


def test_crossing_collapses_without_exchange(defaults):
    coeffs = replace(defaults.coeffs, c3_er=0.0, c6_er=0.0)
    cp = pp.crossing_points(coeffs, defaults.mw)
    expected = (defaults.coeffs.c6_ee / abs(defaults.mw.delta)) ** (1.0 / 6.0)
    assert cp.r1 == pytest.approx(expected, rel=1e-12)


def test_crossing_requires_red_detuning(defaults):
    with pytest.raises(pp.NoCrossingError):
        pp.crossing_points(defaults.coeffs, replace(defaults.mw, delta=+1.0))
    with pytest.raises(pp.NoCrossingError):
        pp.crossing_points(replace(defaults.coeffs, c6_rr=+defaults.coeffs.c6_ee),
                           defaults.mw)


def test_dressed_resonant_limit(defaults):
    mw = replace(defaults.mw, delta=0.0)
    curves = pp.dressed_curves(np.array([1e5]), defaults.coeffs, mw)
    omega = defaults.mw.omega
    assert curves.e_l[0] == pytest.approx(-2.0 * omega, rel=1e-6)
    assert abs(curves.e_m[0]) < 1e-6 * omega
    assert curves.e_u[0] == pytest.approx(2.0 * omega, rel=1e-6)


def test_dressed_large_r_stark_shift(defaults):
    # second-order estimate: |ee> shifted by -2 Omega^2 / |Delta| = -2pi x 40 MHz
    curves = pp.dressed_curves(np.array([1e5]), defaults.coeffs, defaults.mw)
    assert curves.e_l[0] == pytest.approx(-from_2pi_mhz(40.0), abs=from_2pi_mhz(2.0))


def test_dressed_equals_bare_without_drive(defaults):
    mw = replace(defaults.mw, omega=0.0)
    grid = np.linspace(2.0, 5.0, 31)
    curves = pp.dressed_curves(grid, defaults.coeffs, mw)
    for i, r in enumerate(grid):
        bare = pp.bare_energies(r, defaults.coeffs, mw)
        expected = np.sort([bare.e_ee, bare.e_er_plus, bare.e_rr])
        got = np.array([curves.e_l[i], curves.e_m[i], curves.e_u[i]])
        assert np.allclose(got, expected, rtol=1e-12)


def test_dressed_eigenvector_quality(defaults):
    grid = np.linspace(2.0, 5.0, 61)
    curves = pp.dressed_curves(grid, defaults.coeffs, defaults.mw)
    for i, r in enumerate(grid):
        h = pp.pair_hamiltonian(r, defaults.coeffs, defaults.mw)
        v = curves.eigenvectors[i]
        assert np.max(np.abs(v.T @ v - np.eye(3))) < 1e-10
        vals = np.array([curves.e_l[i], curves.e_m[i], curves.e_u[i]])
        residual = h @ v - v * vals
        assert np.max(np.abs(residual)) < 1e-10 * np.linalg.norm(h, 2)


def test_trace_identity(defaults):
    grid = np.linspace(2.0, 5.0, 101)
    curves = pp.dressed_curves(grid, defaults.coeffs, defaults.mw)
    for i, r in enumerate(grid):
        bare = pp.bare_energies(r, defaults.coeffs, defaults.mw)
        lhs = curves.e_l[i] + curves.e_m[i] + curves.e_u[i]
        rhs = bare.e_ee + bare.e_er_plus + bare.e_rr
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_eigenvalue_continuity_refines_linearly(defaults):
    def max_jump(n):
        grid = np.linspace(2.2, 3.4, n)
        curves = pp.dressed_curves(grid, defaults.coeffs, defaults.mw)
        return max(np.max(np.abs(np.diff(curves.e_l))),
                   np.max(np.abs(np.diff(curves.e_m))),
                   np.max(np.abs(np.diff(curves.e_u))))

    coarse, fine = max_jump(401), max_jump(801)
    assert fine <= 0.6 * coarse


def test_grid_validation(defaults):
    with pytest.raises(ValueError):
        pp.dressed_curves(np.array([2.0, 1.5]), defaults.coeffs, defaults.mw)
    with pytest.raises(ValueError):
        pp.dressed_curves(np.array([-1.0, 2.0]), defaults.coeffs, defaults.mw)


def test_antisymmetric_well_position(defaults):
    r_minus, _ = pp.antisymmetric_well(defaults.coeffs)
    expected = (2.0 * 3.0 / 3.8) ** (1.0 / 3.0)
    assert r_minus == pytest.approx(expected, rel=1e-12)
    assert r_minus == pytest.approx(1.164, abs=2e-3)


def test_antisymmetric_well_unit_matched():
    from rydimer.params import InteractionCoefficients

    coeffs = InteractionCoefficients(c6_ee=1.0, c6_rr=-1.0, c6_er=0.5, c3_er=1.0)
    r_minus, _ = pp.antisymmetric_well(coeffs)
    assert r_minus == pytest.approx(1.0, rel=1e-12)


def test_antisymmetric_well_is_stationary(defaults):
    r_minus, _ = pp.antisymmetric_well(defaults.coeffs)
    h = 1e-6

    def e_minus(r):
        return pp.bare_energies(r, defaults.coeffs, defaults.mw).e_er_minus

    slope = (e_minus(r_minus + h) - e_minus(r_minus - h)) / (2.0 * h)
    curvature_scale = abs(e_minus(r_minus)) / r_minus
    assert abs(slope) < 1e-9 * max(curvature_scale, abs(defaults.mw.delta))


def test_antisymmetric_well_requires_attraction(defaults):
    with pytest.raises(pp.NoWellError):
        pp.antisymmetric_well(replace(defaults.coeffs, c3_er=-1.0))


def test_find_well_minimum_m(defaults):
    brackets = pp.default_brackets(defaults.coeffs, defaults.mw)
    r_min, e_min = pp.find_well_minimum("m", defaults.coeffs, defaults.mw, brackets["m"])
    assert r_min == pytest.approx(2.74, abs=0.02)
    assert e_min == pytest.approx(2.0 * from_2pi_mhz(159.3), abs=from_2pi_mhz(10.0))


def test_find_well_minimum_u(defaults):
    brackets = pp.default_brackets(defaults.coeffs, defaults.mw)
    r_min, _ = pp.find_well_minimum("u", defaults.coeffs, defaults.mw, brackets["u"])
    assert r_min == pytest.approx(2.85, abs=0.03)


def test_find_well_minimum_rejects_monotone_bracket(defaults):
    with pytest.raises(pp.NoWellError):
        pp.find_well_minimum("m", defaults.coeffs, defaults.mw, (4.0, 5.0))


def test_avoided_crossing_gaps(defaults):
    cp = pp.crossing_points(defaults.coeffs, defaults.mw)
    omega = defaults.mw.omega

    def gap_um(lo, hi):
        grid = np.linspace(lo, hi, 4001)
        curves = pp.dressed_curves(grid, defaults.coeffs, defaults.mw)
        return np.min(curves.e_u - curves.e_m)

    for r_cross in (cp.r1, cp.r3):
        gap = gap_um(r_cross - 0.15, r_cross + 0.15)
        assert gap == pytest.approx(2.0 * sqrt(2.0) * omega, rel=0.10)
