"""Shared fixtures; the expensive grid scan and gate calibration run once."""

import numpy as np
import pytest

from rydimer.gate import GateConfig, calibrate, simulate_cphase
from rydimer.master_eq import PulseEnvelope
from rydimer.params import default_parameters, from_2pi_khz, from_2pi_mhz
from rydimer.spectra import ScanConfig, scan


@pytest.fixture(scope="session")
def defaults():
    return default_parameters()


@pytest.fixture(scope="session")
def figure_pulse(defaults):
    """Probe pulse of the excitation spectra: peak 0.1 Omega, 80 ns flat, 10 ns edges."""
    return PulseEnvelope(peak=0.1 * defaults.mw.omega, flat_duration=80e-9,
                         edge_sigma=10e-9)


@pytest.fixture(scope="session")
def acceptance_scan(defaults, figure_pulse):
    """81 x 41 (Delta_p, R) scan used by the spectrum and averaging criteria."""
    config = ScanConfig(
        delta_p_grid=from_2pi_mhz(1.0) * np.linspace(-50.0, 600.0, 81),
        r_grid=np.linspace(2.0, 5.0, 41),
        pulse=figure_pulse,
        params=defaults,
    )
    return scan(config)


@pytest.fixture(scope="session")
def autler_townes_column(defaults, figure_pulse):
    """Same Delta_p grid at the non-interacting distance R = 10 um."""
    config = ScanConfig(
        delta_p_grid=from_2pi_mhz(1.0) * np.linspace(-50.0, 600.0, 81),
        r_grid=np.array([10.0]),
        pulse=figure_pulse,
        params=defaults,
    )
    return scan(config)


@pytest.fixture(scope="session")
def gate_calibration(defaults):
    return calibrate(GateConfig(params=defaults))


@pytest.fixture(scope="session")
def gate_results(defaults, gate_calibration):
    """Full CPHASE runs for gamma_g / (2pi) in {0, 10, 20, 50, 100} kHz."""
    from dataclasses import replace

    results = {}
    for gamma_khz in (0.0, 10.0, 20.0, 50.0, 100.0):
        rates = replace(defaults.rates, gamma_g=from_2pi_khz(gamma_khz))
        config = GateConfig(params=replace(defaults, rates=rates))
        results[gamma_khz] = simulate_cphase(config, calibration=gate_calibration)
    return results
