"""Effective two-level analysis of the binding wells on E_m and E_u.

Closed forms for the two-photon Rabi frequency at the E_ee/E_rr crossing,
the spring constants kappa_m / kappa_u and vibration frequencies nu_m /
nu_u of the two-atom relative motion, cross-checked against the numeric
curvature of the fully dressed curves.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

from .params import HBAR, AtomSpecies, InteractionCoefficients, MicrowaveDrive
from .pair_potentials import (
    crossing_points,
    default_brackets,
    dressed_energy,
    find_well_minimum,
)

#: micrometers per meter, for converting hbar-scaled spring constants to SI
_UM2_PER_M2 = 1e12


class DivergentRabiError(ValueError):
    """The two-photon Rabi denominator vanishes for these parameters."""


@dataclass(frozen=True)
class HarmonicWell:
    """Harmonic approximation of a binding well.

    kappa is the hbar-scaled spring constant (rad/s per um^2), nu the
    angular vibration frequency of the relative motion of the two atoms
    (reduced mass M_at/2) and sigma = sqrt(2 hbar / (M_at nu)) the ground
    state width of the relative coordinate, in um.
    """

    label: str
    r_center: float     # um, from numeric minimization of the full curve
    r_center_analytic: float  # um, two-level estimate (diagnostic)
    kappa: float        # rad/s / um^2
    nu: float           # rad/s
    sigma: float        # um


def two_photon_rabi(coeffs: InteractionCoefficients, drive: MicrowaveDrive) -> float:
    """|Omega^(2)|, the microwave two-photon Rabi frequency at the R2 crossing.

    Omega^(2) = 2 Omega^2 (C6ee - C6rr)
                / (|Delta| (C6ee + C6rr) - C3er sqrt(2 |Delta| (C6ee - C6rr)))

    The magnitude is returned; for the default parameters the two terms of
    the denominator are comparable, so the exchange interaction cannot be
    neglected.
    """
    if drive.delta >= 0:
        raise ValueError("the E_m well analysis requires red detuning (Delta < 0)")
    ad = abs(drive.delta)
    span = coeffs.c6_ee - coeffs.c6_rr
    denom = ad * (coeffs.c6_ee + coeffs.c6_rr) - coeffs.c3_er * sqrt(2.0 * ad * span)
    scale = ad * span  # natural magnitude of the denominator terms
    if abs(denom) < 1e-6 * scale:
        raise DivergentRabiError("two-photon Rabi frequency diverges: denominator ~ 0")
    return abs(2.0 * drive.omega**2 * span / denom)


def bare_slopes_at_r2(coeffs: InteractionCoefficients,
                      drive: MicrowaveDrive) -> tuple[float, float]:
    """Analytic slopes (eta_ee, eta_rr) = dE/dR of the bare curves at R2."""
    r2 = crossing_points(coeffs, drive).r2
    return -6.0 * coeffs.c6_ee / r2**7, -6.0 * coeffs.c6_rr / r2**7


def vibration_frequency(kappa: float, species: AtomSpecies) -> float:
    """nu = sqrt(2 kappa / M_at) for the relative motion (reduced mass M/2).

    kappa is hbar-scaled (rad/s / um^2); the result is an angular
    frequency in rad/s.
    """
    kappa_si = HBAR * kappa * _UM2_PER_M2  # J / m^2
    return sqrt(2.0 * kappa_si / species.mass_kg)


def ground_state_width(nu: float, species: AtomSpecies) -> float:
    """Relative-coordinate ground-state width sqrt(2 hbar / (M_at nu)), in um."""
    return sqrt(2.0 * HBAR / (species.mass_kg * nu)) * 1e6


def harmonic_parameters(well: str, coeffs: InteractionCoefficients,
                        drive: MicrowaveDrive, species: AtomSpecies) -> HarmonicWell:
    """Spring constant, vibration frequency and width of well 'm' or 'u'.

    Well m (crossing of E_ee and E_rr at R2, coupling Omega^(2)):
        kappa_m = (2 / |Omega^(2)|) |eta_ee eta_rr|^(3/2) / (|eta_ee| + |eta_rr|)
    Well u (crossing of E_er+ and E_rr at R3, coupling sqrt(2) Omega):
        kappa_u = (2 / R3^2) 9 |Delta|^(5/4) C3er^(3/2) / (Omega |C6rr|^(3/4))
    using the simplification R3 ~ (|C6rr/Delta|)^(1/6), valid because the
    exchange term varies slowly next to the vdW term.

    R_center is taken from numeric minimization of the full dressed curve
    (authoritative for downstream consumers); the two-level stationary
    point is reported as a diagnostic.  The full curve includes the
    repulsion from the third level that the two-level model omits, so the
    two typically differ at the percent level.
    """
    cp = crossing_points(coeffs, drive)
    if well == "m":
        omega2 = two_photon_rabi(coeffs, drive)
        eta_ee, eta_rr = bare_slopes_at_r2(coeffs, drive)
        if eta_ee == 0 or eta_rr == 0:
            raise ValueError("vanishing bare-curve slope at R2")
        kappa = (2.0 / omega2) * abs(eta_ee * eta_rr) ** 1.5 / (abs(eta_ee) + abs(eta_rr))
        # stationary point of E_m = mean + sqrt(quarter-splitting^2 + Omega2^2)
        # in the linearized two-level model; requires slopes of opposite sign
        s, d = eta_ee + eta_rr, eta_ee - eta_rr
        if d * d <= s * s:
            raise ValueError("bare slopes at R2 must have opposite signs")
        r_analytic = cp.r2 - 2.0 * s * omega2 / (abs(d) * sqrt(d * d - s * s))
    elif well == "u":
        kappa = (2.0 / cp.r3**2) * 9.0 * abs(drive.delta) ** 1.25 \
            * coeffs.c3_er**1.5 / (drive.omega * abs(coeffs.c6_rr) ** 0.75)
        r_analytic = cp.r3
    else:
        raise ValueError("well selector must be 'm' or 'u'")
    if kappa <= 0:
        raise ValueError(f"non-positive spring constant for well {well}")

    r_center, _ = find_well_minimum(well, coeffs, drive,
                                    default_brackets(coeffs, drive)[well])
    nu = vibration_frequency(kappa, species)
    return HarmonicWell(
        label=well,
        r_center=r_center,
        r_center_analytic=r_analytic,
        kappa=kappa,
        nu=nu,
        sigma=ground_state_width(nu, species),
    )


def second_derivative(f, x: float, step: float = 1e-3) -> float:
    """Central second difference, Richardson-extrapolated once (h and h/2)."""
    def second(h: float) -> float:
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / h**2

    return (4.0 * second(step / 2.0) - second(step)) / 3.0


def numeric_curvature(curve: str, coeffs: InteractionCoefficients,
                      drive: MicrowaveDrive, r_min: float,
                      step: float = 1e-3) -> float:
    """Second derivative of the full dressed curve at an interior minimum.

    hbar-scaled units rad/s / um^2; serves as the oracle for the analytic
    spring constants.
    """
    d2 = second_derivative(
        lambda r: dressed_energy(r, curve, coeffs, drive), r_min, step)
    if d2 <= 0:
        raise ValueError(f"negative curvature at R = {r_min}: not a minimum")
    return d2
