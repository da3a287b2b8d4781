"""Relative-motion wavefunctions and Franck-Condon overlap factors.

Two trapped ground-state atoms have a Gaussian relative-coordinate
wavefunction of width Sigma = sqrt(2)*sigma centered at the trap
separation R0; the Rydberg dimer supports harmonic-oscillator states of
width Sigma_m centered at the well minimum R_m.  The overlap integrals
f(n) = int_0^inf chi*(R) chi_m(R, n) dR set the coupling strengths of the
two-photon excitation.

Lengths are in micrometers here, matching the rest of the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np

from .params import HBAR, AtomSpecies

#: overflow guard for the Hermite recurrence; far beyond physical need
MAX_VIB_LEVEL = 60


@dataclass(frozen=True)
class TrapState:
    """Relative motion of two ground-state atoms in separate traps."""

    nu: float         # rad/s, single-atom trap frequency
    sigma: float      # um, single-atom width sqrt(hbar / M nu)
    sigma_bar: float  # um, center-of-mass width sigma / sqrt(2)
    big_sigma: float  # um, relative-coordinate width sqrt(2) * sigma
    r0: float         # um, trap separation r_{2,0} - r_{1,0}


@dataclass(frozen=True)
class DimerVibration:
    """One vibrational level of the Rydberg dimer well."""

    n: int
    r_m: float        # um, well center
    big_sigma: float  # um, ground-state width of the well
    nu: float         # rad/s, vibration frequency

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("vibrational quantum number must be >= 0")
        if self.n > MAX_VIB_LEVEL:
            raise ValueError(f"n = {self.n} exceeds the supported range ({MAX_VIB_LEVEL})")

    @property
    def energy(self) -> float:
        """hbar-scaled level energy nu * (1/2 + n)."""
        return self.nu * (0.5 + self.n)

    def wavefunction(self):
        return dimer_wavefunction(self.n, self.r_m, self.big_sigma)


def trap_widths(nu: float, species: AtomSpecies, r0: float = 0.0) -> TrapState:
    """Widths of the trapped-pair wavefunctions for trap frequency nu."""
    if nu <= 0:
        raise ValueError("trap frequency must be positive")
    sigma = sqrt(HBAR / (species.mass_kg * nu)) * 1e6
    return TrapState(nu=nu, sigma=sigma, sigma_bar=sigma / sqrt(2.0),
                     big_sigma=sqrt(2.0) * sigma, r0=r0)


def _hermite(n: int, x: np.ndarray) -> np.ndarray:
    """Physicists' Hermite polynomial H_n(x) by upward recurrence."""
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev
    h = 2.0 * x
    for k in range(1, n):
        h, h_prev = 2.0 * x * h - 2.0 * k * h_prev, h
    return h


def dimer_wavefunction(n: int, r_m: float, big_sigma: float):
    """Normalized harmonic-oscillator eigenfunction centered at r_m.

    chi_m(R, n) = 2^(-n/2) / sqrt(n!) (pi Sigma_m^2)^(-1/4)
                  exp(-(R - r_m)^2 / (2 Sigma_m^2)) H_n((R - r_m) / Sigma_m)

    The Hermite argument is the standard dimensionless displacement
    (R - r_m) / Sigma_m, which is what reproduces the known f(n) overlap
    values; with any other argument the set would not be orthonormal.
    """
    if n < 0:
        raise ValueError("vibrational quantum number must be >= 0")
    if n > MAX_VIB_LEVEL:
        raise ValueError(f"n = {n} exceeds the supported range ({MAX_VIB_LEVEL})")
    if big_sigma <= 0:
        raise ValueError("width must be positive")
    log_norm = -0.5 * (n * np.log(2.0) + _log_factorial(n)) - 0.25 * np.log(pi * big_sigma**2)
    norm = np.exp(log_norm)

    def chi(r):
        x = (np.asarray(r, dtype=float) - r_m) / big_sigma
        return norm * np.exp(-0.5 * x * x) * _hermite(n, x)

    return chi


def _log_factorial(n: int) -> float:
    return float(np.sum(np.log(np.arange(1, n + 1)))) if n > 1 else 0.0


def trap_wavefunction(trap: TrapState):
    """Gaussian relative-coordinate wavefunction chi(R) of the trapped pair."""
    norm = (1.0 / (pi * trap.big_sigma**2)) ** 0.25

    def chi(r):
        return norm * np.exp(-(np.asarray(r, dtype=float) - trap.r0) ** 2
                             / (2.0 * trap.big_sigma**2))

    return chi


def franck_condon_closed_form(trap: TrapState, dimer: DimerVibration) -> float:
    """Closed form for the n = 0 overlap (the oracle for the quadrature):

    f = sqrt(2 Sigma Sigma_m / (Sigma^2 + Sigma_m^2))
        * exp(-(R0 - R_m)^2 / (2 (Sigma^2 + Sigma_m^2)))
    """
    s, sm = trap.big_sigma, dimer.big_sigma
    ssq = s * s + sm * sm
    return sqrt(2.0 * s * sm / ssq) * np.exp(-(trap.r0 - dimer.r_m) ** 2 / (2.0 * ssq))


def franck_condon(n: int, trap: TrapState, dimer: DimerVibration,
                  tol: float = 1e-8) -> float:
    """Signed overlap f(n) between the trapped pair and dimer level n.

    Composite Gauss-Legendre panels over R_m +- 12 max(Sigma, Sigma_m),
    with the lower bound clipped at 0 to respect the radial domain; the
    panel width tracks the narrowest length scale so the oscillatory
    integrand is resolved.  Convergence is confirmed by halving the panel
    width and comparing to `tol`.
    """
    chi_t = trap_wavefunction(trap)
    chi_d = dimer_wavefunction(n, dimer.r_m, dimer.big_sigma)
    half_width = 12.0 * max(trap.big_sigma, dimer.big_sigma)
    lo = max(0.0, dimer.r_m - half_width)
    hi = dimer.r_m + half_width
    scale = min(trap.big_sigma, dimer.big_sigma) / max(1.0, sqrt(n))

    def quad(panel_width: float) -> float:
        n_panels = max(4, int(np.ceil((hi - lo) / panel_width)))
        edges = np.linspace(lo, hi, n_panels + 1)
        x, w = np.polynomial.legendre.leggauss(12)
        half = 0.5 * (edges[1] - edges[0])
        nodes = (edges[:-1, None] + half) + half * x[None, :]
        weights = half * np.broadcast_to(w, nodes.shape)
        return float(np.sum(weights * chi_t(nodes) * chi_d(nodes)))

    coarse, fine = quad(scale), quad(scale / 2.0)
    if abs(fine - coarse) > tol:
        raise RuntimeError(
            f"Franck-Condon quadrature did not converge for n = {n}: "
            f"|difference| = {abs(fine - coarse):.2e}")
    return fine
