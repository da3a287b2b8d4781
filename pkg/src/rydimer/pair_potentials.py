"""Two-atom potential curves of the microwave-dressed Rydberg pair.

The doubly-excited manifold of two atoms with Rydberg states |e>, |r| is
spanned by |ee>, |er+> = (|e1 r2> + |r1 e2>)/sqrt(2) and |rr>; the
microwave field couples them sequentially with rate sqrt(2)*Omega while
the antisymmetric combination |er-> stays decoupled.  All energies here
are hbar-scaled (rad/s) in the frame rotating with the microwave field,
distances in micrometers.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .params import InteractionCoefficients, MicrowaveDrive

SQRT2 = sqrt(2.0)


class NoCrossingError(ValueError):
    """The bare potential curves do not cross for these parameters."""


class NoWellError(ValueError):
    """No interior potential minimum exists in the requested bracket."""


# ---------------------------------------------------------------------------
# bare energies and their crossing points (closed forms)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BarePairEnergies:
    """Bare (Omega -> 0) pair energies at separation R, hbar-scaled."""

    r: float
    e_ee: float
    e_er_plus: float
    e_er_minus: float
    e_rr: float


@dataclass(frozen=True)
class CrossingPoints:
    """Radii and energies where the bare curves cross (R1 < R2 < R3)."""

    r1: float
    r2: float
    r3: float
    ec1: float
    ec2: float
    ec3: float


def bare_energies(r: float, coeffs: InteractionCoefficients,
                  drive: MicrowaveDrive) -> BarePairEnergies:
    """E_ee = C6ee/R^6, E_er+- = -Delta +- C3er/R^3 + C6er/R^6, E_rr = -2 Delta + C6rr/R^6."""
    if r <= 0:
        raise ValueError("separation must be positive")
    r3 = r**3
    r6 = r3 * r3
    dd = coeffs.c3_er / r3
    return BarePairEnergies(
        r=r,
        e_ee=coeffs.c6_ee / r6,
        e_er_plus=-drive.delta + dd + coeffs.c6_er / r6,
        e_er_minus=-drive.delta - dd + coeffs.c6_er / r6,
        e_rr=-2.0 * drive.delta + coeffs.c6_rr / r6,
    )


def crossing_points(coeffs: InteractionCoefficients,
                    drive: MicrowaveDrive) -> CrossingPoints:
    """Closed-form crossing radii R1, R2, R3 and energies Ec1, Ec2, Ec3.

    R1: E_ee = E_er+, R2: E_ee = E_rr, R3: E_rr = E_er+.  Requires red
    detuning and repulsive/attractive vdW coefficients (c6_ee > 0 > c6_rr),
    otherwise the crossings need not exist.
    """
    if drive.delta >= 0:
        raise NoCrossingError("crossings exist for red detuning (Delta < 0) only")
    if not (coeffs.c6_ee > 0 > coeffs.c6_rr):
        raise NoCrossingError("need repulsive c6_ee > 0 and attractive c6_rr < 0")
    ad = abs(drive.delta)
    c3 = coeffs.c3_er

    rad1 = (c3 / (2.0 * ad)) ** 2 + (coeffs.c6_ee - coeffs.c6_er) / ad
    rad3 = (c3 / (2.0 * ad)) ** 2 + (coeffs.c6_er - coeffs.c6_rr) / ad
    if rad1 < 0 or rad3 < 0:
        raise NoCrossingError("negative radicand: no real crossing radius")

    r1 = (sqrt(rad1) - c3 / (2.0 * ad)) ** (1.0 / 3.0)
    r2 = ((coeffs.c6_ee - coeffs.c6_rr) / (2.0 * ad)) ** (1.0 / 6.0)
    r3 = (sqrt(rad3) + c3 / (2.0 * ad)) ** (1.0 / 3.0)

    ec1 = 4.0 * drive.delta**2 * coeffs.c6_ee / (
        sqrt(c3**2 + 4.0 * ad * (coeffs.c6_ee - coeffs.c6_er)) - c3) ** 2
    ec2 = 2.0 * ad * coeffs.c6_ee / (coeffs.c6_ee - coeffs.c6_rr)
    ec3 = -2.0 * drive.delta + 4.0 * drive.delta**2 * coeffs.c6_rr / (
        sqrt(c3**2 + 4.0 * ad * (coeffs.c6_er - coeffs.c6_rr)) + c3) ** 2
    return CrossingPoints(r1=r1, r2=r2, r3=r3, ec1=ec1, ec2=ec2, ec3=ec3)


# ---------------------------------------------------------------------------
# dressed curves: 3x3 diagonalization in {|ee>, |er+>, |rr>}
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DressedCurves:
    """Sorted dressed eigenvalues over an R grid, plus the decoupled |er->."""

    r_grid: np.ndarray
    e_l: np.ndarray
    e_m: np.ndarray
    e_u: np.ndarray
    e_er_minus: np.ndarray
    eigenvectors: np.ndarray  # (n, 3, 3), columns are eigenvectors


def pair_hamiltonian(r: float, coeffs: InteractionCoefficients,
                     drive: MicrowaveDrive) -> np.ndarray:
    """3x3 Hamiltonian in {|ee>, |er+>, |rr>} with couplings -sqrt(2) Omega."""
    bare = bare_energies(r, coeffs, drive)
    c = -SQRT2 * drive.omega
    return np.array([
        [bare.e_ee, c, 0.0],
        [c, bare.e_er_plus, c],
        [0.0, c, bare.e_rr],
    ])


def dressed_curves(r_grid: np.ndarray, coeffs: InteractionCoefficients,
                   drive: MicrowaveDrive) -> DressedCurves:
    """Diagonalize the coupled 3x3 block on every grid point.

    Eigenvalues are sorted (E_l <= E_m <= E_u), which defines the adiabatic
    curves; labels may swap character across avoided crossings by
    construction.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.ndim != 1 or len(r_grid) == 0:
        raise ValueError("R grid must be a nonempty 1-D array")
    if np.any(r_grid <= 0):
        raise ValueError("all grid points must be positive")
    if np.any(np.diff(r_grid) <= 0):
        raise ValueError("R grid must be strictly increasing")

    r3 = r_grid**3
    r6 = r3 * r3
    n = len(r_grid)
    h = np.zeros((n, 3, 3))
    h[:, 0, 0] = coeffs.c6_ee / r6
    h[:, 1, 1] = -drive.delta + coeffs.c3_er / r3 + coeffs.c6_er / r6
    h[:, 2, 2] = -2.0 * drive.delta + coeffs.c6_rr / r6
    h[:, 0, 1] = h[:, 1, 0] = h[:, 1, 2] = h[:, 2, 1] = -SQRT2 * drive.omega

    vals, vecs = np.linalg.eigh(h)
    e_minus = -drive.delta - coeffs.c3_er / r3 + coeffs.c6_er / r6
    return DressedCurves(
        r_grid=r_grid,
        e_l=vals[:, 0],
        e_m=vals[:, 1],
        e_u=vals[:, 2],
        e_er_minus=e_minus,
        eigenvectors=vecs,
    )


def dressed_energy(r: float, curve: str, coeffs: InteractionCoefficients,
                   drive: MicrowaveDrive) -> float:
    """Single dressed eigenvalue at separation r, curve in {'l', 'm', 'u'}."""
    idx = {"l": 0, "m": 1, "u": 2}[curve]
    return float(np.linalg.eigvalsh(pair_hamiltonian(r, coeffs, drive))[idx])


# ---------------------------------------------------------------------------
# wells: the |er-> stationary point and numeric minima of E_m / E_u
# ---------------------------------------------------------------------------

def antisymmetric_well(coeffs: InteractionCoefficients) -> tuple[float, float]:
    """Stationary point of the decoupled branch, R- = (2 C6er / C3er)^(1/3).

    Returns (R-, E(R-) + Delta), i.e. the R-dependent part only; callers add
    -Delta for the rotating-frame offset.  Requires a repulsive c6_er and an
    attractive -C3er/R^3 tail, i.e. both coefficients positive.
    """
    if coeffs.c3_er <= 0:
        raise NoWellError("no well: the exchange interaction must be attractive on |er->")
    if coeffs.c6_er <= 0:
        raise NoWellError("no well: c6_er must be repulsive")
    r_minus = (2.0 * coeffs.c6_er / coeffs.c3_er) ** (1.0 / 3.0)
    e_min = -coeffs.c3_er / r_minus**3 + coeffs.c6_er / r_minus**6
    return r_minus, e_min


GOLDEN = (sqrt(5.0) - 1.0) / 2.0


def golden_minimize(f, lo: float, hi: float, tol: float = 1e-5,
                    max_iter: int = 200) -> tuple[float, float]:
    """Golden-section minimum of a unimodal scalar function on [lo, hi]."""
    a, b = float(lo), float(hi)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    it = 0
    while b - a > tol and it < max_iter:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + GOLDEN * (b - a)
            fd = f(d)
        it += 1
    x = 0.5 * (a + b)
    return x, f(x)


def find_well_minimum(curve: str, coeffs: InteractionCoefficients,
                      drive: MicrowaveDrive, bracket: tuple[float, float],
                      tol: float = 1e-5) -> tuple[float, float]:
    """Numeric minimum of a dressed curve inside a bracket.

    The caller seeds the bracket from :func:`crossing_points` so that it
    contains exactly one local minimum; a minimizer landing on a bracket
    edge raises :class:`NoWellError`.
    """
    if curve not in ("m", "u"):
        raise ValueError("curve selector must be 'm' or 'u'")
    lo, hi = bracket
    if not (0 < lo < hi):
        raise ValueError("bracket must satisfy 0 < lo < hi")
    r_min, e_min = golden_minimize(
        lambda r: dressed_energy(r, curve, coeffs, drive), lo, hi, tol=tol)
    edge = 2.0 * tol
    if r_min - lo < edge or hi - r_min < edge:
        raise NoWellError(f"no interior minimum of E_{curve} in [{lo}, {hi}]")
    return r_min, e_min


def default_brackets(coeffs: InteractionCoefficients,
                     drive: MicrowaveDrive) -> dict[str, tuple[float, float]]:
    """Well-search brackets seeded from the crossing radii."""
    cp = crossing_points(coeffs, drive)
    return {
        "m": (cp.r1, cp.r3),
        "u": (cp.r2, cp.r3 + 0.25 * (cp.r3 - cp.r1)),
    }
