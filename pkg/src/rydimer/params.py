"""Physical constants, atomic species data and interaction coefficients.

Unit conventions used throughout the package:

* frequencies and rates are stored as plain angular frequencies (rad/s);
  every "2pi x MHz"-style bookkeeping happens at I/O boundaries only
* lengths are micrometers, so C6 coefficients carry rad/s * um^6 and C3
  coefficients rad/s * um^3
* times are seconds
* energies are hbar-scaled, i.e. expressed as angular frequencies

Population decay rates (gamma_e, gamma_r) are plain rates in 1/s; the
laser-dephasing rate gamma_g is an angular frequency like everything else.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources
from math import pi, sin

TWO_PI = 2.0 * pi

HBAR = 1.054571817e-34  # J s
#: Rydberg frequency constant c*R_inf for infinite nuclear mass, in Hz.
RYDBERG_FREQUENCY = 3.2898419603e15
#: Mass of 87Rb in kg.
M_RB87 = 1.44316060e-25


# ---------------------------------------------------------------------------
# unit conversions (exact scale factors, so round trips are bit-tight)
# ---------------------------------------------------------------------------

def from_2pi_mhz(value: float) -> float:
    """Angular frequency (rad/s) from a value quoted as 2pi x MHz."""
    return value * (TWO_PI * 1e6)


def to_2pi_mhz(omega: float) -> float:
    """Value in 2pi x MHz from an angular frequency in rad/s."""
    return omega / (TWO_PI * 1e6)


def from_2pi_ghz(value: float) -> float:
    return value * (TWO_PI * 1e9)


def to_2pi_ghz(omega: float) -> float:
    return omega / (TWO_PI * 1e9)


def from_2pi_khz(value: float) -> float:
    return value * (TWO_PI * 1e3)


def to_2pi_khz(omega: float) -> float:
    return omega / (TWO_PI * 1e3)


def from_khz(value: float) -> float:
    """Plain rate in 1/s from kHz (used for population decay rates)."""
    return value * 1e3


def to_khz(rate: float) -> float:
    return rate / 1e3


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AtomSpecies:
    """Alkali atom with a pair of Rydberg levels nS1/2 and nP3/2.

    omega_rr_prime is the differential Stark (or Zeeman) shift, as an
    angular frequency, that detunes the unwanted P3/2 sublevels and turns
    the nonresonant dipole-dipole coupling into the effective van der
    Waals term between |e> and |r>.
    """

    mass_kg: float
    n: int
    delta_s: float
    delta_p: float
    omega_rr_prime: float

    def __post_init__(self) -> None:
        if self.mass_kg <= 0:
            raise ValueError("atomic mass must be positive")
        if not (self.n > self.delta_s and self.n > self.delta_p):
            raise ValueError("principal quantum number must exceed both quantum defects")


@dataclass(frozen=True)
class InteractionCoefficients:
    """Pair-interaction coefficients at geometry angle theta.

    c6_ee > 0 (repulsive) and c6_rr < 0 (attractive) for the reference
    geometry theta = pi/2 used in the figures; c3_er is the resonant
    exchange coefficient and c6_er the effective vdW coefficient between
    |e> and |r|.  Angular scaling is multiplicative, see
    :func:`scale_coefficients`.
    """

    c6_ee: float  # rad/s * um^6
    c6_rr: float  # rad/s * um^6
    c6_er: float  # rad/s * um^6
    c3_er: float  # rad/s * um^3
    theta: float = pi / 2  # rad


@dataclass(frozen=True)
class MicrowaveDrive:
    """Microwave field driving |e> <-> |r>: Rabi frequency and detuning."""

    omega: float  # rad/s, >= 0
    delta: float  # rad/s, sign-carrying

    def __post_init__(self) -> None:
        if self.omega < 0:
            raise ValueError("Rabi frequency must be >= 0 (phase absorbed by convention)")


@dataclass(frozen=True)
class RelaxationRates:
    """Population decay of |e>, |r> and dephasing of the optical coherences.

    The total coherence decay rate of sigma_eg is gamma_g + gamma_e/2 and
    of sigma_rg is gamma_g + gamma_r/2.
    """

    gamma_e: float  # 1/s
    gamma_r: float  # 1/s
    gamma_g: float  # rad/s

    def __post_init__(self) -> None:
        if min(self.gamma_e, self.gamma_r, self.gamma_g) < 0:
            raise ValueError("relaxation rates must be >= 0")

    @property
    def coherence_rate_eg(self) -> float:
        return self.gamma_g + 0.5 * self.gamma_e

    @property
    def coherence_rate_rg(self) -> float:
        return self.gamma_g + 0.5 * self.gamma_r


@dataclass(frozen=True)
class ParameterSet:
    """Bundle of everything a simulation needs."""

    species: AtomSpecies
    coeffs: InteractionCoefficients
    mw: MicrowaveDrive
    rates: RelaxationRates

    # -- JSON schema (exact key names are part of the external interface) --

    def to_dict(self) -> dict:
        return {
            "atom": {
                "mass_kg": self.species.mass_kg,
                "n": self.species.n,
                "delta_s": self.species.delta_s,
                "delta_p": self.species.delta_p,
                "omega_rr_prime_2pi_MHz": to_2pi_mhz(self.species.omega_rr_prime),
            },
            "coeffs": {
                "c6_ee_2pi_GHz_um6": to_2pi_ghz(self.coeffs.c6_ee),
                "c6_rr_2pi_GHz_um6": to_2pi_ghz(self.coeffs.c6_rr),
                "c6_er_2pi_GHz_um6": to_2pi_ghz(self.coeffs.c6_er),
                "c3_er_2pi_GHz_um3": to_2pi_ghz(self.coeffs.c3_er),
                "theta_rad": self.coeffs.theta,
            },
            "microwave": {
                "omega_2pi_MHz": to_2pi_mhz(self.mw.omega),
                "delta_2pi_MHz": to_2pi_mhz(self.mw.delta),
            },
            "rates": {
                "gamma_e_kHz": to_khz(self.rates.gamma_e),
                "gamma_r_kHz": to_khz(self.rates.gamma_r),
                "gamma_g_2pi_kHz": to_2pi_khz(self.rates.gamma_g),
            },
        }

    @staticmethod
    def from_dict(data: dict) -> "ParameterSet":
        required = {"atom", "coeffs", "microwave", "rates"}
        unknown = set(data) - required
        if unknown:
            raise ConfigError(f"unknown top-level keys: {sorted(unknown)}")
        missing = required - set(data)
        if missing:
            raise ConfigError(f"missing sections: {sorted(missing)}")

        def section(name: str, keys: tuple[str, ...]) -> dict:
            sec = data[name]
            unknown = set(sec) - set(keys)
            if unknown:
                raise ConfigError(f"unknown keys in '{name}': {sorted(unknown)}")
            missing = set(keys) - set(sec)
            if missing:
                raise ConfigError(f"missing keys in '{name}': {sorted(missing)}")
            return sec

        atom = section("atom", ("mass_kg", "n", "delta_s", "delta_p", "omega_rr_prime_2pi_MHz"))
        co = section("coeffs", ("c6_ee_2pi_GHz_um6", "c6_rr_2pi_GHz_um6",
                                "c6_er_2pi_GHz_um6", "c3_er_2pi_GHz_um3", "theta_rad"))
        mw = section("microwave", ("omega_2pi_MHz", "delta_2pi_MHz"))
        ra = section("rates", ("gamma_e_kHz", "gamma_r_kHz", "gamma_g_2pi_kHz"))
        try:
            return ParameterSet(
                species=AtomSpecies(
                    mass_kg=float(atom["mass_kg"]),
                    n=int(atom["n"]),
                    delta_s=float(atom["delta_s"]),
                    delta_p=float(atom["delta_p"]),
                    omega_rr_prime=from_2pi_mhz(float(atom["omega_rr_prime_2pi_MHz"])),
                ),
                coeffs=InteractionCoefficients(
                    c6_ee=from_2pi_ghz(float(co["c6_ee_2pi_GHz_um6"])),
                    c6_rr=from_2pi_ghz(float(co["c6_rr_2pi_GHz_um6"])),
                    c6_er=from_2pi_ghz(float(co["c6_er_2pi_GHz_um6"])),
                    c3_er=from_2pi_ghz(float(co["c3_er_2pi_GHz_um3"])),
                    theta=float(co["theta_rad"]),
                ),
                mw=MicrowaveDrive(
                    omega=from_2pi_mhz(float(mw["omega_2pi_MHz"])),
                    delta=from_2pi_mhz(float(mw["delta_2pi_MHz"])),
                ),
                rates=RelaxationRates(
                    gamma_e=from_khz(float(ra["gamma_e_kHz"])),
                    gamma_r=from_khz(float(ra["gamma_r_kHz"])),
                    gamma_g=from_2pi_khz(float(ra["gamma_g_2pi_kHz"])),
                ),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @staticmethod
    def from_json(text: str) -> "ParameterSet":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("parameter file must contain a JSON object")
        return ParameterSet.from_dict(data)


class ConfigError(ValueError):
    """Parameter file is missing, malformed or physically invalid."""


def default_parameters() -> ParameterSet:
    """The bundled default parameter set (Rb, n = 60, theta = pi/2)."""
    text = resources.files("rydimer.data").joinpath("paper_defaults.json").read_text()
    return ParameterSet.from_json(text)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def effective_principal(n: int, delta: float) -> float:
    """Effective principal quantum number n* = n - delta."""
    if n <= delta:
        raise ValueError(f"n = {n} must exceed the quantum defect {delta}")
    return n - delta


def transition_frequency(species: AtomSpecies) -> float:
    """Angular frequency of the |e> = nS1/2 -> |r> = nP3/2 transition.

    Uses the infinite-mass Rydberg constant; the ~0.02% reduced-mass
    correction is far below the precision needed here.
    """
    n_s = effective_principal(species.n, species.delta_s)
    n_p = effective_principal(species.n, species.delta_p)
    return TWO_PI * RYDBERG_FREQUENCY * (1.0 / n_s**2 - 1.0 / n_p**2)


def scale_coefficients(reference: InteractionCoefficients, theta: float) -> InteractionCoefficients:
    """Apply the angular dependence to reference (theta = pi/2) coefficients.

    c3_er scales as (3 sin^2(theta) - 2) and c6_rr as sin^2(theta), while
    c6_ee is isotropic.  c6_er is kept theta-independent: it is built from
    two cross-channel C3 couplings with different angular factors, and no
    single multiplicative law applies, so the reference value is retained.
    """
    if abs(reference.theta - pi / 2) > 1e-12:
        raise ValueError("reference coefficients must be tagged theta = pi/2")
    s2 = sin(theta) ** 2
    return replace(
        reference,
        c3_er=reference.c3_er * (3.0 * s2 - 2.0),
        c6_rr=reference.c6_rr * s2,
        theta=theta,
    )


def angular_factors(theta: float) -> tuple[float, float]:
    """Multiplicative factors (for c3_er, c6_rr) relative to theta = pi/2."""
    s2 = sin(theta) ** 2
    return 3.0 * s2 - 2.0, s2


def effective_c6_er(cross_c3: list[float], omega_rr_prime: float) -> tuple[float, float]:
    """Effective vdW coefficient from nonresonant dipole-dipole channels.

    C6_er = sum_r' |C3^{re,er'}|^2 / omega_rr' together with the largest
    radius below which the underlying second-order elimination stops being
    valid, R_validity = max_r' (|C3^{re,er'}| / omega_rr')^(1/3).

    Parameters
    ----------
    cross_c3 : list of cross-channel C3 coefficients, rad/s * um^3
    omega_rr_prime : differential Stark shift, rad/s (nonzero)

    Returns
    -------
    (c6_er, validity_radius) : rad/s * um^6 and um
    """
    if omega_rr_prime == 0:
        raise ValueError("omega_rr_prime = 0: degenerate Zeeman/Stark manifold")
    c6 = sum(abs(c3) ** 2 for c3 in cross_c3) / omega_rr_prime
    radius = max((abs(c3) / abs(omega_rr_prime)) ** (1.0 / 3.0) for c3 in cross_c3) if cross_c3 else 0.0
    return c6, radius


def reduced_dipole_matrix_element(n_star: float) -> float:
    """Semiclassical (nS1/2||p||nP3/2) ~ -(3/2) n*^2 in atomic units (e*a0).

    Documented helper for deriving cross-channel C3 values; the bundled
    coefficients themselves are configurable inputs taken from the
    literature, not recomputed from this estimate.
    """
    return -1.5 * n_star**2
