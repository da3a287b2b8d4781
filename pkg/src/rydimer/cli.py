"""Command-line front end.

Every subcommand reads the JSON parameter file (bundled defaults unless
--config is given), writes CSV/JSON artifacts with fixed formatting
(9 significant digits, '.' decimal separator, '\\n' line endings) and
drops a manifest JSON next to each output recording the fully resolved
parameters, so identical config and flags reproduce outputs byte for
byte.

Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import replace
from pathlib import Path

import click
import numpy as np

from . import __version__
from .gate import GateConfig, build_ladder, calibrate, fidelity_sweep, simulate_cphase, vibrational_leakage
from .master_eq import IntegrationError, PulseEnvelope
from .params import (
    ConfigError,
    ParameterSet,
    default_parameters,
    from_2pi_khz,
    from_2pi_mhz,
    to_2pi_khz,
    to_2pi_mhz,
)
from .pair_potentials import bare_energies, crossing_points, dressed_curves
from .spectra import ScanConfig, resolve_threads, scan, spatial_average
from .vibrational import DimerVibration, franck_condon, trap_widths
from .wells import harmonic_parameters, numeric_curvature

EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def _fmt(value: float) -> str:
    return f"{value:.9g}"


def write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def write_manifest(out_path: Path, subcommand: str, params: ParameterSet,
                   settings: dict, started: float) -> None:
    manifest = {
        "subcommand": subcommand,
        "parameters": params.to_dict(),
        "settings": settings,
        "outputs": [out_path.name],
        "wall_clock_s": round(time.monotonic() - started, 3),
        "rydimer_version": __version__,
    }
    manifest_path = out_path.with_suffix(out_path.suffix + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def load_params(config_path: str | None, delta0: bool = False) -> ParameterSet:
    if config_path is None:
        params = default_parameters()
    else:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        params = ParameterSet.from_json(path.read_text())
    if delta0:
        params = replace(params, mw=replace(params.mw, delta=0.0))
    return params


def default_pulse(params: ParameterSet) -> PulseEnvelope:
    """Probe pulse of the excitation-spectra figures: 0.1 Omega peak, 80 ns flat."""
    return PulseEnvelope(peak=0.1 * params.mw.omega, flat_duration=80e-9, edge_sigma=10e-9)


@click.group()
@click.option("--config", "config_path", type=str, default=None,
              help="JSON parameter file (bundled defaults if omitted).")
@click.option("--out", "out_dir", type=str, default=".",
              help="Output directory for CSV/JSON artifacts.")
@click.option("--threads", type=int, default=None,
              help="Worker processes for grid scans (default: all cores, "
                   "or RYDIMER_THREADS). Affects wall time only, never values.")
@click.version_option(version=__version__)
@click.pass_context
def main(ctx, config_path, out_dir, threads):
    """Microwave-dressed Rydberg-pair simulator."""
    ctx.ensure_object(dict)
    ctx.obj["config_path"] = config_path
    ctx.obj["out_dir"] = Path(out_dir)
    ctx.obj["threads"] = threads


def _run(ctx, subcommand, settings, action):
    """Shared command wrapper: load params, run, write manifest, map errors."""
    started = time.monotonic()
    try:
        params = load_params(ctx.obj["config_path"], settings.get("delta0", False))
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    out_dir: Path = ctx.obj["out_dir"]
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        out_path = action(params, out_dir)
    except (ConfigError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except (IntegrationError, RuntimeError) as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    write_manifest(out_path, subcommand, params, settings, started)
    click.echo(f"wrote {out_path}")


@main.command()
@click.option("--r-min-um", type=float, default=2.0, show_default=True)
@click.option("--r-max-um", type=float, default=5.0, show_default=True)
@click.option("--points", type=int, default=601, show_default=True)
@click.option("--delta0", is_flag=True, help="Zero the microwave detuning.")
@click.pass_context
def potentials(ctx, r_min_um, r_max_um, points, delta0):
    """Dressed and bare potential curves over an R grid (CSV)."""
    def action(params: ParameterSet, out_dir: Path) -> Path:
        grid = np.linspace(r_min_um, r_max_um, points)
        curves = dressed_curves(grid, params.coeffs, params.mw)
        rows = []
        for i, r in enumerate(grid):
            bare = bare_energies(r, params.coeffs, params.mw)
            rows.append([r, to_2pi_mhz(curves.e_l[i]), to_2pi_mhz(curves.e_m[i]),
                         to_2pi_mhz(curves.e_u[i]), to_2pi_mhz(curves.e_er_minus[i]),
                         to_2pi_mhz(bare.e_ee), to_2pi_mhz(bare.e_er_plus),
                         to_2pi_mhz(bare.e_rr)])
        path = out_dir / "potentials.csv"
        write_csv(path, ["R_um", "E_l_2pi_MHz", "E_m_2pi_MHz", "E_u_2pi_MHz",
                         "E_erminus_2pi_MHz", "E_ee_2pi_MHz", "E_erplus_2pi_MHz",
                         "E_rr_2pi_MHz"], rows)
        return path

    _run(ctx, "potentials", {"r_min_um": r_min_um, "r_max_um": r_max_um,
                             "points": points, "delta0": delta0}, action)


@main.command()
@click.pass_context
def crossings(ctx):
    """Crossing radii and energies of the bare curves (JSON)."""
    def action(params: ParameterSet, out_dir: Path) -> Path:
        cp = crossing_points(params.coeffs, params.mw)
        path = out_dir / "crossings.json"
        path.write_text(json.dumps({
            "R1_um": cp.r1, "R2_um": cp.r2, "R3_um": cp.r3,
            "Ec1_2pi_MHz": to_2pi_mhz(cp.ec1),
            "Ec2_2pi_MHz": to_2pi_mhz(cp.ec2),
            "Ec3_2pi_MHz": to_2pi_mhz(cp.ec3),
        }, indent=2) + "\n")
        return path

    _run(ctx, "crossings", {}, action)


@main.command()
@click.pass_context
def wells(ctx):
    """Harmonic parameters of both binding wells (JSON report)."""
    def action(params: ParameterSet, out_dir: Path) -> Path:
        report = []
        for label in ("m", "u"):
            hw = harmonic_parameters(label, params.coeffs, params.mw, params.species)
            kappa_num = numeric_curvature(label, params.coeffs, params.mw, hw.r_center)
            report.append({
                "well": label,
                "R_center_um": hw.r_center,
                "kappa": to_2pi_mhz(hw.kappa),  # 2pi x MHz per um^2
                "nu_2pi_MHz": to_2pi_mhz(hw.nu),
                "sigma_nm": hw.sigma * 1e3,
                "analytic_vs_numeric_ratio": hw.kappa / kappa_num,
            })
        path = out_dir / "wells.json"
        path.write_text(json.dumps(report, indent=2) + "\n")
        return path

    _run(ctx, "wells", {}, action)


@main.command()
@click.option("--delta-p-min-mhz", type=float, default=-50.0, show_default=True)
@click.option("--delta-p-max-mhz", type=float, default=600.0, show_default=True)
@click.option("--delta-p-points", type=int, default=321, show_default=True)
@click.option("--r-min-um", type=float, default=2.0, show_default=True)
@click.option("--r-max-um", type=float, default=5.0, show_default=True)
@click.option("--r-points", type=int, default=121, show_default=True)
@click.option("--delta0", is_flag=True, help="Zero the microwave detuning.")
@click.pass_context
def spectrum(ctx, delta_p_min_mhz, delta_p_max_mhz, delta_p_points,
             r_min_um, r_max_um, r_points, delta0):
    """Excitation probabilities P1, P2 over the (Delta_p, R) grid (CSV)."""
    def action(params: ParameterSet, out_dir: Path) -> Path:
        config = ScanConfig(
            delta_p_grid=from_2pi_mhz(1.0) * np.linspace(delta_p_min_mhz, delta_p_max_mhz,
                                                         delta_p_points),
            r_grid=np.linspace(r_min_um, r_max_um, r_points),
            pulse=default_pulse(params),
            params=params,
        )
        result = scan(config, threads=ctx.obj["threads"])
        rows = [[to_2pi_mhz(dp), r, result.p1[i, j], result.p2[i, j]]
                for i, dp in enumerate(result.delta_p_grid)
                for j, r in enumerate(result.r_grid)]
        path = out_dir / "spectrum.csv"
        write_csv(path, ["delta_p_2pi_MHz", "R_um", "P1", "P2"], rows)
        return path

    _run(ctx, "spectrum", {"delta_p_mhz": [delta_p_min_mhz, delta_p_max_mhz, delta_p_points],
                           "r_um": [r_min_um, r_max_um, r_points], "delta0": delta0}, action)


@main.command()
@click.option("--dim", type=click.Choice(["1d", "2d"]), default="1d", show_default=True)
@click.option("--L-um", "l_um", type=float, default=5.0, show_default=True)
@click.option("--delta-p-min-mhz", type=float, default=-50.0, show_default=True)
@click.option("--delta-p-max-mhz", type=float, default=600.0, show_default=True)
@click.option("--delta-p-points", type=int, default=321, show_default=True)
@click.option("--r-min-um", type=float, default=2.0, show_default=True)
@click.option("--r-max-um", type=float, default=5.0, show_default=True)
@click.option("--r-points", type=int, default=121, show_default=True)
@click.pass_context
def average(ctx, dim, l_um, delta_p_min_mhz, delta_p_max_mhz, delta_p_points,
            r_min_um, r_max_um, r_points):
    """Spatially averaged excitation probabilities for a 1D/2D volume (CSV)."""
    def action(params: ParameterSet, out_dir: Path) -> Path:
        config = ScanConfig(
            delta_p_grid=from_2pi_mhz(1.0) * np.linspace(delta_p_min_mhz, delta_p_max_mhz,
                                                         delta_p_points),
            r_grid=np.linspace(r_min_um, min(r_max_um, l_um), r_points),
            pulse=default_pulse(params),
            params=params,
        )
        result = scan(config, threads=ctx.obj["threads"])
        rows = []
        for i, dp in enumerate(result.delta_p_grid):
            p1bar = spatial_average(result.r_grid, result.p1[i], l_um, dim)
            p2bar = spatial_average(result.r_grid, result.p2[i], l_um, dim)
            rows.append([to_2pi_mhz(dp), p1bar, p2bar])
        path = out_dir / "average.csv"
        write_csv(path, ["delta_p_2pi_MHz", "P1bar", "P2bar"], rows)
        return path

    _run(ctx, "average", {"dim": dim, "L_um": l_um,
                          "delta_p_mhz": [delta_p_min_mhz, delta_p_max_mhz, delta_p_points],
                          "r_um": [r_min_um, r_max_um, r_points]}, action)


@main.command("franck-condon")
@click.option("--n-max", type=int, default=10, show_default=True)
@click.option("--mismatch-nm", type=float, default=0.0, show_default=True)
@click.option("--trap-nu-2pi-khz", type=float, default=100.0, show_default=True)
@click.pass_context
def franck_condon_cmd(ctx, n_max, mismatch_nm, trap_nu_2pi_khz):
    """Franck-Condon factors f(n) for the E_m dimer well (CSV)."""
    def action(params: ParameterSet, out_dir: Path) -> Path:
        well = harmonic_parameters("m", params.coeffs, params.mw, params.species)
        trap = trap_widths(from_2pi_khz(trap_nu_2pi_khz), params.species,
                           r0=well.r_center + mismatch_nm * 1e-3)
        rows = []
        for n in range(n_max + 1):
            dimer = DimerVibration(n=n, r_m=well.r_center, big_sigma=well.sigma, nu=well.nu)
            rows.append([n, franck_condon(n, trap, dimer)])
        path = out_dir / "franck_condon.csv"
        write_csv(path, ["n", "f_n"], rows)
        return path

    _run(ctx, "franck-condon", {"n_max": n_max, "mismatch_nm": mismatch_nm,
                                "trap_nu_2pi_kHz": trap_nu_2pi_khz}, action)


@main.command()
@click.option("--gamma-2pi-kHz", "gamma_list", type=str, default="0,10,20,50,100",
              show_default=True, help="Comma-separated dephasing rates.")
@click.option("--trace", "trace_flag", is_flag=True,
              help="Emit P_gg(t), P_2Ry(t) trajectories instead of the sweep.")
@click.option("--leakage", "leakage_flag", is_flag=True,
              help="Emit residual vibrational-ladder populations.")
@click.option("--mismatch-nm", type=float, default=0.0, show_default=True,
              help="Trap-distance mismatch R0 - R_m for --leakage.")
@click.option("--delta-p-2pi-mhz", type=float, default=None,
              help="Probe detuning override (default: numeric resonance).")
@click.option("--tau-flat-us", type=float, default=None,
              help="Flat-top duration override (default: 2pi-cycle calibration).")
@click.pass_context
def gate(ctx, gamma_list, trace_flag, leakage_flag, mismatch_nm, delta_p_2pi_mhz,
         tau_flat_us):
    """CPHASE gate: fidelity sweep, trajectories, or vibrational leakage."""
    def action(params: ParameterSet, out_dir: Path) -> Path:
        try:
            gammas = [float(x) for x in gamma_list.split(",") if x.strip() != ""]
        except ValueError as exc:
            raise ConfigError(f"bad --gamma-2pi-kHz list: {exc}") from exc
        if not gammas:
            raise ConfigError("--gamma-2pi-kHz list is empty")
        delta_p = None if delta_p_2pi_mhz is None else from_2pi_mhz(delta_p_2pi_mhz)
        tau_flat = None if tau_flat_us is None else tau_flat_us * 1e-6
        config = GateConfig(params=params, delta_p=delta_p, tau_flat=tau_flat)

        if leakage_flag:
            cal = calibrate(config)
            ladder, pulse = build_ladder(
                params, gamma=from_2pi_khz(gammas[0]), mismatch=mismatch_nm * 1e-3,
                omega_p2=cal.omega_p2, tau_flat=cal.tau_flat, edge_sigma=cal.edge_sigma)
            pops = vibrational_leakage(ladder, pulse)
            path = out_dir / "gate_leakage.csv"
            write_csv(path, ["n", "population"],
                      [[n, pops[n]] for n in range(1, ladder.n_max + 1)])
            return path

        if trace_flag:
            rates = replace(params.rates, gamma_g=from_2pi_khz(gammas[0]))
            result = simulate_cphase(replace(config, params=replace(params, rates=rates)))
            path = out_dir / "gate_trace.csv"
            write_csv(path, ["t_us", "P_gg", "P_2Ry"],
                      [[t * 1e6, pg, p2] for t, pg, p2 in
                       zip(result.times, result.p_gg, result.p_2ry)])
            return path

        table = fidelity_sweep(config, [from_2pi_khz(g) for g in gammas],
                               threads=ctx.obj["threads"])
        path = out_dir / "gate_fidelity.csv"
        write_csv(path, ["gamma_2pi_kHz", "fidelity"],
                  [[to_2pi_khz(g), fid] for g, fid in table])
        return path

    _run(ctx, "gate", {"gamma_2pi_kHz": gamma_list, "trace": trace_flag,
                       "leakage": leakage_flag, "mismatch_nm": mismatch_nm,
                       "delta_p_2pi_MHz": delta_p_2pi_mhz,
                       "tau_flat_us": tau_flat_us}, action)


if __name__ == "__main__":
    main()
