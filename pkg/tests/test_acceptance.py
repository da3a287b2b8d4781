"""Acceptance suite: one test per criterion, one printed line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s`` to see every line.  Each
check carries its measured value, so a failing criterion documents itself.
"""

from dataclasses import replace
from math import pi, sqrt

import numpy as np
import pytest

from rydimer import KERNEL_BACKEND
from rydimer import gate as gt
from rydimer import master_eq as me
from rydimer import pair_potentials as pp
from rydimer import spectra as sp
from rydimer import vibrational as vib
from rydimer import wells as wl
from rydimer.params import (
    RelaxationRates,
    from_2pi_khz,
    from_2pi_mhz,
    to_2pi_khz,
    to_2pi_mhz,
)


def report(num: int, checks: list[tuple[str, bool, str]]) -> None:
    failed = [(label, detail) for label, ok, detail in checks if not ok]
    status = "PASS" if not failed else "FAIL"
    print(f"\nACCEPTANCE {num:2d}: {status}  "
          + "; ".join(f"{label} {detail}" for label, _, detail in checks))
    assert not failed, f"criterion {num}: " + "; ".join(
        f"{label} {detail}" for label, detail in failed)


def test_criterion_01_crossing_points(defaults):
    cp = pp.crossing_points(defaults.coeffs, defaults.mw)
    scale = abs(defaults.mw.delta)
    checks = []
    for label, got, want in (("R1", cp.r1, 2.36), ("R2", cp.r2, 2.75),
                             ("R3", cp.r3, 3.05)):
        checks.append((label, abs(got - want) <= 0.01, f"{got:.4f} um (ref {want})"))
    for label, r_cross, pair in (
            ("E_ee=E_er+ @R1", cp.r1, ("e_ee", "e_er_plus")),
            ("E_ee=E_rr @R2", cp.r2, ("e_ee", "e_rr")),
            ("E_rr=E_er+ @R3", cp.r3, ("e_rr", "e_er_plus"))):
        bare = pp.bare_energies(r_cross, defaults.coeffs, defaults.mw)
        gap = abs(getattr(bare, pair[0]) - getattr(bare, pair[1]))
        checks.append((label, gap < 1e-9 * scale, f"rel {gap / scale:.1e}"))
    report(1, checks)


def test_criterion_02_two_photon_rabi(defaults):
    omega2 = wl.two_photon_rabi(defaults.coeffs, defaults.mw)
    ok = abs(omega2 - from_2pi_mhz(55.0)) <= from_2pi_mhz(2.0)
    report(2, [("|Omega2|", ok, f"2pi x {to_2pi_mhz(omega2):.2f} MHz (ref 55 +- 2)")])


def test_criterion_03_wells(defaults):
    hw_m = wl.harmonic_parameters("m", defaults.coeffs, defaults.mw, defaults.species)
    hw_u = wl.harmonic_parameters("u", defaults.coeffs, defaults.mw, defaults.species)
    trap = vib.trap_widths(from_2pi_khz(100.0), defaults.species)
    checks = [
        ("nu_m", abs(hw_m.nu / from_2pi_mhz(2.0) - 1.0) <= 0.10,
         f"2pi x {to_2pi_mhz(hw_m.nu):.3f} MHz (ref 2.0 +- 10%)"),
        ("nu_u", abs(hw_u.nu / from_2pi_khz(450.0) - 1.0) <= 0.10,
         f"2pi x {to_2pi_khz(hw_u.nu):.0f} kHz (ref 450 +- 10%)"),
        ("R_m", abs(hw_m.r_center - 2.74) <= 0.02, f"{hw_m.r_center:.4f} um"),
        ("R_u", abs(hw_u.r_center - 2.85) <= 0.03, f"{hw_u.r_center:.4f} um"),
        ("Sigma", abs(trap.big_sigma * 1e3 - 48.0) <= 1.0,
         f"{trap.big_sigma * 1e3:.2f} nm (ref 48 +- 1)"),
        ("Sigma_m", abs(hw_m.sigma * 1e3 - 10.7) <= 0.3,
         f"{hw_m.sigma * 1e3:.2f} nm (ref 10.7 +- 0.3)"),
    ]
    report(3, checks)


def test_criterion_04_franck_condon(defaults):
    hw = wl.harmonic_parameters("m", defaults.coeffs, defaults.mw, defaults.species)
    trap0 = vib.trap_widths(from_2pi_khz(100.0), defaults.species, r0=hw.r_center)

    def f(n, trap):
        dimer = vib.DimerVibration(n=n, r_m=hw.r_center, big_sigma=hw.sigma, nu=hw.nu)
        return vib.franck_condon(n, trap, dimer)

    checks = [("f(0)", abs(f(0, trap0) - 0.65) <= 0.01, f"{f(0, trap0):.4f} (ref 0.65)")]
    for n, want in ((2, 0.417), (4, 0.327), (6, 0.27), (8, 0.229), (10, 0.197)):
        got = f(n, trap0)
        checks.append((f"f({n})", abs(got - want) <= 0.005, f"{got:.4f} (ref {want})"))
    odd_max = max(abs(f(n, trap0)) for n in (1, 3, 5))
    checks.append(("f(odd)@0", odd_max <= 1e-8, f"max {odd_max:.1e}"))
    trap1 = vib.trap_widths(from_2pi_khz(100.0), defaults.species,
                            r0=hw.r_center + 1e-3)
    f1 = f(1, trap1)
    checks.append(("f(1)@1nm", abs(f1 - 0.045) <= 0.005,
                   f"{f1:.4f} (required 0.045 +- 0.005; the defining overlap "
                   "integral gives 4.1e-3 -- see README)"))
    report(4, checks)


def test_criterion_05_dressed_curve_structure(defaults):
    omega = defaults.mw.omega
    cp = pp.crossing_points(defaults.coeffs, defaults.mw)
    checks = []

    def min_gap(curve_hi, curve_lo, center, half_width=0.15):
        grid = np.linspace(center - half_width, center + half_width, 6001)
        curves = pp.dressed_curves(grid, defaults.coeffs, defaults.mw)
        return float(np.min(getattr(curves, curve_hi) - getattr(curves, curve_lo)))

    for label, center in (("gap@R1", cp.r1), ("gap@R3", cp.r3)):
        gap = min_gap("e_u", "e_m", center)
        want = 2.0 * sqrt(2.0) * omega
        checks.append((label, abs(gap / want - 1.0) <= 0.10,
                       f"2pi x {to_2pi_mhz(gap):.1f} MHz = {gap / want:.3f} x 2sqrt2 Omega"))

    gap2 = min_gap("e_m", "e_l", cp.r2)
    omega2 = wl.two_photon_rabi(defaults.coeffs, defaults.mw)
    checks.append(("gap@R2", abs(gap2 / (2.0 * omega2) - 1.0) <= 0.15,
                   f"2pi x {to_2pi_mhz(gap2):.1f} MHz = {gap2 / (2 * omega2):.3f} x "
                   "2 Omega2 (required +-15%; the full 3x3 leaves E_m pinned at "
                   "Ec2 -- see README)"))

    curves = pp.dressed_curves(np.array([1e5]), defaults.coeffs,
                               replace(defaults.mw, delta=0.0))
    reson = max(abs(curves.e_l[0] + 2 * omega), abs(curves.e_m[0]),
                abs(curves.e_u[0] - 2 * omega))
    checks.append(("Delta=0 large-R", reson <= 1e-6 * omega,
                   f"max dev {reson / omega:.1e} x Omega"))

    grid = np.linspace(2.0, 5.0, 601)
    curves = pp.dressed_curves(grid, defaults.coeffs, defaults.mw)
    worst = 0.0
    for i, r in enumerate(grid):
        bare = pp.bare_energies(r, defaults.coeffs, defaults.mw)
        lhs = curves.e_l[i] + curves.e_m[i] + curves.e_u[i]
        rhs = bare.e_ee + bare.e_er_plus + bare.e_rr
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    checks.append(("trace identity", worst <= 1e-10, f"rel {worst:.1e}"))
    report(5, checks)


def line_centroid(delta_p, p1, center, half_width):
    mask = np.abs(delta_p - center) <= half_width
    weights = p1[mask]
    return float(np.sum(delta_p[mask] * weights) / np.sum(weights))


def test_criterion_06_spectrum(defaults, figure_pulse, acceptance_scan,
                               autler_townes_column):
    grid_step = acceptance_scan.delta_p_grid[1] - acceptance_scan.delta_p_grid[0]
    lam_minus, lam_plus = sp.autler_townes(defaults.mw)
    checks = []

    # single-atom lines at R = 10 um: the 80 ns pulse drives ~2 Rabi cycles,
    # so each line carries symmetric Rabi fringes; the line center is the
    # local P1 centroid over a +-25 MHz window
    column = autler_townes_column.p1[:, 0]
    for label, lam in (("lambda-", lam_minus), ("lambda+", lam_plus)):
        center = line_centroid(autler_townes_column.delta_p_grid, column, lam,
                               from_2pi_mhz(25.0))
        checks.append((label, abs(center - lam) <= grid_step,
                       f"centroid 2pi x {to_2pi_mhz(center):.2f} MHz "
                       f"(ref {to_2pi_mhz(lam):.2f}, step {to_2pi_mhz(grid_step):.2f})"))

    r_m, e_m = pp.find_well_minimum(
        "m", defaults.coeffs, defaults.mw,
        pp.default_brackets(defaults.coeffs, defaults.mw)["m"])
    band = (0.5 * e_m - from_2pi_mhz(6.0), 0.5 * e_m + from_2pi_mhz(6.0))
    dp_star = sp.find_two_photon_resonance(r_m, defaults, figure_pulse, band)
    checks.append(("P2 peak vs E_m/2", abs(dp_star - 0.5 * e_m) <= from_2pi_mhz(5.0),
                   f"2pi x {to_2pi_mhz(dp_star):.2f} MHz vs E_m/2hbar = "
                   f"{to_2pi_mhz(0.5 * e_m):.2f}"))
    checks.append(("P2 peak vs 159.3", abs(dp_star - from_2pi_mhz(159.3)) <= from_2pi_mhz(10.0),
                   f"offset 2pi x {to_2pi_mhz(dp_star - from_2pi_mhz(159.3)):+.2f} MHz"))

    p1_mid, _ = sp.final_probabilities(from_2pi_mhz(250.0), 10.0, defaults, figure_pulse)
    checks.append(("EIT mid-band P1", p1_mid <= 0.05, f"{p1_mid:.4f} @ 2pi x 250 MHz"))

    # edge-shape sensitivity report (design note): 5 ns vs 10 ns edges
    short_edge = me.PulseEnvelope(peak=figure_pulse.peak,
                                  flat_duration=figure_pulse.flat_duration,
                                  edge_sigma=5e-9)
    dp_short = sp.find_two_photon_resonance(r_m, defaults, short_edge, band)
    shift = abs(dp_short - dp_star) / dp_star
    _, p2_long = sp.final_probabilities(dp_star, r_m, defaults, figure_pulse)
    _, p2_short = sp.final_probabilities(dp_short, r_m, defaults, short_edge)
    checks.append(("edge 5ns sensitivity", shift <= 0.02,
                   f"resonance shift {100 * shift:.3f}%; peak P2 "
                   f"{p2_long:.3f} -> {p2_short:.3f} (pulse-area effect)"))
    report(6, checks)


def test_criterion_07_spatial_averaging(defaults, acceptance_scan):
    checks = []
    length = 5.0
    grid = np.linspace(0.0, length, 400001)
    for label, density in (("rho_1D", sp.pair_distance_density_1d),
                           ("rho_2D", sp.pair_distance_density_2d)):
        norm = float(np.trapezoid(density(grid, length), grid))
        checks.append((f"{label} norm", abs(norm - 1.0) <= 1e-6, f"{norm:.8f}"))

    # suppressed band between max E_l / 2 and min E_m / 2
    fine = np.linspace(2.0, 5.0, 12001)
    curves = pp.dressed_curves(fine, defaults.coeffs, defaults.mw)
    band_lo = 0.5 * float(np.max(curves.e_l))
    band_hi = 0.5 * float(np.min(curves.e_m))
    omega2 = wl.two_photon_rabi(defaults.coeffs, defaults.mw)
    dp = acceptance_scan.delta_p_grid
    p2_avg = np.array([sp.spatial_average(acceptance_scan.r_grid,
                                          acceptance_scan.p2[i], length, "1d")
                       for i in range(len(dp))])
    in_band = (dp > band_lo) & (dp < band_hi)
    left = (dp >= band_lo - from_2pi_mhz(60.0)) & (dp <= band_lo)
    right = (dp >= band_hi) & (dp <= band_hi + from_2pi_mhz(60.0))
    band_mean = float(np.mean(p2_avg[in_band]))
    peak_left = float(np.max(p2_avg[left]))
    peak_right = float(np.max(p2_avg[right]))
    # the band spans max E_l / 2hbar < Delta_p < min E_m / 2hbar, i.e. an
    # energy width of (min E_m - max E_l); ~ 2 Omega2 ~ 2pi x 0.1 GHz
    energy_width = 2.0 * (band_hi - band_lo)
    checks.append(("band energy width ~ 2 Omega2",
                   abs(energy_width / (2.0 * omega2) - 1.0) <= 0.5,
                   f"2pi x {to_2pi_mhz(energy_width):.1f} MHz vs "
                   f"2 Omega2 = {to_2pi_mhz(2 * omega2):.1f}"))
    checks.append(("suppressed band", 5.0 * band_mean <= min(peak_left, peak_right),
                   f"mean P2bar {band_mean:.2e} vs peaks "
                   f"{peak_left:.3f} / {peak_right:.3f}"))
    report(7, checks)


def test_criterion_08_master_equation_invariants(defaults):
    checks = []
    # trajectory invariants, 3-level pair at the dimer resonance
    h0 = me.static_hamiltonian(me.THREE_LEVEL, 2.7345, defaults.coeffs, defaults.mw,
                               from_2pi_mhz(159.3))
    env = me.PulseEnvelope(peak=0.1 * defaults.mw.omega, flat_duration=80e-9,
                           edge_sigma=10e-9)
    model = me.LindbladModel(h_static=h0,
                             jumps=me.build_jump_operators(me.THREE_LEVEL,
                                                           defaults.rates),
                             h_drive=me.probe_pattern(me.THREE_LEVEL), pulse=env)
    times = np.linspace(env.t_start, env.t_end, 29)
    traj = me.evolve(me.basis_state(me.THREE_LEVEL, "gg"), model,
                     (env.t_start, env.t_end), sample_times=times)
    trace_drift = max(abs(np.trace(s).real - 1.0) for s in traj.states)
    herm = max(float(np.max(np.abs(s - s.conj().T))) for s in traj.states)
    min_eig = float(np.linalg.eigvalsh(traj.final)[0])
    checks.append(("trace drift", trace_drift <= 1e-8, f"{trace_drift:.1e}"))
    checks.append(("hermiticity", herm <= 1e-9, f"{herm:.1e}"))
    checks.append(("min eigenvalue", min_eig >= -1e-7, f"{min_eig:.1e}"))

    # RK4 order: halving dt cuts the error (vs dt/8 reference) by >= 12x
    h = np.array([[0.0, -1.0, 0.0], [-1.0, 0.5, -0.7], [0.0, -0.7, 1.0]],
                 dtype=complex) * 2e8
    jump = np.zeros((3, 3), dtype=complex)
    jump[0, 2] = 2e4
    smooth = me.LindbladModel(h_static=h, jumps=[jump])
    rho0 = np.zeros((3, 3), dtype=complex)
    rho0[1, 1] = 1.0

    def final_state(n):
        return me.evolve(rho0, smooth, (0.0, 4e-8),
                         me.EvolveConfig(dt_max=4e-8 / n)).final

    reference = final_state(3200)
    ratio = (np.max(np.abs(final_state(400) - reference))
             / np.max(np.abs(final_state(800) - reference)))
    checks.append(("RK4 order", ratio >= 12.0, f"error ratio {ratio:.1f}x"))

    # superoperator oracle vs direct evaluation on random inputs
    rng = np.random.default_rng(21)
    worst = 0.0
    for _ in range(20):
        dim = int(rng.integers(2, 6))
        a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = a @ a.conj().T
        rho /= np.trace(rho)
        hh = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        hh = hh + hh.conj().T
        jumps = [rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
                 for _ in range(2)]
        direct = me.lindblad_rhs(rho, hh, jumps)
        via = (me.liouvillian_matrix(hh, jumps) @ rho.reshape(-1)).reshape(dim, dim)
        worst = max(worst, float(np.max(np.abs(direct - via))
                                 / max(np.max(np.abs(direct)), 1.0)))
    checks.append(("superoperator", worst <= 1e-12, f"rel {worst:.1e}"))

    # antisymmetric |er-> decoupling from the fields: no dissipation at all
    # (Gamma_e decay of |ee> feeds |er-> at the 1e-8 level, see ledger)
    idx = me.THREE_LEVEL.pair_index
    er_minus = np.zeros(9, dtype=complex)
    er_minus[idx("e", "r")] = 1.0 / sqrt(2.0)
    er_minus[idx("r", "e")] = -1.0 / sqrt(2.0)
    proj = np.outer(er_minus, er_minus.conj())
    coherent = me.LindbladModel(h_static=h0, jumps=[],
                                h_drive=me.probe_pattern(me.THREE_LEVEL), pulse=env)
    traj_coh = me.evolve(me.basis_state(me.THREE_LEVEL, "gg"), coherent,
                         (env.t_start, env.t_end), sample_times=times)
    er_pop = max(me.expectation(s, proj) for s in traj_coh.states)
    checks.append(("|er-> decoupling", er_pop < 1e-10, f"max {er_pop:.1e} (gamma_g = 0)"))
    checks.append(("kernel backend", True, KERNEL_BACKEND))
    report(8, checks)


def test_criterion_09_gate(defaults, gate_calibration, gate_results):
    checks = []
    config_off = gt.GateConfig(params=defaults, omega_p0=0.0,
                               delta_p=gate_calibration.delta_p,
                               tau_flat=gate_calibration.tau_flat,
                               franck_condon_factor=gate_calibration.franck_condon_factor)
    f_off = gt.simulate_cphase(config_off).fidelity
    checks.append(("F(Omega_p=0)", abs(f_off - 0.25) < 1e-9, f"{f_off:.9f} (= 1/4)"))

    # coherent limit: all relaxation off, calibrated pulse
    coherent = replace(defaults, rates=RelaxationRates(0.0, 0.0, 0.0))
    res_coh = gt.simulate_cphase(gt.GateConfig(params=coherent),
                                 calibration=gate_calibration)
    checks.append(("coherent F", res_coh.fidelity >= 0.95, f"{res_coh.fidelity:.5f}"))
    checks.append(("conditional phase", abs(res_coh.phi_conditional - pi) <= 0.05,
                   f"{res_coh.phi_conditional:.4f} rad (pi +- 0.05)"))

    fids = [gate_results[g].fidelity for g in (0.0, 10.0, 20.0, 50.0, 100.0)]
    monotone = all(lo <= hi + 1e-3 for lo, hi in zip(fids[1:], fids[:-1]))
    checks.append(("F non-increasing", monotone,
                   "F(gamma) = " + ", ".join(f"{f:.4f}" for f in fids)))

    p_gg = gate_results[20.0].p_gg
    cycle = p_gg[0] > 0.999 and p_gg.min() < 0.2 and p_gg[-1] > 0.8
    checks.append(("P_gg cycle @20kHz", cycle,
                   f"start {p_gg[0]:.3f}, dip {p_gg.min():.3f}, return {p_gg[-1]:.3f}"))
    report(9, checks)


def test_criterion_10_vibrational_leakage(defaults, gate_calibration):
    cal = gate_calibration
    checks = []
    worst_even, worst_gamma = 0.0, 0.0
    for gamma_khz in (20.0, 50.0, 99.0):
        ladder, pulse = gt.build_ladder(defaults, gamma=from_2pi_khz(gamma_khz),
                                        mismatch=0.0, omega_p2=cal.omega_p2,
                                        tau_flat=cal.tau_flat)
        pops = gt.vibrational_leakage(ladder, pulse)
        even_total = float(sum(pops[n] for n in range(2, ladder.n_max + 1, 2)))
        if even_total > worst_even:
            worst_even, worst_gamma = even_total, gamma_khz
        per_state = max(pops[n] for n in range(2, ladder.n_max + 1, 2))
        checks.append((f"even-n total @{gamma_khz:.0f}kHz", even_total < 0.01,
                       f"{100 * even_total:.2f}% (max single state "
                       f"{100 * per_state:.2f}%)"))

    ladder1, pulse1 = gt.build_ladder(defaults, gamma=from_2pi_khz(99.0),
                                      mismatch=1e-3, omega_p2=cal.omega_p2,
                                      tau_flat=cal.tau_flat)
    pops1 = gt.vibrational_leakage(ladder1, pulse1)
    checks.append(("n=1 @1nm mismatch", pops1[1] <= 6.5e-4, f"{pops1[1]:.2e}"))
    report(10, checks)
