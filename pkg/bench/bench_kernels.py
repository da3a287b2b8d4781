"""Benchmark the compiled propagation kernel against the numpy fallback.

Two representative workloads: the 9-dimensional spectra problem (3-level
pair driven through the figure pulse) and the 16-dimensional gate problem.
Run:

    python bench/bench_kernels.py

Both backends produce identical trajectories (cross-checked here to
1e-13); only wall time differs.
"""

import time

import numpy as np

from rydimer._kernels import _pure

try:
    from rydimer._kernels import _core
except ImportError:
    _core = None

from rydimer.gate import gate_hamiltonian
from rydimer.master_eq import (
    FOUR_LEVEL,
    THREE_LEVEL,
    PulseEnvelope,
    basis_state,
    build_jump_operators,
    probe_pattern,
    static_hamiltonian,
)
from rydimer.params import default_parameters, from_2pi_mhz


def problem(scheme_name: str):
    params = default_parameters()
    pulse = PulseEnvelope(peak=0.1 * params.mw.omega, flat_duration=80e-9,
                          edge_sigma=10e-9)
    if scheme_name == "spectra (dim 9)":
        scheme = THREE_LEVEL
        h0 = static_hamiltonian(scheme, 2.7345, params.coeffs, params.mw,
                                from_2pi_mhz(159.3))
    else:
        scheme = FOUR_LEVEL
        h0 = gate_hamiltonian(2.7345, params, from_2pi_mhz(159.065))
    jumps = build_jump_operators(scheme, params.rates)
    g = h0.astype(complex)
    for jump in jumps:
        g = g - 0.5j * (jump.conj().T @ jump)
    n_steps = 4000
    dt = 5e-11
    t_half = 0.5 * dt * np.arange(2 * n_steps + 1)
    pulse_half = np.asarray(pulse.value(t_half), dtype=float)
    rho0 = basis_state(scheme, "gg")
    record = np.array([n_steps], dtype=np.int64)
    return (rho0, g, probe_pattern(scheme), pulse_half, dt, record,
            np.asarray(jumps)), n_steps


def run(backend, args, repeats=3):
    best = np.inf
    out = None
    for _ in range(repeats):
        start = time.perf_counter()
        out = backend.propagate_rk4(*args)
        best = min(best, time.perf_counter() - start)
    return best, out


def main():
    print(f"{'workload':<18} {'pure':>10} {'compiled':>10} {'speedup':>9}   steps/s (compiled)")
    for name in ("spectra (dim 9)", "gate (dim 16)"):
        args, n_steps = problem(name)
        t_pure, out_pure = run(_pure, args)
        if _core is None:
            print(f"{name:<18} {t_pure:>9.3f}s {'n/a':>10}")
            continue
        t_core, out_core = run(_core, args)
        assert np.max(np.abs(out_pure - out_core)) < 1e-13
        print(f"{name:<18} {t_pure:>9.3f}s {t_core:>9.3f}s {t_pure / t_core:>8.1f}x"
              f"   {n_steps / t_core:,.0f}")


if __name__ == "__main__":
    main()
