"""Pure-numpy reference implementation of the propagation kernel.

Same contract as the compiled core in ``_core.pyx``; used as the import
fallback and as the comparison baseline in ``bench/bench_kernels.py``.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"


def propagate_rk4(rho0, g_matrix, h_probe, pulse_half, dt, record_steps, jumps):
    """Fixed-step RK4 propagation of drho/dt = -i(G rho - rho G^+) + sum_k L rho L^+.

    ``g_matrix`` is the static Hamiltonian (angular-frequency units) minus
    (i/2) sum_k L^+ L, so the anticommutator part of the dissipator rides
    along with the coherent term; ``h_probe`` is the drive pattern scaled
    by the envelope.  ``pulse_half`` holds the envelope at half-step
    resolution: value index 2*i is t_i, 2*i + 1 is t_i + dt/2.  Snapshots
    of the state are written at the step indices in ``record_steps``
    (0 = initial state).

    Hermiticity of rho is preserved to rounding accuracy by construction:
    the coherent part is assembled as -i(M - M^+), which is Hermitian for
    any M, and the jump sum maps Hermitian to Hermitian.
    """
    pulse_half = np.asarray(pulse_half, dtype=float)
    n_steps = (len(pulse_half) - 1) // 2
    if len(pulse_half) != 2 * n_steps + 1:
        raise ValueError("pulse_half must have odd length 2*n_steps + 1")
    record_steps = np.asarray(record_steps, dtype=np.int64)

    rho = np.array(rho0, dtype=complex)
    dim = rho.shape[0]
    jumps = np.asarray(jumps, dtype=complex).reshape(-1, dim, dim)
    jumps_h = jumps.conj().transpose(0, 2, 1)
    have_jumps = jumps.shape[0] > 0

    def rhs(state, w):
        m = (g_matrix + w * h_probe) @ state
        out = -1j * (m - m.conj().T)
        if have_jumps:
            out += np.einsum("kij,kjl->il", jumps @ state, jumps_h)
        return out

    out = np.empty((len(record_steps), dim, dim), dtype=complex)
    pos = 0
    while pos < len(record_steps) and record_steps[pos] == 0:
        out[pos] = rho
        pos += 1

    for i in range(n_steps):
        w0 = pulse_half[2 * i]
        wh = pulse_half[2 * i + 1]
        w1 = pulse_half[2 * i + 2]
        k1 = rhs(rho, w0)
        k2 = rhs(rho + (0.5 * dt) * k1, wh)
        k3 = rhs(rho + (0.5 * dt) * k2, wh)
        k4 = rhs(rho + dt * k3, w1)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        while pos < len(record_steps) and record_steps[pos] == i + 1:
            out[pos] = rho
            pos += 1
    if pos != len(record_steps):
        raise ValueError("record_steps must be sorted and lie within [0, n_steps]")
    return out
