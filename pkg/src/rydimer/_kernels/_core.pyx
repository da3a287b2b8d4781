# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled propagation kernel: fused Lindblad RHS + RK4 stepping.

Same contract as ``_pure.propagate_rk4``.  The jump operators of this
problem have at most a handful of nonzero entries (single matrix elements
or diagonals), so the dissipator sum L rho L^+ is applied from a sparse
COO representation extracted once per call; the anticommutator part is
folded into the non-Hermitian static matrix G by the caller.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"

ctypedef double complex cplx

cdef cplx MINUS_I = -1j


cdef inline void _rhs(int d,
                      const cplx* g, const cplx* hp, double w,
                      const cplx* rho,
                      const cplx* jval, const int* jrow, const int* jcol,
                      const int* jptr, int njumps,
                      cplx* ht, cplx* m, cplx* out) noexcept nogil:
    cdef int i, j, k, p, q, lo, hi
    cdef cplx acc
    # H(t) = G + w * Hp
    for i in range(d * d):
        ht[i] = g[i] + w * hp[i]
    # M = H(t) @ rho
    for i in range(d):
        for j in range(d):
            acc = 0
            for k in range(d):
                acc = acc + ht[i * d + k] * rho[k * d + j]
            m[i * d + j] = acc
    # out = -i (M - M^+), Hermitian by construction
    for i in range(d):
        for j in range(d):
            out[i * d + j] = MINUS_I * (m[i * d + j] - m[j * d + i].conjugate())
    # out += sum_k L rho L^+ from COO entries (a, c, v): each pair (p, q)
    # of entries of the same operator contributes v_p conj(v_q) rho[c_p, c_q]
    # to out[a_p, a_q]
    for k in range(njumps):
        lo = jptr[k]
        hi = jptr[k + 1]
        for p in range(lo, hi):
            for q in range(lo, hi):
                out[jrow[p] * d + jrow[q]] = out[jrow[p] * d + jrow[q]] + \
                    jval[p] * jval[q].conjugate() * rho[jcol[p] * d + jcol[q]]


def propagate_rk4(rho0, g_matrix, h_probe, pulse_half, double dt,
                  record_steps, jumps):
    pulse = np.ascontiguousarray(pulse_half, dtype=np.float64)
    cdef Py_ssize_t n_steps = (pulse.shape[0] - 1) // 2
    if pulse.shape[0] != 2 * n_steps + 1:
        raise ValueError("pulse_half must have odd length 2*n_steps + 1")

    rho_arr = np.array(rho0, dtype=np.complex128, order="C")
    cdef int d = rho_arr.shape[0]
    g_arr = np.ascontiguousarray(g_matrix, dtype=np.complex128)
    hp_arr = np.ascontiguousarray(h_probe, dtype=np.complex128)
    rec = np.ascontiguousarray(record_steps, dtype=np.int64)

    # sparse COO extraction of the jump operators
    jarr = np.asarray(jumps, dtype=np.complex128).reshape(-1, d, d)
    cdef int njumps = jarr.shape[0]
    rows, cols, vals, ptr = [], [], [], [0]
    for k in range(njumps):
        r, c = np.nonzero(jarr[k])
        rows.extend(r.tolist())
        cols.extend(c.tolist())
        vals.extend(jarr[k][r, c].tolist())
        ptr.append(len(rows))
    jrow_arr = np.asarray(rows, dtype=np.intc)
    jcol_arr = np.asarray(cols, dtype=np.intc)
    jval_arr = np.asarray(vals, dtype=np.complex128)
    jptr_arr = np.asarray(ptr, dtype=np.intc)

    out_arr = np.empty((rec.shape[0], d, d), dtype=np.complex128)

    cdef double[::1] pulse_v = pulse
    cdef cplx[:, ::1] rho_v = rho_arr
    cdef cplx[:, ::1] g_v = g_arr
    cdef cplx[:, ::1] hp_v = hp_arr
    cdef long long[::1] rec_v = rec
    cdef cplx[::1] jval_v = jval_arr
    cdef int[::1] jrow_v = jrow_arr
    cdef int[::1] jcol_v = jcol_arr
    cdef int[::1] jptr_v = jptr_arr
    cdef cplx[:, :, ::1] out_v = out_arr

    work = np.zeros((7, d, d), dtype=np.complex128)
    cdef cplx[:, :, ::1] w_v = work

    cdef cplx* rho_p = &rho_v[0, 0]
    cdef cplx* g_p = &g_v[0, 0]
    cdef cplx* hp_p = &hp_v[0, 0]
    cdef cplx* out_p = NULL
    cdef cplx* ht = &w_v[0, 0, 0]
    cdef cplx* m = &w_v[1, 0, 0]
    cdef cplx* k1 = &w_v[2, 0, 0]
    cdef cplx* k2 = &w_v[3, 0, 0]
    cdef cplx* k3 = &w_v[4, 0, 0]
    cdef cplx* k4 = &w_v[5, 0, 0]
    cdef cplx* tmp = &w_v[6, 0, 0]
    cdef cplx* jval_p = NULL
    cdef int* jrow_p = NULL
    cdef int* jcol_p = NULL
    cdef int* jptr_p = &jptr_v[0]
    if jval_arr.shape[0] > 0:
        jval_p = &jval_v[0]
        jrow_p = &jrow_v[0]
        jcol_p = &jcol_v[0]

    cdef Py_ssize_t n_rec = rec.shape[0]
    cdef Py_ssize_t pos = 0, i, j
    cdef int dd = d * d
    cdef double w0, wh, w1

    if n_rec > 0:
        out_p = &out_v[0, 0, 0]

    with nogil:
        while pos < n_rec and rec_v[pos] == 0:
            for j in range(dd):
                out_p[pos * dd + j] = rho_p[j]
            pos += 1
        for i in range(n_steps):
            w0 = pulse_v[2 * i]
            wh = pulse_v[2 * i + 1]
            w1 = pulse_v[2 * i + 2]
            _rhs(d, g_p, hp_p, w0, rho_p, jval_p, jrow_p, jcol_p, jptr_p, njumps, ht, m, k1)
            for j in range(dd):
                tmp[j] = rho_p[j] + 0.5 * dt * k1[j]
            _rhs(d, g_p, hp_p, wh, tmp, jval_p, jrow_p, jcol_p, jptr_p, njumps, ht, m, k2)
            for j in range(dd):
                tmp[j] = rho_p[j] + 0.5 * dt * k2[j]
            _rhs(d, g_p, hp_p, wh, tmp, jval_p, jrow_p, jcol_p, jptr_p, njumps, ht, m, k3)
            for j in range(dd):
                tmp[j] = rho_p[j] + dt * k3[j]
            _rhs(d, g_p, hp_p, w1, tmp, jval_p, jrow_p, jcol_p, jptr_p, njumps, ht, m, k4)
            for j in range(dd):
                rho_p[j] = rho_p[j] + (dt / 6.0) * (k1[j] + 2.0 * (k2[j] + k3[j]) + k4[j])
            while pos < n_rec and rec_v[pos] == i + 1:
                for j in range(dd):
                    out_p[pos * dd + j] = rho_p[j]
                pos += 1

    if pos != n_rec:
        raise ValueError("record_steps must be sorted and lie within [0, n_steps]")
    return out_arr
