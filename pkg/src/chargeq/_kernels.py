"""Compiled inner loops of the manifold propagator.

Block position ``k`` holds manifold ``n = k - 2``; slot ``s`` of a block is
two-qubit basis state ``s`` with ``n + PHOTON_OFFSET[s]`` photons.
"""

import math

import numpy as np
from numba import njit

PHOTON_OFFSET = (0, 1, 1, 2)


RESYNC = 16


@njit(cache=True)
def _advance_phases(eigvals, taus, t, uniform, step, phase):
    """phase[k, j] = exp(-i E_kj tau_t).

    On a uniform grid phases advance by one complex multiply per step and are
    recomputed exactly every RESYNC steps, so rounding drift stays ~1e-15.
    """
    if uniform and t % RESYNC != 0:
        for k in range(phase.shape[0]):
            for j in range(4):
                phase[k, j] *= step[k, j]
    else:
        for k in range(phase.shape[0]):
            for j in range(4):
                a = eigvals[k, j] * taus[t]
                phase[k, j] = complex(math.cos(a), -math.sin(a))


@njit(cache=True)
def _rotate(eigvecs, c0, phase, k, tmp, amp):
    for j in range(4):
        tmp[j] = phase[k, j] * c0[k, j]
    for s in range(4):
        acc = 0j
        for j in range(4):
            acc += eigvecs[k, s, j] * tmp[j]
        amp[s] = acc


@njit(cache=True)
def _step_phases(eigvals, taus):
    n = taus.shape[0]
    uniform = n > 2
    dt = taus[1] - taus[0] if n > 1 else 0.0
    for t in range(1, n):
        if abs((taus[t] - taus[t - 1]) - dt) > 1e-12 * max(1.0, abs(taus[n - 1])):
            uniform = False
    step = np.empty(eigvals.shape, dtype=np.complex128)
    for k in range(eigvals.shape[0]):
        for j in range(4):
            a = eigvals[k, j] * dt
            step[k, j] = complex(math.cos(a), -math.sin(a))
    return uniform, step


@njit(cache=True)
def manifold_amplitudes(eigvals, eigvecs, c0, taus, n_fock):
    """Evolved amplitudes, shape (len(taus), 4, n_fock)."""
    m = eigvals.shape[0]
    out = np.zeros((taus.shape[0], 4, n_fock), dtype=np.complex128)
    tmp = np.empty(4, dtype=np.complex128)
    amp = np.empty(4, dtype=np.complex128)
    phase = np.empty(eigvals.shape, dtype=np.complex128)
    uniform, step = _step_phases(eigvals, taus)
    for t in range(taus.shape[0]):
        _advance_phases(eigvals, taus, t, uniform, step, phase)
        for k in range(m):
            _rotate(eigvecs, c0, phase, k, tmp, amp)
            for s in range(4):
                ph = k - 2 + PHOTON_OFFSET[s]
                if ph >= 0:
                    out[t, s, ph] = amp[s]
    return out


@njit(cache=True)
def manifold_reduced_states(eigvals, eigvecs, c0, taus, n_fock):
    """Two-qubit states after tracing out the field, shape (len(taus), 4, 4)."""
    m = eigvals.shape[0]
    out = np.zeros((taus.shape[0], 4, 4), dtype=np.complex128)
    table = np.zeros((4, n_fock), dtype=np.complex128)
    tmp = np.empty(4, dtype=np.complex128)
    amp = np.empty(4, dtype=np.complex128)
    phase = np.empty(eigvals.shape, dtype=np.complex128)
    uniform, step = _step_phases(eigvals, taus)
    for t in range(taus.shape[0]):
        _advance_phases(eigvals, taus, t, uniform, step, phase)
        table[:, :] = 0.0
        for k in range(m):
            _rotate(eigvecs, c0, phase, k, tmp, amp)
            for s in range(4):
                ph = k - 2 + PHOTON_OFFSET[s]
                if ph >= 0:
                    table[s, ph] = amp[s]
        for i in range(4):
            for j in range(i, 4):
                acc = 0j
                for p in range(n_fock):
                    acc += table[i, p] * table[j, p].conjugate()
                out[t, i, j] = acc
                out[t, j, i] = acc.conjugate()
            out[t, i, i] = out[t, i, i].real
    return out
