"""Compiled Nelder-Mead for the four-angle dephasing problem.

Standard reflection/expansion/contraction/shrink coefficients (1, 2, 1/2, 1/2)
and the usual stopping rule: simplex spread below ``xatol`` in every
coordinate and below ``fatol`` in function value.
"""

import math

import numpy as np
from numba import njit

INV_LOG2 = 1.0 / math.log(2.0)


@njit(cache=True)
def dephased_entropy_bits(x, t):
    """Shannon entropy of a product measurement; ``t`` is the Pauli correlation tensor."""
    sa = math.sin(x[0])
    na0, na1, na2 = sa * math.cos(x[1]), sa * math.sin(x[1]), math.cos(x[0])
    sb = math.sin(x[2])
    nb0, nb1, nb2 = sb * math.cos(x[3]), sb * math.sin(x[3]), math.cos(x[2])
    u = t[1, 0] * na0 + t[2, 0] * na1 + t[3, 0] * na2
    v = t[0, 1] * nb0 + t[0, 2] * nb1 + t[0, 3] * nb2
    w = 0.0
    na = (na0, na1, na2)
    for i in range(3):
        w += na[i] * (t[i + 1, 1] * nb0 + t[i + 1, 2] * nb1 + t[i + 1, 3] * nb2)
    h = 0.0
    for p in (
        0.25 * (1.0 + u + v + w),
        0.25 * (1.0 + u - v - w),
        0.25 * (1.0 - u + v - w),
        0.25 * (1.0 - u - v + w),
    ):
        if p > 0.0:
            h -= p * math.log(p)
    return h * INV_LOG2


@njit(cache=True)
def _sort(sim, fsim):
    order = np.argsort(fsim, kind="mergesort")
    return sim[order].copy(), fsim[order].copy()


@njit(cache=True)
def nelder_mead(x0, t, step, xatol, fatol, maxfev):
    """Minimize the dephased entropy from ``x0``.

    Returns ``(x_best, f_best, nfev, converged)``.
    """
    n = x0.shape[0]
    sim = np.empty((n + 1, n))
    fsim = np.empty(n + 1)
    sim[0] = x0
    for k in range(n):
        sim[k + 1] = x0
        sim[k + 1, k] += step
    for k in range(n + 1):
        fsim[k] = dephased_entropy_bits(sim[k], t)
    nfev = n + 1
    sim, fsim = _sort(sim, fsim)
    converged = False
    while nfev < maxfev:
        xspread = np.max(np.abs(sim[1:] - sim[0]))
        fspread = np.max(np.abs(fsim[1:] - fsim[0]))
        if xspread <= xatol and fspread <= fatol:
            converged = True
            break
        xbar = np.zeros(n)
        for k in range(n):
            xbar += sim[k]
        xbar /= n
        worst = sim[n]
        xr = 2.0 * xbar - worst
        fxr = dephased_entropy_bits(xr, t)
        nfev += 1
        shrink = False
        if fxr < fsim[0]:
            xe = 3.0 * xbar - 2.0 * worst
            fxe = dephased_entropy_bits(xe, t)
            nfev += 1
            if fxe < fxr:
                sim[n] = xe
                fsim[n] = fxe
            else:
                sim[n] = xr
                fsim[n] = fxr
        elif fxr < fsim[n - 1]:
            sim[n] = xr
            fsim[n] = fxr
        elif fxr < fsim[n]:
            xc = 1.5 * xbar - 0.5 * worst
            fxc = dephased_entropy_bits(xc, t)
            nfev += 1
            if fxc <= fxr:
                sim[n] = xc
                fsim[n] = fxc
            else:
                shrink = True
        else:
            xcc = 0.5 * xbar + 0.5 * worst
            fxcc = dephased_entropy_bits(xcc, t)
            nfev += 1
            if fxcc < fsim[n]:
                sim[n] = xcc
                fsim[n] = fxcc
            else:
                shrink = True
        if shrink:
            for j in range(1, n + 1):
                sim[j] = sim[0] + 0.5 * (sim[j] - sim[0])
                fsim[j] = dephased_entropy_bits(sim[j], t)
            nfev += n
        sim, fsim = _sort(sim, fsim)
    return sim[0].copy(), fsim[0], nfev, converged
