"""Hot numeric kernels: piecewise field evaluation and transfer accumulation.

Two interchangeable implementations live here. The numba-compiled path is
used when numba imports cleanly; setting the environment variable
LOCSYM_DISABLE_NUMBA=1 (before import) forces the vectorized pure-numpy
path. Results agree to roundoff; see benchmarks/bench_kernels.py for the
speed comparison.

Field representation (shared with solver.PiecewiseField): per region j,
either an exponential basis

    A(x) = ca[j] exp(i kappa (x - anch1[j])) + cb[j] exp(-i kappa (x - anch2[j]))

(kind 0; the two anchors sit at opposite region edges so every factor stays
bounded by 1 inside an evanescent region), or the linear basis of the
kappa = 0 limit, A(x) = ca[j] + cb[j] (x - anch1[j]) (kind 1). Region
lookup is right-continuous, x == edge belongs to the region on the right.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("LOCSYM_DISABLE_NUMBA", "").strip().lower() not in (
    "1",
    "true",
    "yes",
)

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a hard dep, belt and braces
        USE_NUMBA = False


def eval_field_numpy(xs, edges, kind, kappa, anch1, anch2, ca, cb):
    """Vectorized field evaluation, returns (A, A') complex arrays."""
    idx = np.searchsorted(edges, xs, side="right")
    k = kappa[idx]
    a_out = np.empty(len(xs), dtype=np.complex128)
    da_out = np.empty(len(xs), dtype=np.complex128)

    exp_m = kind[idx] == 0
    if np.any(exp_m):
        ke = k[exp_m]
        xe = xs[exp_m]
        ie = idx[exp_m]
        e1 = np.exp(1j * ke * (xe - anch1[ie]))
        e2 = np.exp(-1j * ke * (xe - anch2[ie]))
        a_out[exp_m] = ca[ie] * e1 + cb[ie] * e2
        da_out[exp_m] = 1j * ke * (ca[ie] * e1 - cb[ie] * e2)
    lin_m = ~exp_m
    if np.any(lin_m):
        il = idx[lin_m]
        a_out[lin_m] = ca[il] + cb[il] * (xs[lin_m] - anch1[il])
        da_out[lin_m] = cb[il]
    return a_out, da_out


def transfer_accumulate_python(us, widths, u_tiny):
    """Left-to-right product of per-piece transfer matrices in (A, A') form."""
    m00 = 1.0
    m01 = 0.0
    m10 = 0.0
    m11 = 1.0
    for i in range(us.shape[0]):
        u = us[i]
        w = widths[i]
        if u > u_tiny:
            k = np.sqrt(u)
            c = np.cos(k * w)
            s = np.sin(k * w)
            p00, p01, p10, p11 = c, s / k, -k * s, c
        elif u < -u_tiny:
            g = np.sqrt(-u)
            c = np.cosh(g * w)
            s = np.sinh(g * w)
            p00, p01, p10, p11 = c, s / g, g * s, c
        else:
            p00, p01, p10, p11 = 1.0, w, 0.0, 1.0
        m00, m01, m10, m11 = (
            p00 * m00 + p01 * m10,
            p00 * m01 + p01 * m11,
            p10 * m00 + p11 * m10,
            p10 * m01 + p11 * m11,
        )
    out = np.empty((2, 2))
    out[0, 0] = m00
    out[0, 1] = m01
    out[1, 0] = m10
    out[1, 1] = m11
    return out


if USE_NUMBA:

    @njit(cache=True)
    def _eval_field_njit(xs, edges, kind, kappa, anch1, anch2, ca, cb, a_out, da_out):
        n_edges = edges.shape[0]
        for i in range(xs.shape[0]):
            x = xs[i]
            # first edge strictly greater than x (searchsorted side='right')
            lo = 0
            hi = n_edges
            while lo < hi:
                mid = (lo + hi) // 2
                if edges[mid] <= x:
                    lo = mid + 1
                else:
                    hi = mid
            j = lo
            if kind[j] == 0:
                k = kappa[j]
                e1 = np.exp(1j * k * (x - anch1[j]))
                e2 = np.exp(-1j * k * (x - anch2[j]))
                a_out[i] = ca[j] * e1 + cb[j] * e2
                da_out[i] = 1j * k * (ca[j] * e1 - cb[j] * e2)
            else:
                a_out[i] = ca[j] + cb[j] * (x - anch1[j])
                da_out[i] = cb[j]

    def eval_field_numba(xs, edges, kind, kappa, anch1, anch2, ca, cb):
        a_out = np.empty(len(xs), dtype=np.complex128)
        da_out = np.empty(len(xs), dtype=np.complex128)
        _eval_field_njit(xs, edges, kind, kappa, anch1, anch2, ca, cb, a_out, da_out)
        return a_out, da_out

    transfer_accumulate_numba = njit(cache=True)(transfer_accumulate_python)

    eval_field = eval_field_numba
    transfer_accumulate = transfer_accumulate_numba
else:
    eval_field = eval_field_numpy
    transfer_accumulate = transfer_accumulate_python
