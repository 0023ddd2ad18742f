"""Timing comparison of the compiled and pure-numpy kernel paths.

Run as a script:

    python benchmarks/bench_kernels.py

Both implementations are imported from locsym._kernels side by side, so the
LOCSYM_DISABLE_NUMBA flag is irrelevant here; it only controls which one the
library itself binds to at import time. The numba functions are warmed up
once before timing so JIT compilation is not counted.
"""

from __future__ import annotations

import time

import numpy as np

from locsym import Slab, build_profile, solve_scattering
from locsym import _kernels


def _timeit(fn, *args, repeats=7):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _field_arrays(n_slabs=64, seed=7):
    rng = np.random.default_rng(seed)
    x = 0.0
    slabs = []
    for _ in range(n_slabs):
        w = float(rng.uniform(0.2, 0.8))
        slabs.append(Slab(x, w, float(rng.uniform(-1.5, 4.0))))
        x += w
    profile = build_profile(slabs, 1.0, 1.0)
    fld = solve_scattering(profile, 1.3, "left").field
    return profile, fld


def bench_eval_field():
    profile, fld = _field_arrays()
    lo, hi = profile.scatterer
    args = (fld.edges, fld.kind, fld.kappa, fld.anch1, fld.anch2, fld.ca, fld.cb)
    print("eval_field (64 regions)")
    print(f"{'points':>10} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for n in (1_000, 30_000, 1_000_000):
        xs = np.linspace(lo - 1.0, hi + 1.0, n)
        t_np = _timeit(_kernels.eval_field_numpy, xs, *args)
        row = f"{n:>10d} {t_np * 1e3:>10.3f}ms"
        if _kernels.USE_NUMBA:
            a0, d0 = _kernels.eval_field_numpy(xs, *args)
            a1, d1 = _kernels.eval_field_numba(xs, *args)
            err = max(np.max(np.abs(a0 - a1)), np.max(np.abs(d0 - d1)))
            assert err < 1e-12, f"kernel paths disagree: {err}"
            t_nb = _timeit(_kernels.eval_field_numba, xs, *args)
            row += f" {t_nb * 1e3:>10.3f}ms {t_np / t_nb:>7.2f}x"
        else:
            row += f" {'n/a':>12} {'n/a':>8}"
        print(row)


def bench_transfer_accumulate():
    rng = np.random.default_rng(11)
    print("\ntransfer_accumulate")
    print(f"{'pieces':>10} {'python':>12} {'numba':>12} {'speedup':>8}")
    # sizes span realistic unit cells; much beyond this the raw product
    # overflows float64 through evanescent growth, which is why the solver
    # assembles a banded system instead of chaining transfer matrices
    for n in (16, 128, 1_024):
        us = rng.uniform(-2.0, 4.0, n)
        widths = rng.uniform(0.2, 0.8, n)
        t_py = _timeit(_kernels.transfer_accumulate_python, us, widths, 1e-300)
        row = f"{n:>10d} {t_py * 1e3:>10.3f}ms"
        if _kernels.USE_NUMBA:
            m0 = _kernels.transfer_accumulate_python(us, widths, 1e-300)
            m1 = _kernels.transfer_accumulate_numba(us, widths, 1e-300)
            scale = np.max(np.abs(m0))
            # identical operation order; ulp-level libm differences can still
            # compound through a long ill-conditioned product
            assert np.max(np.abs(m0 - m1)) < 1e-9 * scale, "kernel paths disagree"
            t_nb = _timeit(_kernels.transfer_accumulate_numba, us, widths, 1e-300)
            row += f" {t_nb * 1e3:>10.3f}ms {t_py / t_nb:>7.2f}x"
        else:
            row += f" {'n/a':>12} {'n/a':>8}"
        print(row)


def main():
    if _kernels.USE_NUMBA:
        # JIT warm-up outside the timed region
        profile, fld = _field_arrays(n_slabs=4, seed=1)
        xs = np.linspace(-1.0, 3.0, 16)
        _kernels.eval_field_numba(
            xs, fld.edges, fld.kind, fld.kappa, fld.anch1, fld.anch2, fld.ca, fld.cb
        )
        _kernels.transfer_accumulate_numba(
            np.array([1.0, -1.0]), np.array([0.5, 0.5]), 1e-300
        )
        print("numba path available; comparing against pure numpy\n")
    else:
        print("numba disabled or unavailable; timing the numpy path only\n")
    bench_eval_field()
    bench_transfer_accumulate()


if __name__ == "__main__":
    main()
