"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat N]

Each pair is run on identical inputs; the script also reports the largest
difference between the two results. Compilation time is excluded by a
warm-up call.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from spintomo import _accel, _kernels
from spintomo.su2 import m_values
from spintomo.tomography import grid_operators, make_grid


def _best(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    tj = 100
    ms = m_values(tj / 2)
    betas = np.linspace(0.0, np.pi, 181)
    yield ("small_d_block j=50, 181 betas", _kernels.small_d_block_nb, _kernels.small_d_block_np,
           (tj, ms, ms, betas, _kernels.LNFACT))

    rng = np.random.default_rng(0)
    a = rng.normal(size=(24, 24))
    a = np.ascontiguousarray(a + a.T)
    yield ("jacobi eigenvalues 24x24", _kernels.jacobi_eigvals_sym_nb, _kernels.jacobi_eigvals_sym_np,
           (a, 1e-15, 100))

    for tj in (1, 2):
        d = np.ascontiguousarray(grid_operators(make_grid(tj / 2), "quantizer"))
        u = np.ascontiguousarray(grid_operators(make_grid(tj / 2), "dequantizer")[0])
        yield (f"triple trace table 2j={tj} ({len(d)}^2)", _kernels.triple_trace_table_nb,
               _kernels.triple_trace_table_np, (d, d, u))


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    args = p.parse_args(argv)
    print(f"numba available: {_accel.HAVE_NUMBA}, active by default: {_accel.USE_NUMBA}")
    print(f"{'kernel':40s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>8s} {'max diff':>10s}")
    for name, fnb, fnp, fargs in cases():
        tnb, rnb = _best(fnb, fargs, args.repeat)
        tnp, rnp = _best(fnp, fargs, args.repeat)
        if name.startswith("jacobi"):
            rnb, rnp = np.sort(rnb), np.sort(rnp)
        diff = float(np.max(np.abs(np.asarray(rnb) - np.asarray(rnp))))
        print(f"{name:40s} {1e3 * tnb:12.3f} {1e3 * tnp:12.3f} {tnp / tnb:8.1f} {diff:10.2e}")


if __name__ == "__main__":
    main()
