"""Timing comparison of the compiled averaging kernel and the numpy fallback.

Both backends compute the mean of exp(i x . (M xi)) over a batch of
orthogonal matrices for several probe points.  Run directly:

    python3 benchmarks/bench_kernels.py [--samples N] [--dim n] [--probes P]
"""

import argparse
import time

import numpy as np

from sphfn import _mckernel_py
from sphfn import kernels
from sphfn.groups import GroupSpec, build_group

try:
    from sphfn import _mckernel
except ImportError:
    _mckernel = None


def run_backend(impl, mats, xi_re, xi_im, xs, repeats):
    best = float("inf")
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = impl.plane_wave_average(mats, xi_re, xi_im, xs)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=200000)
    parser.add_argument("--dim", type=int, default=4)
    parser.add_argument("--probes", type=int, default=16)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    handle = build_group(GroupSpec.special_orthogonal(args.dim))
    mats = handle.sample_matrices(seed=42, count=args.samples)
    rng = np.random.default_rng(7)
    xi = rng.standard_normal(args.dim) + 0.3j * rng.standard_normal(args.dim)
    xs = rng.uniform(-2.0, 2.0, (args.probes, args.dim))
    xi_re = np.ascontiguousarray(xi.real)
    xi_im = np.ascontiguousarray(xi.imag)

    print(f"samples={args.samples} dim={args.dim} probes={args.probes}")
    (vals_py, err_py, _), t_py = run_backend(
        _mckernel_py, mats, xi_re, xi_im, xs, args.repeats
    )
    rate = args.samples * args.probes / t_py / 1e6
    print(f"pure numpy : {t_py * 1e3:9.2f} ms   ({rate:7.1f} M terms/s)")

    if _mckernel is None:
        print("compiled   : not built (pure-python install)")
        return

    (vals_c, err_c, _), t_c = run_backend(
        _mckernel, mats, xi_re, xi_im, xs, args.repeats
    )
    rate = args.samples * args.probes / t_c / 1e6
    print(f"compiled   : {t_c * 1e3:9.2f} ms   ({rate:7.1f} M terms/s)")
    print(f"speedup    : {t_py / t_c:9.2f}x")

    agree_vals = float(np.max(np.abs(vals_py - vals_c)))
    agree_errs = float(np.max(np.abs(err_py - err_c)))
    print(f"agreement  : values {agree_vals:.3e}, stderr {agree_errs:.3e}")
    if agree_vals > 1e-12 or agree_errs > 1e-12:
        raise SystemExit("backends disagree beyond 1e-12")
    print(f"active backend in sphfn.kernels: {'compiled' if kernels.COMPILED else 'pure'}")


if __name__ == "__main__":
    main()
