"""Kernel selection: compiled extension when available, numpy fallback otherwise.

Set SPHFN_PURE=1 in the environment to force the fallback.
"""

import os

import numpy as np

from .errors import DimensionMismatch, OverflowRisk

GROWTH_LIMIT = 700.0  # |Im z| above this overflows exp in double precision

if os.environ.get("SPHFN_PURE"):
    from . import _mckernel_py as _impl

    COMPILED = False
else:
    try:
        from . import _mckernel as _impl  # type: ignore[attr-defined]

        COMPILED = True
    except ImportError:
        from . import _mckernel_py as _impl

        COMPILED = False


def plane_wave_average(mats, xi, xs):
    """Mean and standard error of exp(i x . (M xi)) over the matrix batch.

    mats: (N, n, n) real, xi: (n,) complex, xs: (P, n) real probe rows.
    Returns (values (P,), stderr (P,)).  Raises OverflowRisk when any
    exponent magnitude exceeds 700.
    """
    mats = np.ascontiguousarray(mats, dtype=np.float64)
    xs = np.ascontiguousarray(np.atleast_2d(np.asarray(xs, dtype=np.float64)))
    xi = np.asarray(xi, dtype=np.complex128).reshape(-1)
    n = mats.shape[1]
    if xi.shape[0] != n or xs.shape[1] != n:
        raise DimensionMismatch(
            f"kernel inputs disagree: mats n={n}, xi {xi.shape}, xs {xs.shape}"
        )
    xi_re = np.ascontiguousarray(xi.real)
    xi_im = np.ascontiguousarray(xi.imag)
    values, stderr, max_growth = _impl.plane_wave_average(mats, xi_re, xi_im, xs)
    if max_growth > GROWTH_LIMIT:
        raise OverflowRisk(
            f"plane-wave exponent |Im(x . M xi)| reached {max_growth:.1f} > {GROWTH_LIMIT:g}"
        )
    return np.asarray(values), np.asarray(stderr)
