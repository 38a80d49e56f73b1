"""Pure numpy fallback for the averaging kernel.

Chunked over the sample axis so the (points x samples) phase matrix never
materializes at full size.
"""

import numpy as np

CHUNK = 8192


def plane_wave_average(mats, xi_re, xi_im, xs):
    """Average exp(i x . (M xi)) over matrices M for each probe row x.

    mats: (N, n, n) float64, xi_re/xi_im: (n,) float64, xs: (P, n) float64.
    Returns (values (P,) complex128, stderr (P,) float64, max_growth float)
    where stderr is the sample standard error sqrt((var Re + var Im)/N) and
    max_growth is the largest |Im(x . M xi)| seen (overflow guard input).
    """
    mats = np.asarray(mats, dtype=np.float64)
    xs = np.asarray(xs, dtype=np.float64)
    xi = np.asarray(xi_re, dtype=np.float64) + 1j * np.asarray(xi_im, dtype=np.float64)
    num = mats.shape[0]
    npts = xs.shape[0]

    s = np.zeros(npts, dtype=np.complex128)
    sq_re = np.zeros(npts, dtype=np.float64)
    sq_im = np.zeros(npts, dtype=np.float64)
    max_growth = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        for lo in range(0, num, CHUNK):
            v = mats[lo : lo + CHUNK] @ xi            # (c, n) complex
            z = xs @ v.T                              # (P, c) complex
            if z.size:
                max_growth = max(max_growth, float(np.max(np.abs(z.imag))))
            w = np.exp(1j * z)
            s += w.sum(axis=1)
            sq_re += np.sum(w.real * w.real, axis=1)
            sq_im += np.sum(w.imag * w.imag, axis=1)

    mean = s / num
    if num > 1:
        var_re = np.maximum(sq_re - num * mean.real**2, 0.0) / (num - 1)
        var_im = np.maximum(sq_im - num * mean.imag**2, 0.0) / (num - 1)
        stderr = np.sqrt((var_re + var_im) / num)
    else:
        stderr = np.zeros(npts)
    return mean, stderr, max_growth
