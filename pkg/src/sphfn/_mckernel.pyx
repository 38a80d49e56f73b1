# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled averaging kernel: mean of exp(i x . (M xi)) over a matrix batch."""

import numpy as np

cimport numpy as cnp
from libc.math cimport cos, exp, fabs, sin, sqrt

cnp.import_array()


def plane_wave_average(double[:, :, ::1] mats, double[::1] xi_re,
                       double[::1] xi_im, double[:, ::1] xs):
    """Same contract as the numpy fallback: (values, stderr, max_growth)."""
    cdef Py_ssize_t num = mats.shape[0]
    cdef Py_ssize_t n = mats.shape[1]
    cdef Py_ssize_t npts = xs.shape[0]

    out = np.empty(npts, dtype=np.complex128)
    err = np.empty(npts, dtype=np.float64)
    vre_arr = np.empty((num, n), dtype=np.float64)
    vim_arr = np.empty((num, n), dtype=np.float64)
    cdef double complex[::1] out_v = out
    cdef double[::1] err_v = err
    cdef double[:, ::1] vre = vre_arr
    cdef double[:, ::1] vim = vim_arr

    cdef Py_ssize_t k, i, j, p
    cdef double ar, ai, m, x, zr, zi, amp, wr, wi
    cdef double sr, si, q2r, q2i, mr, mi, var_r, var_i
    cdef double max_growth = 0.0

    with nogil:
        for k in range(num):
            for i in range(n):
                ar = 0.0
                ai = 0.0
                for j in range(n):
                    m = mats[k, i, j]
                    ar += m * xi_re[j]
                    ai += m * xi_im[j]
                vre[k, i] = ar
                vim[k, i] = ai

        for p in range(npts):
            sr = 0.0
            si = 0.0
            q2r = 0.0
            q2i = 0.0
            for k in range(num):
                zr = 0.0
                zi = 0.0
                for i in range(n):
                    x = xs[p, i]
                    zr += x * vre[k, i]
                    zi += x * vim[k, i]
                if fabs(zi) > max_growth:
                    max_growth = fabs(zi)
                amp = exp(-zi)
                wr = amp * cos(zr)
                wi = amp * sin(zr)
                sr += wr
                si += wi
                q2r += wr * wr
                q2i += wi * wi
            mr = sr / num
            mi = si / num
            out_v[p] = mr + 1j * mi
            if num > 1:
                var_r = (q2r - num * mr * mr) / (num - 1)
                var_i = (q2i - num * mi * mi) / (num - 1)
                if var_r < 0.0:
                    var_r = 0.0
                if var_i < 0.0:
                    var_i = 0.0
                err_v[p] = sqrt((var_r + var_i) / num)
            else:
                err_v[p] = 0.0

    return out, err, max_growth
