# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for evaluating the sum-of-Gaussians scan field.

Each record contributes an isotropic bivariate normal centered on its beam
direction.  Contributions farther than ``cutoff`` standard deviations are
dropped exactly (treated as zero) so that the point and raster paths agree
bit-for-bit; ``cutoff <= 0`` disables truncation.
"""

from libc.math cimport exp

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925287


def field_values(double[:, ::1] centers, double[::1] sigmas,
                 double[:, ::1] points, double cutoff):
    """Field value at each query point: sum over records of the scaled normal."""
    cdef Py_ssize_t m = points.shape[0]
    cdef Py_ssize_t k = centers.shape[0]
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] ov = out
    cdef Py_ssize_t i, j
    cdef double dx, dy, s2, r2, lim2, acc
    cdef bint truncate = cutoff > 0.0
    for i in range(m):
        acc = 0.0
        for j in range(k):
            s2 = sigmas[j] * sigmas[j]
            dx = points[i, 0] - centers[j, 0]
            dy = points[i, 1] - centers[j, 1]
            r2 = dx * dx + dy * dy
            if truncate:
                lim2 = cutoff * cutoff * s2
                if r2 > lim2:
                    continue
            acc += exp(-0.5 * r2 / s2) / (TWO_PI * s2)
        ov[i] = acc
    return out


def field_raster(double[:, ::1] centers, double[::1] sigmas,
                 double[::1] axis_a, double[::1] axis_b, double cutoff):
    """Field values over the grid axis_a x axis_b (row index follows axis_a).

    Axes must be uniformly spaced ascending.  Accumulation is record-major
    within a window of cells per record, with the same circular cull as
    ``field_values`` so out[i, j] equals the pointwise evaluation exactly.
    """
    cdef Py_ssize_t na = axis_a.shape[0]
    cdef Py_ssize_t nb = axis_b.shape[0]
    cdef Py_ssize_t k = centers.shape[0]
    out = np.zeros((na, nb), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef double step_a = (axis_a[na - 1] - axis_a[0]) / (na - 1) if na > 1 else 1.0
    cdef double step_b = (axis_b[nb - 1] - axis_b[0]) / (nb - 1) if nb > 1 else 1.0
    cdef Py_ssize_t i, j, rec, i0, i1, j0, j1
    cdef double dx, dy, s2, r2, lim, lim2, peak
    cdef bint truncate = cutoff > 0.0
    for rec in range(k):
        s2 = sigmas[rec] * sigmas[rec]
        peak = 1.0 / (TWO_PI * s2)
        if truncate:
            lim = cutoff * sigmas[rec]
            lim2 = lim * lim
            i0 = <Py_ssize_t> ((centers[rec, 0] - lim - axis_a[0]) / step_a)
            i1 = <Py_ssize_t> ((centers[rec, 0] + lim - axis_a[0]) / step_a) + 1
            j0 = <Py_ssize_t> ((centers[rec, 1] - lim - axis_b[0]) / step_b)
            j1 = <Py_ssize_t> ((centers[rec, 1] + lim - axis_b[0]) / step_b) + 1
            if i0 < 0:
                i0 = 0
            if j0 < 0:
                j0 = 0
            if i1 >= na:
                i1 = na - 1
            if j1 >= nb:
                j1 = nb - 1
        else:
            i0 = 0
            i1 = na - 1
            j0 = 0
            j1 = nb - 1
        for i in range(i0, i1 + 1):
            dx = axis_a[i] - centers[rec, 0]
            for j in range(j0, j1 + 1):
                dy = axis_b[j] - centers[rec, 1]
                r2 = dx * dx + dy * dy
                if truncate and r2 > lim2:
                    continue
                ov[i, j] += exp(-0.5 * r2 / s2) / (TWO_PI * s2)
    return out
