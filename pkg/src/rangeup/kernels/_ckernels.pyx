# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: min-scatter binning, raycasting, grid nearest neighbor.

Each function mirrors its twin in ``py_backend.py`` expression for expression
so the two backends agree bitwise.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, floor, sqrt

cnp.import_array()

NAME = "cython"

cdef double _EPS = 1e-9


def min_scatter(cnp.int64_t[::1] idx, double[::1] values, Py_ssize_t size):
    out = np.full(size, np.inf, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, j
    for i in range(idx.shape[0]):
        j = idx[i]
        if values[i] < o[j]:
            o[j] = values[i]
    return out


def raycast(double[:, ::1] dirs, double[::1] plane_z,
            double[:, ::1] boxes, double[:, ::1] cylinders):
    cdef Py_ssize_t n = dirs.shape[0]
    out = np.full(n, np.inf, dtype=np.float64)
    cdef double[::1] best = out
    cdef Py_ssize_t i, p, bi, ci, axis
    cdef double dx, dy, dz, t, z0, mn, mx, d, t1, t2, lo, hi, tmin, tmax
    cdef double cx, cy, radius, zmin, zmax, a, b, c, disc, s, z
    cdef bint miss

    for i in range(n):
        dx = dirs[i, 0]
        dy = dirs[i, 1]
        dz = dirs[i, 2]

        for p in range(plane_z.shape[0]):
            z0 = plane_z[p]
            if dz != 0.0:
                t = z0 / dz
                if t > _EPS and t < best[i]:
                    best[i] = t

        for bi in range(boxes.shape[0]):
            tmin = -INFINITY
            tmax = INFINITY
            miss = False
            for axis in range(3):
                d = dirs[i, axis]
                mn = boxes[bi, axis]
                mx = boxes[bi, axis + 3]
                if d != 0.0:
                    t1 = mn / d
                    t2 = mx / d
                    lo = t1 if t1 < t2 else t2
                    hi = t1 if t1 > t2 else t2
                    if lo > tmin:
                        tmin = lo
                    if hi < tmax:
                        tmax = hi
                else:
                    if 0.0 < mn or 0.0 > mx:
                        miss = True
            if not miss and tmax >= tmin:
                t = tmin if tmin > _EPS else tmax
                if t > _EPS and t < best[i]:
                    best[i] = t

        for ci in range(cylinders.shape[0]):
            cx = cylinders[ci, 0]
            cy = cylinders[ci, 1]
            radius = cylinders[ci, 2]
            zmin = cylinders[ci, 3]
            zmax = cylinders[ci, 4]
            a = dx * dx + dy * dy
            if a == 0.0:
                continue
            b = 2.0 * (-dx * cx - dy * cy)
            c = cx * cx + cy * cy - radius * radius
            disc = b * b - 4.0 * a * c
            if disc < 0.0:
                continue
            s = sqrt(disc)
            t1 = (-b - s) / (2.0 * a)
            t2 = (-b + s) / (2.0 * a)
            z = t1 * dz
            if t1 > _EPS and z >= zmin and z <= zmax:
                if t1 < best[i]:
                    best[i] = t1
            z = t2 * dz
            if t2 > _EPS and z >= zmin and z <= zmax:
                if t2 < best[i]:
                    best[i] = t2

    return out


def nearest_sqdist(double[:, ::1] queries, double[:, ::1] refs):
    cdef Py_ssize_t m = refs.shape[0]
    if m == 0:
        raise ValueError("reference cloud is empty")

    mins_arr = np.asarray(refs).min(axis=0)
    span_arr = np.asarray(refs).max(axis=0) - mins_arr
    cdef double cell = float(span_arr.max()) / max(1.0, float(m) ** (1.0 / 3.0))
    if cell <= 0.0:
        cell = 1.0
    cdef Py_ssize_t nx = max(1, <Py_ssize_t>(span_arr[0] / cell) + 1)
    cdef Py_ssize_t ny = max(1, <Py_ssize_t>(span_arr[1] / cell) + 1)
    cdef Py_ssize_t nz = max(1, <Py_ssize_t>(span_arr[2] / cell) + 1)
    cdef double mx0 = mins_arr[0], mx1 = mins_arr[1], mx2 = mins_arr[2]

    # bucket refs into a CSR layout over the flattened grid
    cells_arr = np.floor((np.asarray(refs) - mins_arr) / cell).astype(np.int64)
    cells_arr[:, 0] = np.clip(cells_arr[:, 0], 0, nx - 1)
    cells_arr[:, 1] = np.clip(cells_arr[:, 1], 0, ny - 1)
    cells_arr[:, 2] = np.clip(cells_arr[:, 2], 0, nz - 1)
    flat_arr = (cells_arr[:, 0] * ny + cells_arr[:, 1]) * nz + cells_arr[:, 2]
    order_arr = np.argsort(flat_arr, kind="stable")
    starts_arr = np.zeros(nx * ny * nz + 1, dtype=np.int64)
    np.add.at(starts_arr, flat_arr + 1, 1)
    np.cumsum(starts_arr, out=starts_arr)
    cdef cnp.int64_t[::1] order = order_arr
    cdef cnp.int64_t[::1] starts = starts_arr

    out = np.empty(queries.shape[0], dtype=np.float64)
    cdef double[::1] o = out
    cdef double cell2 = cell * cell
    cdef Py_ssize_t qi, ring, kmax, ii, jj, kk, lo_i, hi_i, lo_j, hi_j, lo_k, hi_k
    cdef Py_ssize_t ci, cj, ck, s0, s1, si, ri, cheb, tmp
    cdef double qx, qy, qz, best, ddx, ddy, ddz, d2

    for qi in range(queries.shape[0]):
        qx = queries[qi, 0]
        qy = queries[qi, 1]
        qz = queries[qi, 2]
        ci = <Py_ssize_t>floor((qx - mx0) / cell)
        cj = <Py_ssize_t>floor((qy - mx1) / cell)
        ck = <Py_ssize_t>floor((qz - mx2) / cell)
        kmax = 0
        tmp = max(abs(ci), abs(ci - (nx - 1)))
        if tmp > kmax:
            kmax = tmp
        tmp = max(abs(cj), abs(cj - (ny - 1)))
        if tmp > kmax:
            kmax = tmp
        tmp = max(abs(ck), abs(ck - (nz - 1)))
        if tmp > kmax:
            kmax = tmp
        best = INFINITY
        for ring in range(kmax + 1):
            if ring >= 1 and best <= (ring - 1) * (ring - 1) * cell2:
                break
            lo_i = max(ci - ring, 0)
            hi_i = min(ci + ring, nx - 1)
            lo_j = max(cj - ring, 0)
            hi_j = min(cj + ring, ny - 1)
            lo_k = max(ck - ring, 0)
            hi_k = min(ck + ring, nz - 1)
            for ii in range(lo_i, hi_i + 1):
                for jj in range(lo_j, hi_j + 1):
                    for kk in range(lo_k, hi_k + 1):
                        cheb = max(abs(ii - ci), max(abs(jj - cj), abs(kk - ck)))
                        if cheb != ring:
                            continue
                        s0 = starts[(ii * ny + jj) * nz + kk]
                        s1 = starts[(ii * ny + jj) * nz + kk + 1]
                        for si in range(s0, s1):
                            ri = order[si]
                            ddx = qx - refs[ri, 0]
                            ddy = qy - refs[ri, 1]
                            ddz = qz - refs[ri, 2]
                            d2 = (ddx * ddx + ddy * ddy) + ddz * ddz
                            if d2 < best:
                                best = d2
        o[qi] = best
    return out
