# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. See ``_pykernels`` for the reference semantics."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"


def insert_batch(const cnp.int64_t[::1] cells,
                 const double[::1] objectives,
                 const cnp.uint8_t[::1] valid,
                 double alpha,
                 double[::1] threshold,
                 double[::1] soft_obj,
                 cnp.uint8_t[::1] soft_occ,
                 double[::1] result_obj,
                 cnp.uint8_t[::1] result_occ):
    cdef Py_ssize_t size = cells.shape[0]
    cdef Py_ssize_t i
    cdef cnp.int64_t e
    cdef double f, t
    cdef double keep = 1.0 - alpha
    cdef double nan = float("nan")

    deltas_arr = np.full(size, -np.inf)
    accepted_arr = np.zeros(size, dtype=np.uint8)
    improved_arr = np.zeros(size, dtype=np.uint8)
    prev_arr = np.full(size, np.nan)
    cdef double[::1] deltas = deltas_arr
    cdef cnp.uint8_t[::1] accepted = accepted_arr
    cdef cnp.uint8_t[::1] improved = improved_arr
    cdef double[::1] prev = prev_arr

    with nogil:
        for i in range(size):
            if not valid[i]:
                continue
            e = cells[i]
            f = objectives[i]
            t = threshold[e]
            deltas[i] = f - t
            if f > t:
                accepted[i] = 1
                threshold[e] = keep * t + alpha * f
                soft_obj[e] = f
                soft_occ[e] = 1
            # an empty result cell pairs with an empty soft cell (t = min_f)
            if not result_occ[e]:
                if not accepted[i]:
                    continue
                improved[i] = 1
                result_obj[e] = f
                result_occ[e] = 1
            elif f > result_obj[e]:
                improved[i] = 1
                prev[i] = result_obj[e]
                result_obj[e] = f
    return deltas_arr, accepted_arr, improved_arr, prev_arr


def lm_transform(const double[:, ::1] z,
                 const double[:, ::1] directions,
                 const double[::1] decay,
                 Py_ssize_t n_active):
    cdef Py_ssize_t rows = z.shape[0]
    cdef Py_ssize_t n = z.shape[1]
    cdef Py_ssize_t i, j, k
    cdef double c, keep, proj

    out = np.array(z, dtype=np.float64, copy=True)
    cdef double[:, ::1] d = out

    with nogil:
        for i in range(rows):
            for j in range(n_active):
                c = decay[j]
                keep = 1.0 - c
                proj = 0.0
                for k in range(n):
                    proj = proj + directions[j, k] * d[i, k]
                proj = c * proj
                for k in range(n):
                    d[i, k] = keep * d[i, k] + proj * directions[j, k]
    return out
