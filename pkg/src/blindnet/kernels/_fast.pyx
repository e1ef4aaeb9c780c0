# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: CSR block multiply and Lloyd iterations.

Twin of ``_ref.py``; keep the control flow of the two files in sync.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def csr_matmul_dense(const cnp.int64_t[::1] indptr, const cnp.int64_t[::1] indices,
                     const double[::1] data, const double[:, ::1] x):
    cdef Py_ssize_t n_rows = indptr.shape[0] - 1
    cdef Py_ssize_t n_cols = x.shape[1]
    out = np.zeros((n_rows, n_cols), dtype=np.float64)
    cdef double[:, ::1] y = out
    cdef Py_ssize_t i, p, j, c
    cdef double v
    for i in range(n_rows):
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            v = data[p]
            for c in range(n_cols):
                y[i, c] += v * x[j, c]
    return out


def lloyd(const double[:, ::1] points, const double[:, ::1] centroids_init, int max_iter):
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t d = points.shape[1]
    cdef Py_ssize_t k = centroids_init.shape[0]

    labels_arr = np.zeros(n, dtype=np.int64)
    prev_arr = np.full(n, -1, dtype=np.int64)
    cent_arr = np.array(centroids_init, dtype=np.float64, copy=True)
    assigned_arr = np.zeros(n, dtype=np.float64)
    counts_arr = np.zeros(k, dtype=np.int64)

    cdef cnp.int64_t[::1] labels = labels_arr
    cdef cnp.int64_t[::1] prev = prev_arr
    cdef double[:, ::1] cent = cent_arr
    cdef double[::1] assigned = assigned_arr
    cdef cnp.int64_t[::1] counts = counts_arr

    cdef Py_ssize_t i, c, j, best, far
    cdef double dist, diff, best_dist, far_dist
    cdef int it, n_iter = 0
    cdef bint changed

    for it in range(max_iter):
        n_iter += 1
        counts[:] = 0
        for i in range(n):
            best = 0
            best_dist = 0.0
            for j in range(d):
                diff = points[i, j] - cent[0, j]
                best_dist += diff * diff
            for c in range(1, k):
                dist = 0.0
                for j in range(d):
                    diff = points[i, j] - cent[c, j]
                    dist += diff * diff
                if dist < best_dist:
                    best_dist = dist
                    best = c
            labels[i] = best
            assigned[i] = best_dist
            counts[best] += 1
        for c in range(k):
            if counts[c] == 0:
                far = 0
                far_dist = assigned[0]
                for i in range(1, n):
                    if assigned[i] > far_dist:
                        far_dist = assigned[i]
                        far = i
                counts[labels[far]] -= 1
                counts[c] += 1
                labels[far] = c
                assigned[far] = 0.0
        changed = False
        for i in range(n):
            if labels[i] != prev[i]:
                changed = True
                break
        if not changed:
            break
        prev[:] = labels
        for c in range(k):
            if counts[c] > 0:
                for j in range(d):
                    cent[c, j] = 0.0
        for i in range(n):
            c = labels[i]
            for j in range(d):
                cent[c, j] += points[i, j]
        for c in range(k):
            if counts[c] > 0:
                for j in range(d):
                    cent[c, j] /= counts[c]

    return prev_arr, cent_arr, n_iter
