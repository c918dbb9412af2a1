# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: trie-based phrase counting and SVM dual coordinate
descent.  Mirrors ``pure.py`` operation for operation so both backends
return bit-identical results."""

import numpy as np

BACKEND_NAME = "native"


def count_category(int[::1] ids, int[::1] child_start, int[::1] child_count,
                   int[::1] edge_token, int[::1] edge_child, int[::1] term_len):
    cdef Py_ssize_t n = ids.shape[0]
    cdef Py_ssize_t i = 0, j, k, lo, hi
    cdef int node, nxt, t, best
    cdef long count = 0
    while i < n:
        node = 0
        best = 0
        j = i
        while j < n:
            t = ids[j]
            if t < 0:
                break
            lo = child_start[node]
            hi = lo + child_count[node]
            nxt = -1
            for k in range(lo, hi):
                if edge_token[k] == t:
                    nxt = edge_child[k]
                    break
            if nxt < 0:
                break
            node = nxt
            j += 1
            if term_len[node] > 0:
                best = term_len[node]
        if best > 0:
            count += 1
            i += best
        else:
            i += 1
    return count


def dual_cd(double[:, ::1] X, double[::1] y, double C, double tol, long max_epochs):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    w_arr = np.zeros(d)
    alpha_arr = np.zeros(n)
    qii_arr = np.zeros(n)
    cdef double[::1] w = w_arr
    cdef double[::1] alpha = alpha_arr
    cdef double[::1] qii = qii_arr
    cdef Py_ssize_t i, k
    cdef long epoch = 0
    cdef double g, a, pg, a_new, coef, max_pg = 0.0

    for i in range(n):
        g = 0.0
        for k in range(d):
            g += X[i, k] * X[i, k]
        qii[i] = g

    while epoch < max_epochs:
        epoch += 1
        max_pg = 0.0
        for i in range(n):
            g = 0.0
            for k in range(d):
                g += w[k] * X[i, k]
            g = y[i] * g - 1.0
            a = alpha[i]
            if a == 0.0:
                pg = g if g < 0.0 else 0.0
            elif a == C:
                pg = g if g > 0.0 else 0.0
            else:
                pg = g
            if (pg if pg >= 0.0 else -pg) > max_pg:
                max_pg = pg if pg >= 0.0 else -pg
            if pg != 0.0:
                a_new = a - g / qii[i]
                if a_new < 0.0:
                    a_new = 0.0
                elif a_new > C:
                    a_new = C
                if a_new != a:
                    alpha[i] = a_new
                    coef = (a_new - a) * y[i]
                    for k in range(d):
                        w[k] += coef * X[i, k]
        if max_pg <= tol:
            break
    return w_arr, alpha_arr, epoch, max_pg
