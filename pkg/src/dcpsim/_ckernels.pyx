# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled inner loops. Same contracts as ``_pykernels``."""

import numpy as np

from libc.stdint cimport int64_t, uint8_t


def form_clusters(const int64_t[::1] energy, const double[:, ::1] distance, double range_):
    cdef Py_ssize_t n = energy.shape[0]
    cdef Py_ssize_t i, j, best, it
    cdef int64_t best_e = 0
    cdef int64_t cid = 0
    cluster_no = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] cl = cluster_no
    subsink = []
    for it in range(n):
        best = -1
        for i in range(n):
            if cl[i] == 0 and (best == -1 or energy[i] > best_e):
                best = i
                best_e = energy[i]
        if best == -1:
            break
        cid += 1
        cl[best] = cid
        subsink.append(best + 1)
        for j in range(n):
            if cl[j] == 0 and distance[best, j] <= range_:
                cl[j] = cid
    return cluster_no, subsink


def charge_heads(int64_t[::1] energy, const int64_t[::1] heads, int64_t cost):
    cdef Py_ssize_t k
    cdef int64_t total = 0
    for k in range(heads.shape[0]):
        if energy[heads[k]] <= 0:
            return True, 0
    for k in range(heads.shape[0]):
        energy[heads[k]] -= cost
        total += cost
    return False, total


def tick(int64_t[::1] energy, const uint8_t[::1] is_head, uint8_t[::1] active,
         int64_t active_cost, int64_t idle_cost):
    cdef Py_ssize_t n = energy.shape[0]
    cdef Py_ssize_t i
    cdef int64_t total = 0
    cdef int64_t n_active = 0
    for i in range(n):
        if energy[i] <= 0:
            return True, 0, 0
    for i in range(n):
        if is_head[i]:
            continue
        if active[i]:
            energy[i] -= active_cost
            total += active_cost
            active[i] = 0
            n_active += 1
        else:
            energy[i] -= idle_cost
            total += idle_cost
    return False, total, n_active
