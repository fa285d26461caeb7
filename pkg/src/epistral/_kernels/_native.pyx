# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel implementations.

Semantics, tie-break rules, and floating-point operation order must match
_py.py exactly; the test suite compares the two backends output-for-output.
"""

from libc.math cimport log2

import numpy as np


def greedy_select(order, clusters, rels, excluded, n_clusters, feed_size, cap,
                  lam, max_rel):
    """See _py.greedy_select; same contract, compiled inner loops."""
    cdef long long[::1] order_v = np.ascontiguousarray(order, dtype=np.int64)
    cdef long long[::1] clusters_v = np.ascontiguousarray(clusters, dtype=np.int64)
    cdef double[::1] rels_v = np.ascontiguousarray(rels, dtype=np.float64)
    cdef unsigned char[::1] excl_v = np.ascontiguousarray(excluded, dtype=np.uint8)

    cdef Py_ssize_t n_items = order_v.shape[0]
    cdef Py_ssize_t n_c = n_clusters
    cdef long long fsize = feed_size
    cdef long long cap_c = cap
    cdef double lam_c = lam
    cdef double max_rel_c = max_rel

    # CSR layout of per-cluster candidate queues in champion-walk order
    cdef long long[::1] qcount = np.zeros(n_c, dtype=np.int64)
    cdef Py_ssize_t i
    cdef long long idx, c
    for i in range(n_items):
        idx = order_v[i]
        if not excl_v[idx]:
            qcount[clusters_v[idx]] += 1
    cdef long long[::1] qstart = np.zeros(n_c + 1, dtype=np.int64)
    for c in range(n_c):
        qstart[c + 1] = qstart[c] + qcount[c]
    cdef long long[::1] queue = np.empty(qstart[n_c], dtype=np.int64)
    cdef long long[::1] fill = np.zeros(n_c, dtype=np.int64)
    for i in range(n_items):
        idx = order_v[i]
        if not excl_v[idx]:
            c = clusters_v[idx]
            queue[qstart[c] + fill[c]] = idx
            fill[c] += 1

    cdef long long[::1] ptr = np.zeros(n_c, dtype=np.int64)
    cdef long long[::1] counts = np.zeros(n_c, dtype=np.int64)
    selected_arr = np.empty(fsize, dtype=np.int64)
    cdef long long[::1] selected = selected_arr

    cdef double log2f = log2(<double> fsize)
    cdef long long n = 0
    cdef double s0 = 0.0
    cdef long long best_idx, best_cluster, cand, old
    cdef double best_obj, f_old, f_new, h_new, obj

    while n < fsize:
        best_idx = -1
        best_obj = 0.0
        best_cluster = -1
        for c in range(n_c):
            if counts[c] >= cap_c:
                continue
            if qstart[c] + ptr[c] >= qstart[c + 1]:
                continue
            cand = queue[qstart[c] + ptr[c]]
            old = counts[c]
            f_old = old * log2(<double> old) if old > 0 else 0.0
            f_new = (old + 1) * log2(old + 1.0)
            h_new = log2(n + 1.0) - (s0 - f_old + f_new) / (n + 1.0)
            if log2f > 0.0:
                obj = lam_c * (h_new / log2f)
            else:
                obj = 0.0
            if max_rel_c > 0.0:
                obj = obj + (1.0 - lam_c) * (rels_v[cand] / max_rel_c)
            if best_idx < 0 or obj > best_obj or (obj == best_obj and cand < best_idx):
                best_idx = cand
                best_obj = obj
                best_cluster = c
        if best_idx < 0:
            break
        c = best_cluster
        old = counts[c]
        f_old = old * log2(<double> old) if old > 0 else 0.0
        s0 = s0 - f_old + (old + 1) * log2(old + 1.0)
        counts[c] = old + 1
        ptr[c] += 1
        selected[n] = best_idx
        n += 1

    return selected_arr[:n], n < fsize


def leader_cluster(embeddings, tau):
    """See _py.leader_cluster; same contract, compiled inner loops."""
    emb_arr = np.ascontiguousarray(embeddings, dtype=np.float64)
    cdef double[:, ::1] emb = emb_arr
    cdef Py_ssize_t n = emb.shape[0]
    cdef Py_ssize_t dim = emb.shape[1]
    out_arr = np.empty(n, dtype=np.int64)
    cdef long long[::1] out = out_arr
    if n == 0:
        return out_arr

    cdef double tau_c = tau
    leader_arr = np.empty((16, dim), dtype=np.float64)
    cdef double[:, ::1] leaders = leader_arr
    cdef Py_ssize_t n_leaders = 0
    seen = {}

    cdef Py_ssize_t i, j, k
    cdef Py_ssize_t best_j
    cdef double best, s
    cdef long long assigned

    for i in range(n):
        key = emb_arr[i].tobytes()
        hit = seen.get(key)
        if hit is not None:
            out[i] = hit
            continue
        best = -2.0
        best_j = -1
        for j in range(n_leaders):
            s = 0.0
            for k in range(dim):
                s += leaders[j, k] * emb[i, k]
            if s > best:
                best = s
                best_j = j
        if best_j >= 0 and best >= tau_c:
            assigned = best_j
        else:
            if n_leaders == leaders.shape[0]:
                grown = np.empty((leaders.shape[0] * 2, dim), dtype=np.float64)
                grown[:n_leaders] = leader_arr[:n_leaders]
                leader_arr = grown
                leaders = leader_arr
            for k in range(dim):
                leaders[n_leaders, k] = emb[i, k]
            assigned = n_leaders
            n_leaders += 1
        out[i] = assigned
        seen[key] = assigned
    return out_arr
