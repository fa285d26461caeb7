"""Pure-Python kernel implementations.

Fallback backend used when the compiled extension is unavailable. Must stay
semantically identical to _native.pyx, including tie-break rules and the
order of floating-point operations inside the greedy objective.
"""

from __future__ import annotations

import math

import numpy as np


def greedy_select(order, clusters, rels, excluded, n_clusters, feed_size, cap,
                  lam, max_rel):
    """Greedy diversity-blended selection over a candidate pool.

    order: candidate indices in champion-walk order (per-cluster best first).
    clusters: dense cluster index per candidate.
    rels: relative score per candidate.
    excluded: nonzero where a candidate must not be selected.
    Returns (selected candidate indices in pick order, truncated flag).

    Candidate indices correspond to ascending content id, so "lower index"
    is the tie-break for equal objectives. The entropy term is skipped when
    log2(feed_size) == 0, the relevance term when max_rel == 0.
    """
    order = order.tolist() if hasattr(order, "tolist") else list(order)
    clusters = clusters.tolist() if hasattr(clusters, "tolist") else list(clusters)
    rels = rels.tolist() if hasattr(rels, "tolist") else list(rels)
    excluded = excluded.tolist() if hasattr(excluded, "tolist") else list(excluded)

    queues = [[] for _ in range(n_clusters)]
    for idx in order:
        if not excluded[idx]:
            queues[clusters[idx]].append(idx)

    ptr = [0] * n_clusters
    counts = [0] * n_clusters
    selected = []
    log2f = math.log2(feed_size)
    lam = float(lam)
    max_rel = float(max_rel)
    n = 0
    s0 = 0.0  # sum over feed clusters of count*log2(count)

    while n < feed_size:
        best_idx = -1
        best_obj = 0.0
        best_cluster = -1
        for c in range(n_clusters):
            if counts[c] >= cap:
                continue
            queue = queues[c]
            p = ptr[c]
            if p >= len(queue):
                continue
            cand = queue[p]
            old = counts[c]
            f_old = old * math.log2(old) if old > 0 else 0.0
            f_new = (old + 1) * math.log2(old + 1.0)
            h_new = math.log2(n + 1.0) - (s0 - f_old + f_new) / (n + 1.0)
            if log2f > 0.0:
                obj = lam * (h_new / log2f)
            else:
                obj = 0.0
            if max_rel > 0.0:
                obj = obj + (1.0 - lam) * (rels[cand] / max_rel)
            if best_idx < 0 or obj > best_obj or (obj == best_obj and cand < best_idx):
                best_idx = cand
                best_obj = obj
                best_cluster = c
        if best_idx < 0:
            break
        c = best_cluster
        old = counts[c]
        f_old = old * math.log2(old) if old > 0 else 0.0
        s0 = s0 - f_old + (old + 1) * math.log2(old + 1.0)
        counts[c] = old + 1
        ptr[c] += 1
        selected.append(best_idx)
        n += 1

    return np.asarray(selected, dtype=np.int64), n < feed_size


def leader_cluster(embeddings, tau):
    """Single-pass leader clustering over row-ordered unit embeddings.

    The first row founds cluster 0. Each later row joins the existing
    cluster whose leader has the highest cosine >= tau (ties go to the
    lowest cluster id), else founds a new cluster. A row byte-identical to
    an earlier row always receives that row's cluster.
    """
    emb = np.ascontiguousarray(embeddings, dtype=np.float64)
    n = emb.shape[0]
    out = np.empty(n, dtype=np.int64)
    if n == 0:
        return out
    dim = emb.shape[1]
    tau = float(tau)
    leaders: list[list[float]] = []
    seen: dict[bytes, int] = {}
    for i in range(n):
        key = emb[i].tobytes()
        hit = seen.get(key)
        if hit is not None:
            out[i] = hit
            continue
        row = emb[i].tolist()
        # sequential dot products so results are bit-identical to the C loop
        best = -2.0
        best_j = -1
        for j, lead in enumerate(leaders):
            s = 0.0
            for k in range(dim):
                s += lead[k] * row[k]
            if s > best:
                best = s
                best_j = j
        if best_j >= 0 and best >= tau:
            assigned = best_j
        else:
            assigned = len(leaders)
            leaders.append(row)
        out[i] = assigned
        seen[key] = assigned
    return out
