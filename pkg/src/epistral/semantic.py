"""Embedding space: cosine similarity, leader clustering, entropy.

Content lives either in a continuous embedding space (unit vectors grouped
by single-pass leader clustering) or in a discrete label space where each
distinct label is its own cluster. This module covers the continuous side
plus the Shannon entropy helper shared by feeds and minting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import DimensionMismatch


def normalize(vector) -> np.ndarray:
    """Return the vector scaled to unit L2 norm as a float64 array."""
    arr = np.ascontiguousarray(vector, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("embedding must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise ValueError("embedding contains non-finite values")
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return arr / norm


def cosine(a, b) -> float:
    """Cosine similarity of two vectors, clamped to [-1, 1]."""
    va = np.ascontiguousarray(a, dtype=np.float64)
    vb = np.ascontiguousarray(b, dtype=np.float64)
    if va.shape != vb.shape:
        raise DimensionMismatch(
            f"cannot compare vectors of shapes {va.shape} and {vb.shape}"
        )
    na = float(np.linalg.norm(va))
    nb = float(np.linalg.norm(vb))
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine undefined for zero vectors")
    sim = float(np.dot(va, vb)) / (na * nb)
    return max(-1.0, min(1.0, sim))


def feed_entropy(counts: Iterable[float]) -> float:
    """Shannon entropy in bits of a multiset given per-group counts.

    Zero counts are skipped. Returns 0.0 when the total is <= 1 (a single
    item, or nothing at all, carries no diversity).
    """
    total = 0.0
    nonzero: List[float] = []
    for c in counts:
        if c < 0:
            raise ValueError("counts must be non-negative")
        if c > 0:
            nonzero.append(c)
            total += c
    if total <= 1.0:
        return 0.0
    h = 0.0
    for c in nonzero:
        p = c / total
        h -= p * math.log2(p)
    return h


@dataclass
class ClusterAssignment:
    """Result of bulk leader clustering.

    by_item maps input position to cluster id; leaders maps cluster id to
    the input position of the row that founded it.
    """

    by_item: List[int]
    leaders: Dict[int, int]

    @property
    def n_clusters(self) -> int:
        return len(self.leaders)


def assign_clusters(embeddings, threshold: float) -> ClusterAssignment:
    """Cluster rows of an (n, d) array with single-pass leader clustering.

    Rows are processed in order: the first founds cluster 0, each later row
    joins the cluster whose leader is most similar if that similarity
    reaches the threshold (ties to the lowest cluster id), else founds the
    next cluster. Rows must already be unit-normalized so the dot product
    is the cosine.
    """
    arr = np.ascontiguousarray(embeddings, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D array of embeddings")
    ids = _kernels.leader_cluster(arr, float(threshold))
    by_item = [int(c) for c in ids]
    leaders: Dict[int, int] = {}
    for pos, cid in enumerate(by_item):
        if cid not in leaders:
            leaders[cid] = pos
    return ClusterAssignment(by_item=by_item, leaders=leaders)


@dataclass
class LeaderIndex:
    """Incremental leader clustering with externally allocated cluster ids.

    The content registry shares one id counter between embedding clusters
    and label clusters, so this index asks the caller for fresh ids via
    `allocate`. Assignment order matters and must follow content id order
    to reproduce the bulk result of assign_clusters.
    """

    threshold: float
    allocate: Callable[[], int]
    dim: Optional[int] = None
    _leaders: List[List[float]] = field(default_factory=list)
    _leader_ids: List[int] = field(default_factory=list)
    _seen: Dict[bytes, int] = field(default_factory=dict)

    def assign(self, embedding: np.ndarray) -> int:
        """Assign a unit embedding to a cluster, founding one if needed."""
        arr = np.ascontiguousarray(embedding, dtype=np.float64)
        if self.dim is None:
            self.dim = arr.shape[0]
        elif arr.shape[0] != self.dim:
            raise DimensionMismatch(
                f"expected embedding of dimension {self.dim}, got {arr.shape[0]}"
            )
        key = arr.tobytes()
        hit = self._seen.get(key)
        if hit is not None:
            return hit
        row = arr.tolist()
        dim = len(row)
        # same sequential scan as the bulk kernels, for identical ties
        best = -2.0
        best_j = -1
        for j, lead in enumerate(self._leaders):
            s = 0.0
            for k in range(dim):
                s += lead[k] * row[k]
            if s > best:
                best = s
                best_j = j
        if best_j >= 0 and best >= self.threshold:
            cid = self._leader_ids[best_j]
        else:
            cid = self.allocate()
            self._leaders.append(row)
            self._leader_ids.append(cid)
        self._seen[key] = cid
        return cid

    def leader_vectors(self) -> List[Tuple[int, np.ndarray]]:
        """(cluster id, leader embedding) pairs in founding order."""
        return [
            (cid, np.asarray(vec, dtype=np.float64))
            for cid, vec in zip(self._leader_ids, self._leaders)
        ]


def cluster_sequence(
    items: Sequence[Tuple[int, np.ndarray]], threshold: float
) -> Dict[int, int]:
    """Cluster (item id, embedding) pairs; returns item id -> cluster id.

    Pairs must be sorted by item id so the founding order is reproducible.
    """
    if not items:
        return {}
    arr = np.stack([emb for _, emb in items]).astype(np.float64)
    assignment = assign_clusters(arr, threshold)
    return {item_id: assignment.by_item[pos] for pos, (item_id, _) in enumerate(items)}
