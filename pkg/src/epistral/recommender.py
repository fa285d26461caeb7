"""Feed construction: relative scoring and entropy-targeted greedy fill.

Feeds blend two normalized terms per candidate: the feed entropy achieved
if the candidate were added, and the candidate's relative score. Relative
means neighborhood-local: an item's raw engagement weight is divided by
(1 + mean weight of its cluster), so popularity only counts against peers
competing for the same attention, not globally.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import ClusterMismatch
from .params import ProtocolParams
from .semantic import feed_entropy


@dataclass
class ClusterStats:
    cluster_id: int
    member_count: int
    mean_weight: float


def compute_cluster_stats(items: Sequence) -> Dict[int, ClusterStats]:
    """Per-cluster member counts and mean engagement weights.

    Items need .cluster and .total_weight; they must be in id order so the
    float accumulation order is reproducible.
    """
    sums: Dict[int, float] = {}
    counts: Dict[int, int] = {}
    for item in items:
        c = item.cluster
        sums[c] = sums.get(c, 0.0) + item.total_weight
        counts[c] = counts.get(c, 0) + 1
    return {
        c: ClusterStats(cluster_id=c, member_count=counts[c],
                        mean_weight=sums[c] / counts[c])
        for c in sums
    }


def relative_score(item, stats: ClusterStats) -> float:
    """Engagement weight relative to the item's own cluster."""
    if item.cluster != stats.cluster_id:
        raise ClusterMismatch(
            f"item {item.id} is in cluster {item.cluster}, "
            f"stats are for cluster {stats.cluster_id}"
        )
    return item.total_weight / (1.0 + stats.mean_weight)


def cluster_cap(params: ProtocolParams) -> int:
    """Hard per-cluster item limit for one feed.

    The product is rounded before ceil so caps like 0.1 * 30 do not pick
    up an extra slot from float representation error.
    """
    return math.ceil(round(params.cap_frac * params.feed_size, 9))


@dataclass
class RankedPool:
    """Candidate pool preprocessed for feed building.

    Arrays are aligned and ordered by ascending content id. `order` lists
    candidate positions in champion-walk order: by descending relative
    score, ties by ascending position. The same pool can serve every user
    in a tick; only exclusions differ.
    """

    ids: np.ndarray
    clusters: np.ndarray
    rels: np.ndarray
    authors: np.ndarray
    cluster_ids: List[int]
    order: np.ndarray
    max_rel: float

    @property
    def n_clusters(self) -> int:
        return len(self.cluster_ids)

    def __len__(self) -> int:
        return int(self.ids.shape[0])


def rank_pool(items: Sequence) -> RankedPool:
    """Preprocess live items (any order) into a RankedPool."""
    ordered = sorted(items, key=lambda it: it.id)
    n = len(ordered)
    ids = np.fromiter((it.id for it in ordered), dtype=np.int64, count=n)
    authors = np.asarray([it.author for it in ordered], dtype=np.str_)

    dense: Dict[int, int] = {}
    cluster_ids: List[int] = []
    clusters = np.empty(n, dtype=np.int64)
    for pos, item in enumerate(ordered):
        d = dense.get(item.cluster)
        if d is None:
            d = len(cluster_ids)
            dense[item.cluster] = d
            cluster_ids.append(item.cluster)
        clusters[pos] = d

    weights = np.fromiter((it.total_weight for it in ordered),
                          dtype=np.float64, count=n)
    n_clusters = len(cluster_ids)
    sums = np.zeros(n_clusters, dtype=np.float64)
    counts = np.zeros(n_clusters, dtype=np.int64)
    np.add.at(sums, clusters, weights)
    np.add.at(counts, clusters, 1)
    means = sums / np.maximum(counts, 1)
    rels = weights / (1.0 + means[clusters])
    max_rel = float(rels.max()) if n else 0.0
    order = np.lexsort((np.arange(n), -rels))
    return RankedPool(ids=ids, clusters=clusters, rels=rels, authors=authors,
                      cluster_ids=cluster_ids, order=order, max_rel=max_rel)


@dataclass
class Feed:
    user: str
    items: List[int]
    per_cluster_counts: Dict[int, int]
    achieved_entropy: float
    truncated: bool


def build_feed(items: Sequence, user: str, params: ProtocolParams,
               engaged: Iterable[int] = (),
               pool: Optional[RankedPool] = None) -> Feed:
    """Greedily fill one user's feed from the candidate pool.

    Each step picks the candidate maximizing

        diversity_weight * H(feed + candidate) / log2(feed_size)
        + (1 - diversity_weight) * rel(candidate) / max_rel(pool)

    subject to the per-cluster cap, ties broken by lowest content id. Only
    each cluster's current best candidate can ever win a step, so the scan
    is over clusters, not the whole pool. The user's own items and items
    they already engaged with are excluded. `truncated` is set when the
    pool cannot fill the feed under the cap.
    """
    if pool is None:
        pool = rank_pool(items)
    n = len(pool)
    if n:
        excluded = pool.authors == user
        engaged_set = set(engaged)
        if engaged_set:
            targets = np.fromiter(engaged_set, dtype=np.int64,
                                  count=len(engaged_set))
            excluded = excluded | np.isin(pool.ids, targets)
        excluded = excluded.astype(np.uint8)
    else:
        excluded = np.zeros(0, dtype=np.uint8)

    # When the relevance term is absent (pure diversity, or a dead pool)
    # every candidate in a cluster scores the same, so the walk must visit
    # them by ascending id for the tie-break to hold.
    use_rel = params.diversity_weight < 1.0 and pool.max_rel > 0.0
    order = pool.order if use_rel else np.arange(n, dtype=np.int64)

    selected, truncated = _kernels.greedy_select(
        order, pool.clusters, pool.rels, excluded,
        pool.n_clusters, params.feed_size, cluster_cap(params),
        params.diversity_weight, pool.max_rel,
    )
    item_ids = [int(pool.ids[pos]) for pos in selected]
    cluster_counts = Counter(pool.cluster_ids[int(pool.clusters[pos])]
                             for pos in selected)
    achieved = feed_entropy(cluster_counts.values())
    return Feed(user=user, items=item_ids,
                per_cluster_counts=dict(sorted(cluster_counts.items())),
                achieved_entropy=achieved, truncated=bool(truncated))
