"""Content lifecycle: publish, engage, expire, settle.

Content is mortal. Every item carries an expiry tick snapshotted from the
lifespan parameter at publication; engagement is only accepted inside the
[published_at, expires_at] window, and items whose window has passed are
settled: the epoch reward pool is split across them by engagement weight,
each item's share is split between its author and its voters, and top
performers earn their voters a reputation bump. Settled items leave the
registry entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

import numpy as np

from .errors import (
    DimensionMismatch,
    DuplicateEngagement,
    ExpiredContent,
    UnknownContent,
)
from .ledger import Ledger
from .params import ProtocolParams
from .recommender import compute_cluster_stats, relative_score
from .semantic import LeaderIndex, normalize
from .tokens import MICRO_PER_TOKEN

KIND_FACTORS = {"view": 0.1, "like": 1.0, "comment": 2.0, "share": 3.0}


@dataclass
class Engagement:
    voter: str
    kind: str
    tick: int
    weight: float


@dataclass
class ContentItem:
    id: int
    author: str
    published_at: int
    expires_at: int
    cluster: int
    label: Optional[str] = None
    embedding: Optional[np.ndarray] = None
    engagements: List[Engagement] = field(default_factory=list)
    total_weight: float = 0.0
    _kinds_seen: Set[Tuple[str, str]] = field(default_factory=set, repr=False)

    def live_at(self, tick: int) -> bool:
        return self.published_at <= tick <= self.expires_at


class ContentRegistry:
    """All live content plus the clustering state that outlives it.

    Embedding items are clustered against persistent leaders; label items
    form one cluster per distinct label. Both draw cluster ids from the
    same counter, in first-seen order.
    """

    def __init__(self, params: ProtocolParams, dim: Optional[int] = None):
        self.params = params
        self.dim = dim
        self._items: Dict[int, ContentItem] = {}
        self._next_id = 0
        self._next_cluster = 0
        self._labels: Dict[str, int] = {}
        self._leader_index = LeaderIndex(
            threshold=params.cluster_threshold,
            allocate=self._allocate_cluster,
            dim=dim,
        )

    def _allocate_cluster(self) -> int:
        cid = self._next_cluster
        self._next_cluster += 1
        return cid

    def __len__(self) -> int:
        return len(self._items)

    def publish(self, ledger: Ledger, author: str, tick: int,
                embedding=None, label: Optional[str] = None) -> int:
        """Register a new item; returns its content id."""
        ledger.account(author)
        if embedding is None and label is None:
            raise ValueError("content needs an embedding or a label")
        if embedding is not None and label is not None:
            raise ValueError("content cannot have both an embedding and a label")
        if label is not None:
            cluster = self._labels.get(label)
            if cluster is None:
                cluster = self._allocate_cluster()
                self._labels[label] = cluster
            unit = None
        else:
            unit = normalize(embedding)
            if self.dim is None:
                self.dim = unit.shape[0]
            elif unit.shape[0] != self.dim:
                raise DimensionMismatch(
                    f"expected embedding of dimension {self.dim}, "
                    f"got {unit.shape[0]}"
                )
            cluster = self._leader_index.assign(unit)
        item = ContentItem(
            id=self._next_id,
            author=author,
            published_at=tick,
            expires_at=tick + self.params.lifespan_ticks,
            cluster=cluster,
            label=label,
            embedding=unit,
        )
        self._items[item.id] = item
        self._next_id += 1
        return item.id

    def get(self, content_id: int) -> ContentItem:
        item = self._items.get(content_id)
        if item is None:
            raise UnknownContent(f"no live content with id {content_id}")
        return item

    def engage(self, ledger: Ledger, voter: str, content_id: int, kind: str,
               tick: int) -> float:
        """Record one engagement; returns the weight it contributed.

        Weight is staked whole EP times the voter's reputation times the
        kind factor. A voter may use each kind at most once per item.
        """
        if kind not in KIND_FACTORS:
            raise ValueError(f"unknown engagement kind {kind!r}")
        acct = ledger.account(voter)
        item = self.get(content_id)
        if not item.live_at(tick):
            raise ExpiredContent(
                f"content {content_id} is outside its engagement window "
                f"[{item.published_at}, {item.expires_at}] at tick {tick}"
            )
        key = (voter, kind)
        if key in item._kinds_seen:
            raise DuplicateEngagement(
                f"{voter!r} already used {kind!r} on content {content_id}"
            )
        weight = (acct.ep // MICRO_PER_TOKEN) * acct.reputation * KIND_FACTORS[kind]
        item._kinds_seen.add(key)
        item.engagements.append(
            Engagement(voter=voter, kind=kind, tick=tick, weight=weight)
        )
        item.total_weight += weight
        return weight

    def live_items(self, tick: int) -> List[ContentItem]:
        """Items inside their engagement window, in id order."""
        return [it for it in self._items.values() if it.live_at(tick)]

    def live_cluster_counts(self, tick: int) -> Dict[int, int]:
        counts: Dict[int, int] = {}
        for item in self._items.values():
            if item.live_at(tick):
                counts[item.cluster] = counts.get(item.cluster, 0) + 1
        return dict(sorted(counts.items()))

    def expired_items(self, tick: int) -> List[ContentItem]:
        """Items whose window closed before this tick, in id order."""
        return [it for it in self._items.values() if it.expires_at < tick]

    def remove(self, content_ids: Sequence[int]) -> None:
        for cid in content_ids:
            del self._items[cid]

    def label_clusters(self) -> Dict[str, int]:
        return dict(self._labels)

    def canonical_state(self):
        """Nested plain structure of registry state for hashing."""
        leaders = [
            (cid, np.ascontiguousarray(vec).tobytes())
            for cid, vec in self._leader_index.leader_vectors()
        ]
        labels = sorted(self._labels.items())
        items = []
        for cid in sorted(self._items):
            it = self._items[cid]
            items.append((
                it.id,
                it.author,
                it.published_at,
                it.expires_at,
                it.cluster,
                it.label,
                None if it.embedding is None
                else np.ascontiguousarray(it.embedding).tobytes(),
                it.total_weight,
                [(e.voter, e.kind, e.tick, e.weight) for e in it.engagements],
            ))
        return (self._next_id, self._next_cluster, labels, leaders, items)


def proportional_split(total: int, weights: Sequence[float],
                       remainder_to: int) -> List[int]:
    """Split an integer total by float weights without losing a unit.

    Float weights are lifted onto a common power-of-two integer grid via
    as_integer_ratio, so each share is an exact floor and the rounding
    remainder is explicit; it goes to the index given by remainder_to.
    """
    if total < 0:
        raise ValueError("cannot split a negative total")
    ratios = [float(w).as_integer_ratio() for w in weights]
    if any(num < 0 for num, _ in ratios):
        raise ValueError("weights must be non-negative")
    max_bits = max(den.bit_length() for _, den in ratios)
    # float denominators are powers of two, so these shifts are exact
    ints = [num << (max_bits - den.bit_length()) for num, den in ratios]
    grand = sum(ints)
    if grand == 0:
        raise ValueError("at least one weight must be positive")
    shares = [total * part // grand for part in ints]
    shares[remainder_to] += total - sum(shares)
    return shares


@dataclass
class SettlementReport:
    epoch: int
    pool: int
    payouts: Dict[str, int]
    closed_content: List[int]
    reputation_updates: Dict[str, float]


def settle_epoch(ledger: Ledger, registry: ContentRegistry,
                 tick: int) -> SettlementReport:
    """Settle every item whose engagement window closed before `tick`.

    The whole escrow pool is distributed when any closing item drew
    engagement; otherwise it rolls over untouched. Distribution happens in
    three exact integer layers: pool -> items by total weight, item share
    -> author fraction plus curator pool, curator pool -> voters by their
    weight on the item. Leftover micro-units from flooring go to the
    lowest-id item and the lexicographically smallest voter.

    Afterwards the top quarter of each cluster cohort (by relative score,
    ties to the lowest id) earns every distinct voter on those items a
    multiplicative reputation bump, capped at 100.
    """
    closing = registry.expired_items(tick)
    report = SettlementReport(
        epoch=ledger.epoch, pool=0, payouts={}, closed_content=[],
        reputation_updates={},
    )
    if not closing:
        return report
    report.closed_content = [it.id for it in closing]

    pool = ledger.escrow
    weights = [it.total_weight for it in closing]
    if pool > 0 and any(w > 0 for w in weights):
        first_engaged = next(i for i, w in enumerate(weights) if w > 0)
        item_shares = proportional_split(pool, weights, first_engaged)
        payouts = report.payouts
        for item, share in zip(closing, item_shares):
            if share == 0:
                continue
            author_cut = int(share * ledger.params.creator_split)
            author_cut = max(0, min(share, author_cut))
            curator_pool = share - author_cut
            if author_cut:
                payouts[item.author] = payouts.get(item.author, 0) + author_cut
            if curator_pool:
                voter_weights: Dict[str, float] = {}
                for e in item.engagements:
                    voter_weights[e.voter] = voter_weights.get(e.voter, 0.0) + e.weight
                voters = sorted(voter_weights)
                wlist = [voter_weights[v] for v in voters]
                first_voter = next(i for i, w in enumerate(wlist) if w > 0)
                voter_shares = proportional_split(curator_pool, wlist, first_voter)
                for voter, cut in zip(voters, voter_shares):
                    if cut:
                        payouts[voter] = payouts.get(voter, 0) + cut
        for account_id, amount in payouts.items():
            ledger.account(account_id).ept += amount
        ledger.escrow -= pool
        report.pool = pool

    _apply_reputation(ledger, closing, report)
    registry.remove(report.closed_content)
    return report


def _apply_reputation(ledger: Ledger, closing: Sequence[ContentItem],
                      report: SettlementReport) -> None:
    """Bump reputation of voters on each cluster cohort's top quartile."""
    alpha = ledger.params.reputation_bonus
    stats = compute_cluster_stats(closing)
    cohorts: Dict[int, List[ContentItem]] = {}
    for item in closing:
        cohorts.setdefault(item.cluster, []).append(item)
    winners: List[ContentItem] = []
    for cluster in sorted(cohorts):
        cohort = cohorts[cluster]
        ranked = sorted(
            cohort,
            key=lambda it: (-relative_score(it, stats[it.cluster]), it.id),
        )
        winners.extend(ranked[: math.ceil(len(cohort) / 4)])
    winners.sort(key=lambda it: it.id)
    for item in winners:
        for voter in sorted({e.voter for e in item.engagements}):
            acct = ledger.account(voter)
            acct.reputation = min(acct.reputation * (1.0 + alpha), 100.0)
            report.reputation_updates[voter] = acct.reputation
