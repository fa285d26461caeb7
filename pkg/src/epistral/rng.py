"""Deterministic per-agent randomness.

Every (seed, agent, tick) triple gets its own counter-based stream keyed
through BLAKE2b, so an agent's draws depend only on its own identity and
the tick, never on how many other agents exist or in what order they act.
"""

from __future__ import annotations

import hashlib
import math
from typing import Optional, Sequence


class AgentStream:
    """Counter-mode random stream for one agent at one tick."""

    def __init__(self, seed: int, agent_id: str, tag: str):
        material = f"{seed}|{agent_id}|{tag}".encode("utf-8")
        self._key = hashlib.blake2b(material, digest_size=32).digest()
        self._counter = 0

    def _u64(self) -> int:
        h = hashlib.blake2b(digest_size=8)
        h.update(self._key)
        h.update(self._counter.to_bytes(8, "little"))
        self._counter += 1
        return int.from_bytes(h.digest(), "little")

    def random(self) -> float:
        """Uniform float in [0, 1)."""
        return self._u64() / 2.0 ** 64

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n). Requires n > 0."""
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        # rejection sampling to keep the distribution exactly uniform
        limit = (2 ** 64 // n) * n
        while True:
            x = self._u64()
            if x < limit:
                return x % n

    def choice(self, items: Sequence):
        if not items:
            raise ValueError("cannot choose from an empty sequence")
        return items[self.randrange(len(items))]

    def normal(self) -> float:
        """Standard normal draw via Box-Muller."""
        u1 = (self._u64() + 1) / 2.0 ** 64  # (0, 1], keeps log finite
        u2 = self.random()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def normals(self, count: int) -> list:
        return [self.normal() for _ in range(count)]

    def weighted_choice(self, items: Sequence, weights: Sequence[float]):
        """Choose an item with probability proportional to its weight."""
        if len(items) != len(weights) or not items:
            raise ValueError("items and weights must be equal-length, non-empty")
        total = 0.0
        for w in weights:
            if w < 0:
                raise ValueError("weights must be non-negative")
            total += w
        if total <= 0:
            raise ValueError("total weight must be positive")
        r = self.random() * total
        acc = 0.0
        for item, w in zip(items, weights):
            acc += w
            if r < acc:
                return item
        return items[-1]


def stream_for(seed: int, agent_id: str, tick: Optional[int] = None,
               purpose: str = "") -> AgentStream:
    """Derive the canonical stream for an agent at a tick.

    With tick=None the stream is the agent's one-off initialization stream
    (used e.g. to draw a creator's home embedding before the run starts).
    """
    tag = "init" if tick is None else str(tick)
    if purpose:
        tag = f"{tag}|{purpose}"
    return AgentStream(seed, agent_id, tag)
