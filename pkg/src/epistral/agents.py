"""Agent archetypes driving scenario runs.

Each agent owns a per-tick random stream derived from (seed, agent id,
tick), so behavior never depends on how many other agents exist or in
which order the engine iterates them. Agents talk to the world through a
narrow interface provided by the engine: publish, engage, transfer, stake,
unstake, and the two debt conversions.
"""

from __future__ import annotations

from typing import List, Optional

import numpy as np

from .errors import (
    DebtCapExceeded,
    DuplicateEngagement,
    ExpiredContent,
    UnknownContent,
)
from .rng import AgentStream, stream_for
from .scenario import AgentSpec
from .semantic import normalize


class BaseAgent:
    """Shared plumbing; concrete archetypes override act() and consume()."""

    wants_feed = False

    def __init__(self, agent_id: str, spec: AgentSpec):
        self.id = agent_id
        self.spec = spec

    def act(self, world, tick: int, stream: AgentStream) -> None:
        """Publication and capital moves, before feeds are built."""

    def consume(self, world, tick: int, feed, stream: AgentStream) -> None:
        """Engagement, after feeds are built. feed is None unless
        wants_feed is set."""


def _draw_embedding(center: np.ndarray, noise: float,
                    stream: AgentStream) -> np.ndarray:
    if noise <= 0.0:
        return center
    offsets = np.asarray(stream.normals(center.shape[0]), dtype=np.float64)
    return normalize(center + noise * offsets)


class CreatorAgent(BaseAgent):
    """Publishes content around a home point in embedding or label space."""

    def __init__(self, agent_id: str, spec: AgentSpec, seed: int, dim: int):
        super().__init__(agent_id, spec)
        self.label = spec.label
        self.center: Optional[np.ndarray] = None
        if self.label is None:
            if spec.embedding_center is not None:
                self.center = normalize(np.asarray(spec.embedding_center,
                                                   dtype=np.float64))
            else:
                # a home direction of its own, fixed before the run starts
                init = stream_for(seed, agent_id, None)
                self.center = normalize(
                    np.asarray(init.normals(dim), dtype=np.float64))

    def act(self, world, tick: int, stream: AgentStream) -> None:
        if self.spec.publish_ticks is not None and tick >= self.spec.publish_ticks:
            return
        for _ in range(self.spec.posts_per_tick):
            if self.label is not None:
                world.publish(self.id, tick, label=self.label)
            else:
                emb = _draw_embedding(self.center, self.spec.embedding_noise,
                                      stream)
                world.publish(self.id, tick, embedding=emb)


class ConsumerAgent(BaseAgent):
    """Scrolls its feed and engages with items at a fixed rate."""

    wants_feed = True

    def consume(self, world, tick: int, feed, stream: AgentStream) -> None:
        if feed is None:
            return
        kinds = sorted(self.spec.kind_weights)
        weights = [self.spec.kind_weights[k] for k in kinds]
        for content_id in feed.items:
            if stream.random() < self.spec.engage_rate:
                kind = stream.weighted_choice(kinds, weights)
                world.engage(self.id, content_id, kind, tick)


class CuratorAgent(ConsumerAgent):
    """A consumer with a heavier, more deliberate engagement profile.

    The behavioral differences (higher engage rate, comment/share-leaning
    kind mix) come entirely from the archetype defaults in the scenario
    schema.
    """


class BotFarmAgent(BaseAgent):
    """Coordinated spam: floods one niche and cross-engages farm content.

    All bots in a farm publish near the same target and engage only with
    content published by the farm itself, modeling a mutual-amplification
    ring. Engagements that bounce (duplicate kind, expired or settled
    content) are simply skipped; the farm does not adapt.
    """

    def __init__(self, agent_id: str, spec: AgentSpec,
                 farm_content: List[int]):
        super().__init__(agent_id, spec)
        self.farm_content = farm_content
        self.center: Optional[np.ndarray] = None
        if spec.embedding_center is not None:
            self.center = normalize(np.asarray(spec.embedding_center,
                                               dtype=np.float64))

    def act(self, world, tick: int, stream: AgentStream) -> None:
        if self.spec.publish_ticks is not None and tick >= self.spec.publish_ticks:
            return
        for _ in range(self.spec.posts_per_tick):
            if self.spec.target_label is not None:
                cid = world.publish(self.id, tick,
                                    label=self.spec.target_label)
            else:
                emb = _draw_embedding(self.center, self.spec.embedding_noise,
                                      stream)
                cid = world.publish(self.id, tick, embedding=emb)
            self.farm_content.append(cid)

    def consume(self, world, tick: int, feed, stream: AgentStream) -> None:
        if not self.farm_content:
            return
        kinds = sorted(self.spec.kind_weights)
        weights = [self.spec.kind_weights[k] for k in kinds]
        for _ in range(self.spec.engagements_per_tick):
            content_id = self.farm_content[
                stream.randrange(len(self.farm_content))]
            kind = stream.weighted_choice(kinds, weights)
            try:
                world.engage(self.id, content_id, kind, tick)
            except (DuplicateEngagement, ExpiredContent, UnknownContent):
                continue


class CapitalOnlyAgent(BaseAgent):
    """Moves tokens but never touches content.

    Runs a fixed four-tick rotation (stake, unstake, convert to debt,
    redeem all debt) plus a transfer to the next agent in its own group.
    Everything is deterministic; the random stream is unused, so these
    agents cannot perturb anyone else's draws. Moves that cannot be
    afforded, and conversions blocked by the debt cap, are skipped.
    """

    def __init__(self, agent_id: str, spec: AgentSpec, peers: List[str]):
        super().__init__(agent_id, spec)
        my_index = peers.index(agent_id)
        self.partner = peers[(my_index + 1) % len(peers)]

    def act(self, world, tick: int, stream: AgentStream) -> None:
        acct = world.account(self.id)
        phase = tick % 4
        if phase == 0:
            if self.spec.stake_tokens and acct.ept >= self.spec.stake_tokens:
                world.stake(self.id, self.spec.stake_tokens)
        elif phase == 1:
            if self.spec.stake_tokens and acct.ep >= self.spec.stake_tokens:
                world.unstake(self.id, self.spec.stake_tokens)
        elif phase == 2:
            if self.spec.convert_tokens and acct.ept >= self.spec.convert_tokens:
                try:
                    world.convert_to_debt(self.id, self.spec.convert_tokens)
                except DebtCapExceeded:
                    pass
        else:
            if acct.epd > 0:
                world.convert_from_debt(self.id, acct.epd)
        if (self.partner != self.id and self.spec.transfer_tokens
                and acct.ept >= self.spec.transfer_tokens):
            world.transfer(self.id, self.partner, self.spec.transfer_tokens)


def build_agent(agent_id: str, spec: AgentSpec, seed: int, dim: int,
                farm_content: Optional[List[int]] = None,
                peers: Optional[List[str]] = None) -> BaseAgent:
    if spec.archetype == "creator":
        return CreatorAgent(agent_id, spec, seed, dim)
    if spec.archetype == "consumer":
        return ConsumerAgent(agent_id, spec)
    if spec.archetype == "curator":
        return CuratorAgent(agent_id, spec)
    if spec.archetype == "bot_farm":
        return BotFarmAgent(agent_id, spec, farm_content if farm_content
                            is not None else [])
    if spec.archetype == "capital_only":
        return CapitalOnlyAgent(agent_id, spec,
                                peers if peers else [agent_id])
    raise ValueError(f"unknown archetype {spec.archetype!r}")
