"""Scenario execution engine.

Each tick is one epoch and runs in a fixed phase order: enact due
governance, let agents act (publish and move capital), build feeds from
the live pool, let agents engage, mint the epoch reward, settle expired
content, then record metrics and a supply audit. Agents are always
iterated in id order and draw from their own (seed, agent, tick) streams,
so runs are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set

from . import economy, metrics
from .agents import BaseAgent, build_agent
from .errors import TooFewPoints
from .governance import Governance
from .ledger import Ledger, state_hash
from .lifecycle import ContentRegistry, SettlementReport, settle_epoch
from .recommender import Feed, build_feed, rank_pool
from .rng import stream_for
from .scenario import ScenarioConfig
from .economy import DebtBook, TxHistogram


@dataclass
class SupplyAudit:
    """One tick's conservation check: where every micro-EPT sits."""

    tick: int
    liquid_and_staked: int
    escrow: int
    reserve: int
    initial_supply: int
    reward_minted: int
    conversion_minted: int
    conversion_burned: int

    @property
    def held(self) -> int:
        return self.liquid_and_staked + self.escrow + self.reserve

    @property
    def issued(self) -> int:
        return (self.initial_supply + self.reward_minted
                + self.conversion_minted - self.conversion_burned)

    @property
    def discrepancy(self) -> int:
        return self.held - self.issued


@dataclass
class RunTrace:
    """Everything a finished run leaves behind."""

    records: List[metrics.MetricRecord] = field(default_factory=list)
    audits: List[SupplyAudit] = field(default_factory=list)
    feeds: List[List[Feed]] = field(default_factory=list)
    settlements: List[SettlementReport] = field(default_factory=list)
    witnesses: List[List[str]] = field(default_factory=list)
    final_hash: str = ""


class Simulation:
    """One scenario bound to fresh protocol state.

    Also serves as the world interface agents act through; the world
    methods keep the per-tick activity histogram honest by counting only
    operations that succeed.
    """

    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.ledger = Ledger(params=config.params)
        self.registry = ContentRegistry(self.ledger.params,
                                        dim=config.embedding_dim)
        self.debt = DebtBook()
        self.governance = Governance()
        self.trace = RunTrace()
        self._engaged: Dict[str, Set[int]] = {}
        self._hist = TxHistogram()
        self._price = config.price_at(0)

        for acct in config.initial_accounts:
            self.ledger.create_account(acct.id, acct.ept, acct.ep)
        self.agents: List[BaseAgent] = []
        for spec in config.agents:
            farm_content: List[int] = []
            peers = spec.agent_ids()
            for agent_id in peers:
                self.ledger.create_account(agent_id, spec.initial_ept,
                                           spec.initial_ep)
                self.agents.append(build_agent(
                    agent_id, spec, config.seed, config.embedding_dim,
                    farm_content=farm_content, peers=peers,
                ))
        self.agents.sort(key=lambda a: a.id)

    # --- world interface used by agents ---

    def account(self, account_id: str):
        return self.ledger.account(account_id)

    def publish(self, author: str, tick: int, embedding=None,
                label: Optional[str] = None) -> int:
        cid = self.registry.publish(self.ledger, author, tick,
                                    embedding=embedding, label=label)
        self._hist.publish += 1
        return cid

    def engage(self, voter: str, content_id: int, kind: str,
               tick: int) -> float:
        weight = self.registry.engage(self.ledger, voter, content_id, kind,
                                      tick)
        self._hist.engage += 1
        self._engaged.setdefault(voter, set()).add(content_id)
        return weight

    def transfer(self, src: str, dst: str, amount: int) -> None:
        self.ledger.transfer(src, dst, amount)
        self._hist.transfer += 1

    def stake(self, account_id: str, amount: int) -> None:
        self.ledger.stake(account_id, amount)
        self._hist.stake += 1

    def unstake(self, account_id: str, amount: int) -> None:
        self.ledger.unstake(account_id, amount)
        self._hist.stake += 1

    def convert_to_debt(self, account_id: str, ept_amount: int) -> int:
        return economy.convert_to_debt(self.ledger, self.debt, account_id,
                                       ept_amount, self._price)

    def convert_from_debt(self, account_id: str, epd_amount: int) -> int:
        return economy.convert_from_debt(self.ledger, self.debt, account_id,
                                         epd_amount, self._price)

    # --- tick loop ---

    def step(self, tick: int) -> None:
        self.ledger.epoch = tick
        self._price = self.config.price_at(tick)
        self._hist = TxHistogram()

        self.governance.enact_due(self.ledger, tick)

        for agent in self.agents:
            agent.act(self, tick, stream_for(self.config.seed, agent.id,
                                             tick, "act"))

        live = self.registry.live_items(tick)
        pool = rank_pool(live) if live else None
        tick_feeds: List[Feed] = []
        feeds_by_user: Dict[str, Feed] = {}
        if pool is not None:
            for agent in self.agents:
                if agent.wants_feed:
                    feed = build_feed(
                        (), agent.id, self.ledger.params,
                        engaged=self._engaged.get(agent.id, ()),
                        pool=pool,
                    )
                    tick_feeds.append(feed)
                    feeds_by_user[agent.id] = feed

        for agent in self.agents:
            agent.consume(self, tick, feeds_by_user.get(agent.id),
                          stream_for(self.config.seed, agent.id, tick,
                                     "consume"))

        diversity = economy.diversity_factor(
            self.registry.live_cluster_counts(tick).values())
        balance = economy.balance_factor(self._hist)
        minted = economy.mint_epoch(tick, diversity, balance,
                                    self.ledger.params)
        if minted:
            self.ledger.credit_escrow(minted, minted=True)

        report = settle_epoch(self.ledger, self.registry, tick)
        witnesses = self.governance.elect(self.ledger)

        self.trace.feeds.append(tick_feeds)
        self.trace.settlements.append(report)
        self.trace.witnesses.append(witnesses)
        self.trace.records.append(
            self._metric_record(tick, tick_feeds, report, minted))
        self.trace.audits.append(self._audit(tick))

    def run(self) -> RunTrace:
        for tick in range(self.config.ticks):
            self.step(tick)
        self.trace.final_hash = self.state_hash()
        return self.trace

    def state_hash(self) -> str:
        return state_hash(
            self.ledger,
            self.registry.canonical_state(),
            self.debt.canonical_state(),
            self.governance.canonical_state(),
        )

    # --- per-tick reporting ---

    def _metric_record(self, tick: int, feeds: List[Feed],
                       report: SettlementReport,
                       minted: int) -> metrics.MetricRecord:
        if feeds:
            mean_entropy = sum(f.achieved_entropy for f in feeds) / len(feeds)
        else:
            mean_entropy = 0.0

        payout_gini = (metrics.gini(sorted(report.payouts.values()))
                       if report.payouts else 0.0)

        holdings = sorted(a.ept + a.ep for a in self.ledger.iter_accounts()
                          if a.ept + a.ep > 0)
        try:
            zipf = metrics.zipf_exponent(holdings)
        except TooFewPoints:
            zipf = None

        share = 0.0
        for feed in feeds:
            if feed.items:
                top = max(feed.per_cluster_counts.values())
                share = max(share, top / len(feed.items))

        supply = economy.total_ept_in_existence(self.ledger, self.debt)
        ratio = min(economy.debt_ratio(self.debt, self._price, supply), 1.0)
        return metrics.MetricRecord(
            tick=tick,
            mean_feed_entropy=mean_entropy,
            payout_gini=payout_gini,
            holdings_zipf_exponent=zipf,
            max_cluster_feed_share=share,
            minted=minted,
            total_supply=supply,
            debt_ratio=ratio,
        )

    def _audit(self, tick: int) -> SupplyAudit:
        return SupplyAudit(
            tick=tick,
            liquid_and_staked=self.ledger.liquid_and_staked(),
            escrow=self.ledger.escrow,
            reserve=self.debt.reserve,
            initial_supply=self.ledger.initial_supply,
            reward_minted=self.ledger.reward_minted,
            conversion_minted=self.debt.conversion_minted,
            conversion_burned=self.debt.conversion_burned,
        )


def run_scenario(config: ScenarioConfig) -> RunTrace:
    """Convenience wrapper: build a Simulation and run it to completion."""
    return Simulation(config).run()
