"""Stake-weighted governance: witness election and parameter proposals.

Witnesses are elected by approval voting weighted by staked EP: each
staker approves any number of candidates, every approval counts the
voter's full stake, and the top slots win with lexicographic tie-breaks.
Parameter changes go through proposals that pass when the yes-stake
strictly exceeds a threshold fraction of all staked EP, measured at the
deadline, and take effect at the start of the next tick.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

from .errors import (
    DuplicateProposal,
    NoStake,
    ProposalClosed,
    UnknownProposal,
)
from .ledger import Ledger
from .params import validate_param


@dataclass
class Proposal:
    id: int
    param: str
    new_value: object
    deadline: int
    votes: Dict[str, bool] = field(default_factory=dict)
    resolved: bool = False
    enacted: bool = False
    yes_stake: int = 0
    no_stake: int = 0


def elect_witnesses(approvals: Mapping[str, Tuple[str, ...]],
                    stakes: Mapping[str, int], count: int) -> List[str]:
    """Top candidates by approval stake; ties go to the smaller id.

    approvals maps voter id to the candidate ids they approve; each
    approval adds the voter's whole stake to the candidate's score.
    Voters with zero stake contribute nothing.
    """
    scores: Dict[str, int] = {}
    for voter in sorted(approvals):
        stake = stakes.get(voter, 0)
        for candidate in approvals[voter]:
            scores[candidate] = scores.get(candidate, 0) + stake
    ranked = sorted(scores.items(), key=lambda kv: (-kv[1], kv[0]))
    return [candidate for candidate, _ in ranked[:count]]


class Governance:
    """Approval book and proposal pipeline bound to a ledger."""

    def __init__(self) -> None:
        self.approvals: Dict[str, Tuple[str, ...]] = {}
        self.proposals: Dict[int, Proposal] = {}
        self._next_id = 0

    def approve_witnesses(self, ledger: Ledger, voter: str,
                          candidates) -> None:
        """Replace the voter's approval set. Empty clears it."""
        ledger.account(voter)
        unique = sorted(set(candidates))
        for candidate in unique:
            ledger.account(candidate)
        if unique:
            self.approvals[voter] = tuple(unique)
        else:
            self.approvals.pop(voter, None)

    def elect(self, ledger: Ledger, count: Optional[int] = None) -> List[str]:
        stakes = {aid: acct.ep for aid, acct in ledger.accounts.items()}
        if count is None:
            count = ledger.params.witness_count
        return elect_witnesses(self.approvals, stakes, count)

    def propose(self, ledger: Ledger, param: str, new_value,
                deadline: int, tick: int = 0) -> int:
        """Open a proposal to set one parameter. One live proposal per
        parameter at a time; the value is validated (and coerced) upfront."""
        if deadline < tick:
            raise ValueError("proposal deadline cannot be in the past")
        coerced = validate_param(param, new_value)
        for prop in self.proposals.values():
            if prop.param == param and not prop.resolved:
                raise DuplicateProposal(
                    f"parameter {param!r} already has an open proposal "
                    f"(id {prop.id})"
                )
        prop = Proposal(id=self._next_id, param=param, new_value=coerced,
                        deadline=deadline)
        self.proposals[prop.id] = prop
        self._next_id += 1
        return prop.id

    def vote(self, ledger: Ledger, voter: str, proposal_id: int,
             support: bool, tick: int) -> None:
        """Cast or change a vote. Stake is weighed at the deadline, not now,
        but only stakers may vote at all."""
        prop = self.proposals.get(proposal_id)
        if prop is None:
            raise UnknownProposal(f"no proposal with id {proposal_id}")
        if prop.resolved or tick > prop.deadline:
            raise ProposalClosed(f"proposal {proposal_id} is closed")
        acct = ledger.account(voter)
        if acct.ep <= 0:
            raise NoStake(f"{voter!r} has no staked EP")
        prop.votes[voter] = bool(support)

    def enact_due(self, ledger: Ledger, tick: int) -> List[Tuple[str, object, object]]:
        """Resolve every proposal whose deadline has passed.

        Call at the start of a tick: proposals with deadline < tick are
        tallied against current stakes, and winners take effect now, which
        makes enactment never retroactive for the deadline tick itself.
        Returns (param, old value, new value) for each enacted change.
        """
        changes: List[Tuple[str, object, object]] = []
        threshold = Fraction(ledger.params.proposal_threshold)
        for pid in sorted(self.proposals):
            prop = self.proposals[pid]
            if prop.resolved or prop.deadline >= tick:
                continue
            yes = 0
            no = 0
            for voter, support in prop.votes.items():
                acct = ledger.accounts.get(voter)
                stake = acct.ep if acct is not None else 0
                if support:
                    yes += stake
                else:
                    no += stake
            total = sum(acct.ep for acct in ledger.accounts.values())
            prop.yes_stake = yes
            prop.no_stake = no
            prop.resolved = True
            # exact comparison: yes/total > threshold, immune to rescaling
            if total > 0 and yes * threshold.denominator > threshold.numerator * total:
                old = getattr(ledger.params, prop.param)
                setattr(ledger.params, prop.param, prop.new_value)
                prop.enacted = True
                changes.append((prop.param, old, prop.new_value))
        return changes

    def canonical_state(self):
        props = []
        for pid in sorted(self.proposals):
            p = self.proposals[pid]
            props.append((
                p.id, p.param,
                float(p.new_value) if isinstance(p.new_value, float) else p.new_value,
                p.deadline, sorted(p.votes.items()), p.resolved, p.enacted,
                p.yes_stake, p.no_stake,
            ))
        approvals = sorted((v, list(c)) for v, c in self.approvals.items())
        return (self._next_id, approvals, props)
