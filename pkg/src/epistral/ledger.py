"""Account ledger: balances, staking, and deterministic state hashing.

All balances are integer micro-tokens. EPT is the liquid transferable
token, EP is staked (non-transferable, carries voting and engagement
weight), EPD is the debt token. Reputation is a float multiplier on
engagement weight, clamped to [0, 100].
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, replace
from typing import Dict, Iterator, Optional

from .errors import DuplicateAccount, InsufficientBalance, UnknownAccount
from .params import PARAM_NAMES, ProtocolParams


@dataclass
class Account:
    id: str
    ept: int = 0
    ep: int = 0
    epd: int = 0
    reputation: float = 1.0


class Ledger:
    """Balances plus the supply-side bookkeeping needed for exact audits.

    initial_supply tracks tokens seeded at account creation, reward_minted
    tracks tokens minted into the reward escrow. Together with the debt
    book's conversion counters they make total supply fully accountable.
    """

    def __init__(self, params: Optional[ProtocolParams] = None):
        self.accounts: Dict[str, Account] = {}
        self.params = params if params is not None else ProtocolParams()
        self.epoch = 0
        self.initial_supply = 0
        self.reward_minted = 0
        self.escrow = 0

    def create_account(self, account_id: str, initial_ept: int = 0,
                       initial_ep: int = 0) -> Account:
        if not account_id:
            raise ValueError("account id must be a non-empty string")
        if account_id in self.accounts:
            raise DuplicateAccount(f"account {account_id!r} already exists")
        if initial_ept < 0 or initial_ep < 0:
            raise ValueError("initial balances must be non-negative")
        acct = Account(id=account_id, ept=initial_ept, ep=initial_ep)
        self.accounts[account_id] = acct
        self.initial_supply += initial_ept + initial_ep
        return acct

    def account(self, account_id: str) -> Account:
        acct = self.accounts.get(account_id)
        if acct is None:
            raise UnknownAccount(f"no account {account_id!r}")
        return acct

    def transfer(self, src: str, dst: str, amount: int) -> None:
        if amount < 0:
            raise ValueError("transfer amount must be non-negative")
        a = self.account(src)
        b = self.account(dst)
        if a.ept < amount:
            raise InsufficientBalance(
                f"{src!r} holds {a.ept} micro-EPT, needs {amount}"
            )
        a.ept -= amount
        b.ept += amount

    def stake(self, account_id: str, amount: int) -> None:
        if amount < 0:
            raise ValueError("stake amount must be non-negative")
        acct = self.account(account_id)
        if acct.ept < amount:
            raise InsufficientBalance(
                f"{account_id!r} holds {acct.ept} micro-EPT, needs {amount}"
            )
        acct.ept -= amount
        acct.ep += amount

    def unstake(self, account_id: str, amount: int) -> None:
        if amount < 0:
            raise ValueError("unstake amount must be non-negative")
        acct = self.account(account_id)
        if acct.ep < amount:
            raise InsufficientBalance(
                f"{account_id!r} has {acct.ep} micro-EP staked, needs {amount}"
            )
        acct.ep -= amount
        acct.ept += amount

    def credit_escrow(self, amount: int, minted: bool) -> None:
        """Add tokens to the reward escrow, recording where they came from."""
        if amount < 0:
            raise ValueError("escrow credit must be non-negative")
        self.escrow += amount
        if minted:
            self.reward_minted += amount
        else:
            self.initial_supply += amount

    def liquid_and_staked(self) -> int:
        return sum(a.ept + a.ep for a in self.accounts.values())

    def iter_accounts(self) -> Iterator[Account]:
        for account_id in sorted(self.accounts):
            yield self.accounts[account_id]

    def snapshot_params(self) -> ProtocolParams:
        return replace(self.params)


class _Hasher:
    """Canonical, type-tagged, length-delimited encoder feeding SHA-256."""

    def __init__(self) -> None:
        self._h = hashlib.sha256()

    def add(self, obj) -> None:
        h = self._h
        if obj is None:
            h.update(b"n")
        elif isinstance(obj, bool):
            h.update(b"t" if obj else b"u")
        elif isinstance(obj, int):
            h.update(b"i")
            h.update(obj.to_bytes(16, "little", signed=True))
        elif isinstance(obj, float):
            h.update(b"f")
            h.update(struct.pack("<d", obj))
        elif isinstance(obj, str):
            raw = obj.encode("utf-8")
            h.update(b"s")
            h.update(len(raw).to_bytes(8, "little"))
            h.update(raw)
        elif isinstance(obj, bytes):
            h.update(b"b")
            h.update(len(obj).to_bytes(8, "little"))
            h.update(obj)
        elif isinstance(obj, (list, tuple)):
            h.update(b"l")
            h.update(len(obj).to_bytes(8, "little"))
            for part in obj:
                self.add(part)
        else:
            raise TypeError(f"cannot canonically hash {type(obj).__name__}")

    def hexdigest(self) -> str:
        return self._h.hexdigest()


def state_hash(ledger: Ledger, *components) -> str:
    """SHA-256 over the canonical encoding of the full protocol state.

    Accounts are encoded in sorted id order, parameters in their declared
    order, so two equal states always hash identically regardless of how
    they were reached. Extra components (content registry, debt book,
    governance) are appended as canonical nested structures.
    """
    enc = _Hasher()
    enc.add("epistral-state-v1")
    enc.add(ledger.epoch)
    enc.add([getattr(ledger.params, name) for name in PARAM_NAMES])
    enc.add(
        [
            (a.id, a.ept, a.ep, a.epd, a.reputation)
            for a in ledger.iter_accounts()
        ]
    )
    enc.add(ledger.initial_supply)
    enc.add(ledger.reward_minted)
    enc.add(ledger.escrow)
    enc.add(len(components))
    for component in components:
        enc.add(component)
    return enc.hexdigest()
