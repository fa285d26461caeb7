"""Token economics: diversity-scaled minting and the EPD debt token.

Epoch rewards are minted against two health factors in [0, 1]: how evenly
live content spreads across clusters, and how balanced the mix of activity
kinds was during the epoch. Both are normalized Shannon entropies, so a
monoculture (one cluster, or one transaction kind) mints nothing.

EPD is an IOU against escrowed EPT. Converting to debt locks EPT in a
reserve and issues EPD at the oracle price; converting back redeems from
that reserve first and only mints the shortfall when the price moved
against the reserve. Outstanding debt value is capped at a fraction of all
EPT in existence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import DebtCapExceeded, InsufficientBalance
from .ledger import Ledger
from .params import ProtocolParams
from .semantic import feed_entropy


@dataclass
class TxHistogram:
    """Counts of the four activity kinds within one epoch."""

    publish: int = 0
    engage: int = 0
    transfer: int = 0
    stake: int = 0

    def counts(self) -> tuple:
        return (self.publish, self.engage, self.transfer, self.stake)

    def total(self) -> int:
        return sum(self.counts())


def diversity_factor(cluster_counts: Iterable[int]) -> float:
    """Normalized entropy of live content across clusters, in [0, 1].

    Fewer than two occupied clusters yields 0: rewarding a monoculture is
    exactly what the mint is designed not to do.
    """
    occupied = [c for c in cluster_counts if c > 0]
    k = len(occupied)
    if k <= 1:
        return 0.0
    return feed_entropy(occupied) / math.log2(k)


def balance_factor(hist: TxHistogram) -> float:
    """Normalized entropy of the epoch's activity mix, in [0, 1]."""
    if hist.total() <= 0:
        return 0.0
    return feed_entropy(hist.counts()) / 2.0


def mint_epoch(epoch: int, diversity: float, balance: float,
               params: ProtocolParams) -> int:
    """Micro-EPT minted for one epoch.

    base_mint decays geometrically with the epoch index and is scaled by
    both health factors; the product is rounded to the nearest micro-unit.
    """
    if epoch < 0:
        raise ValueError("epoch must be non-negative")
    if not 0.0 <= diversity <= 1.0:
        raise ValueError("diversity factor must lie in [0, 1]")
    if not 0.0 <= balance <= 1.0:
        raise ValueError("balance factor must lie in [0, 1]")
    return round(params.base_mint * params.mint_decay ** epoch
                 * diversity * balance)


@dataclass
class DebtBook:
    """Aggregate EPD state: what is owed and what backs it."""

    epd_outstanding: int = 0
    reserve: int = 0
    conversion_minted: int = 0
    conversion_burned: int = 0

    def canonical_state(self):
        return (self.epd_outstanding, self.reserve,
                self.conversion_minted, self.conversion_burned)


def total_ept_in_existence(ledger: Ledger, debt: DebtBook) -> int:
    """All micro-EPT anywhere: balances, stake, escrow, debt reserve."""
    return ledger.liquid_and_staked() + ledger.escrow + debt.reserve


def debt_ratio(debt: DebtBook, price: float, total_supply: int) -> float:
    """Value of outstanding EPD relative to all EPT in existence."""
    if total_supply <= 0:
        return 0.0
    return debt.epd_outstanding * price / total_supply


def convert_to_debt(ledger: Ledger, debt: DebtBook, account_id: str,
                    ept_amount: int, price: float) -> int:
    """Escrow EPT into the reserve and issue EPD at the oracle price.

    Returns the micro-EPD credited (floor of amount / price). Rejected
    with DebtCapExceeded when the post-conversion debt value would exceed
    the cap fraction of all EPT in existence; balances are untouched in
    that case.
    """
    if ept_amount < 0:
        raise ValueError("conversion amount must be non-negative")
    if not price > 0.0 or not math.isfinite(price):
        raise ValueError("price must be positive and finite")
    acct = ledger.account(account_id)
    if acct.ept < ept_amount:
        raise InsufficientBalance(
            f"{account_id!r} holds {acct.ept} micro-EPT, needs {ept_amount}"
        )
    epd_issued = math.floor(ept_amount / price)
    new_outstanding = debt.epd_outstanding + epd_issued
    # the EPT only moves into the reserve, so total supply is unchanged
    supply = total_ept_in_existence(ledger, debt)
    if new_outstanding * price > ledger.params.debt_ratio_cap * supply:
        raise DebtCapExceeded(
            f"conversion would put debt value above "
            f"{ledger.params.debt_ratio_cap:g} of total supply"
        )
    acct.ept -= ept_amount
    debt.reserve += ept_amount
    acct.epd += epd_issued
    debt.epd_outstanding = new_outstanding
    return epd_issued


def convert_from_debt(ledger: Ledger, debt: DebtBook, account_id: str,
                      epd_amount: int, price: float) -> int:
    """Redeem EPD for EPT at the oracle price.

    Returns the micro-EPT credited (floor of amount * price), paid from
    the reserve first; any shortfall is newly minted. When the last EPD is
    redeemed, whatever remains in the reserve is burned so stale backing
    cannot accumulate.
    """
    if epd_amount < 0:
        raise ValueError("conversion amount must be non-negative")
    if not price > 0.0 or not math.isfinite(price):
        raise ValueError("price must be positive and finite")
    acct = ledger.account(account_id)
    if acct.epd < epd_amount:
        raise InsufficientBalance(
            f"{account_id!r} holds {acct.epd} micro-EPD, needs {epd_amount}"
        )
    ept_due = math.floor(epd_amount * price)
    from_reserve = min(ept_due, debt.reserve)
    shortfall = ept_due - from_reserve
    debt.reserve -= from_reserve
    debt.conversion_minted += shortfall
    acct.epd -= epd_amount
    debt.epd_outstanding -= epd_amount
    acct.ept += ept_due
    if debt.epd_outstanding == 0 and debt.reserve > 0:
        debt.conversion_burned += debt.reserve
        debt.reserve = 0
    return ept_due
