"""Minting factors and the debt token reserve."""

from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epistral import (
    DebtBook,
    Ledger,
    ProtocolParams,
    TxHistogram,
    balance_factor,
    convert_from_debt,
    convert_to_debt,
    debt_ratio,
    diversity_factor,
    mint_epoch,
    tokens,
    total_ept_in_existence,
)
from epistral.errors import DebtCapExceeded, InsufficientBalance


def entropy_oracle(counts):
    total = sum(counts)
    if total <= 0:
        return 0.0
    return -sum((c / total) * math.log2(c / total) for c in counts if c > 0)


class TestDiversityFactor:
    def test_uniform_is_one(self):
        assert diversity_factor([7, 7, 7, 7]) == pytest.approx(1.0)

    def test_single_cluster_is_zero(self):
        assert diversity_factor([100]) == 0.0

    def test_empty_is_zero(self):
        assert diversity_factor([]) == 0.0

    def test_known_skewed_value(self):
        # H(4,2,2) / log2(3)
        expected = entropy_oracle([4, 2, 2]) / math.log2(3)
        assert diversity_factor([4, 2, 2]) == pytest.approx(expected)
        assert diversity_factor([4, 2, 2]) == pytest.approx(0.9463946303571862)

    def test_zero_counts_ignored(self):
        assert diversity_factor([5, 0, 5]) == diversity_factor([5, 5])

    @given(st.lists(st.integers(min_value=1, max_value=500), min_size=2,
                    max_size=10))
    def test_in_unit_interval(self, counts):
        assert 0.0 <= diversity_factor(counts) <= 1.0 + 1e-12


class TestBalanceFactor:
    def test_uniform_is_one(self):
        hist = TxHistogram(publish=5, engage=5, transfer=5, stake=5)
        assert balance_factor(hist) == pytest.approx(1.0)

    def test_single_kind_is_zero(self):
        assert balance_factor(TxHistogram(publish=50)) == 0.0

    def test_no_activity_is_zero(self):
        assert balance_factor(TxHistogram()) == 0.0

    def test_known_value(self):
        hist = TxHistogram(publish=2, engage=1, transfer=1, stake=0)
        assert balance_factor(hist) == pytest.approx(0.75)


class TestMint:
    def test_decay_and_factors(self):
        params = ProtocolParams(base_mint=tokens(1000), mint_decay=0.99)
        assert mint_epoch(1, 0.5, 0.5, params) == 247_500_000

    def test_epoch_zero_no_decay(self):
        params = ProtocolParams(base_mint=tokens(100), mint_decay=0.5)
        assert mint_epoch(0, 1.0, 1.0, params) == tokens(100)

    def test_zero_factor_mints_nothing(self):
        params = ProtocolParams()
        assert mint_epoch(3, 0.0, 1.0, params) == 0
        assert mint_epoch(3, 1.0, 0.0, params) == 0

    def test_negative_epoch_rejected(self):
        with pytest.raises(ValueError):
            mint_epoch(-1, 0.5, 0.5, ProtocolParams())

    def test_out_of_range_factors_rejected(self):
        with pytest.raises(ValueError):
            mint_epoch(0, 1.5, 0.5, ProtocolParams())
        with pytest.raises(ValueError):
            mint_epoch(0, 0.5, -0.1, ProtocolParams())

    @given(st.integers(min_value=0, max_value=200))
    def test_monotone_decay(self, epoch):
        params = ProtocolParams(base_mint=tokens(1000), mint_decay=0.97)
        assert (mint_epoch(epoch, 1.0, 1.0, params)
                >= mint_epoch(epoch + 1, 1.0, 1.0, params))


def debt_world(ept=1000):
    ledger = Ledger(params=ProtocolParams())
    ledger.create_account("whale", tokens(ept))
    return ledger, DebtBook()


class TestDebtConversions:
    def test_issue_at_par(self):
        ledger, debt = debt_world()
        issued = convert_to_debt(ledger, debt, "whale", tokens(50), 1.0)
        assert issued == tokens(50)
        acct = ledger.account("whale")
        assert acct.ept == tokens(950)
        assert acct.epd == tokens(50)
        assert debt.reserve == tokens(50)
        assert debt.epd_outstanding == tokens(50)

    def test_ratio_example(self):
        # 1000 EPT in existence, convert 50 at price 1 -> ratio 0.05
        ledger, debt = debt_world(1000)
        convert_to_debt(ledger, debt, "whale", tokens(50), 1.0)
        supply = total_ept_in_existence(ledger, debt)
        assert supply == tokens(1000)
        assert debt_ratio(debt, 1.0, supply) == pytest.approx(0.05)

    def test_cap_blocks_and_leaves_state_untouched(self):
        ledger, debt = debt_world(1000)
        with pytest.raises(DebtCapExceeded):
            convert_to_debt(ledger, debt, "whale", tokens(150), 1.0)
        acct = ledger.account("whale")
        assert acct.ept == tokens(1000)
        assert acct.epd == 0
        assert debt.reserve == 0
        assert debt.epd_outstanding == 0

    def test_cap_boundary_allows_exactly_at_cap(self):
        ledger, debt = debt_world(1000)
        issued = convert_to_debt(ledger, debt, "whale", tokens(100), 1.0)
        assert issued == tokens(100)
        supply = total_ept_in_existence(ledger, debt)
        assert debt_ratio(debt, 1.0, supply) == pytest.approx(0.10)

    def test_price_scales_issuance(self):
        ledger, debt = debt_world()
        issued = convert_to_debt(ledger, debt, "whale", tokens(50), 2.0)
        assert issued == tokens(25)

    def test_floor_on_issue(self):
        ledger, debt = debt_world()
        issued = convert_to_debt(ledger, debt, "whale", 10, 3.0)
        assert issued == 3  # floor(10 / 3)

    def test_round_trip_at_stable_price(self):
        ledger, debt = debt_world()
        convert_to_debt(ledger, debt, "whale", tokens(50), 1.0)
        got = convert_from_debt(ledger, debt, "whale", tokens(50), 1.0)
        assert got == tokens(50)
        acct = ledger.account("whale")
        assert acct.ept == tokens(1000)
        assert acct.epd == 0
        assert debt.reserve == 0
        assert debt.conversion_minted == 0
        assert debt.conversion_burned == 0

    def test_price_rise_mints_shortfall(self):
        ledger, debt = debt_world()
        convert_to_debt(ledger, debt, "whale", tokens(50), 1.0)
        got = convert_from_debt(ledger, debt, "whale", tokens(50), 1.2)
        assert got == tokens(60)
        assert debt.conversion_minted == tokens(10)
        assert debt.reserve == 0

    def test_price_drop_burns_surplus_on_full_redemption(self):
        ledger, debt = debt_world()
        convert_to_debt(ledger, debt, "whale", tokens(50), 1.0)
        got = convert_from_debt(ledger, debt, "whale", tokens(50), 0.8)
        assert got == tokens(40)
        assert debt.conversion_burned == tokens(10)
        assert debt.reserve == 0

    def test_partial_redemption_keeps_reserve(self):
        ledger, debt = debt_world()
        convert_to_debt(ledger, debt, "whale", tokens(50), 1.0)
        convert_from_debt(ledger, debt, "whale", tokens(20), 1.0)
        assert debt.epd_outstanding == tokens(30)
        assert debt.reserve == tokens(30)
        assert debt.conversion_burned == 0

    def test_insufficient_balances(self):
        ledger, debt = debt_world(10)
        with pytest.raises(InsufficientBalance):
            convert_to_debt(ledger, debt, "whale", tokens(11), 1.0)
        with pytest.raises(InsufficientBalance):
            convert_from_debt(ledger, debt, "whale", 1, 1.0)

    def test_bad_price_rejected(self):
        ledger, debt = debt_world()
        for price in (0.0, -1.0, float("inf"), float("nan")):
            with pytest.raises(ValueError):
                convert_to_debt(ledger, debt, "whale", 1, price)

    def test_supply_accounting_through_conversions(self):
        ledger, debt = debt_world()

        def issued_total():
            return (ledger.initial_supply + ledger.reward_minted
                    + debt.conversion_minted - debt.conversion_burned)

        convert_to_debt(ledger, debt, "whale", tokens(80), 1.0)
        assert total_ept_in_existence(ledger, debt) == issued_total()
        convert_from_debt(ledger, debt, "whale", tokens(30), 1.5)
        assert total_ept_in_existence(ledger, debt) == issued_total()
        convert_from_debt(ledger, debt, "whale", tokens(50), 0.7)
        assert total_ept_in_existence(ledger, debt) == issued_total()


class TestRatioUnderRandomOps:
    @settings(max_examples=50, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_cap_invariant_after_accepted_conversions(self, seed):
        import numpy as np
        rng = np.random.default_rng(seed)
        ledger = Ledger(params=ProtocolParams())
        ledger.create_account("a", tokens(500))
        ledger.create_account("b", tokens(500))
        debt = DebtBook()
        cap = ledger.params.debt_ratio_cap
        for _ in range(30):
            price = float(rng.uniform(0.5, 2.0))
            who = "a" if rng.random() < 0.5 else "b"
            acct = ledger.account(who)
            if rng.random() < 0.6:
                amount = int(rng.integers(0, acct.ept + 1))
                try:
                    convert_to_debt(ledger, debt, who, amount, price)
                except DebtCapExceeded:
                    continue
                # an accepted issue never leaves the ratio above the cap at
                # the price it executed at
                supply = total_ept_in_existence(ledger, debt)
                assert debt_ratio(debt, price, supply) <= cap + 1e-15
            elif acct.epd > 0:
                amount = int(rng.integers(0, acct.epd + 1))
                convert_from_debt(ledger, debt, who, amount, price)
            assert debt.epd_outstanding >= 0
            assert debt.reserve >= 0
