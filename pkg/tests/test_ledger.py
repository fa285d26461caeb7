"""Accounts, token movement, conservation, and state hashing."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from epistral import Ledger, ProtocolParams, state_hash, tokens
from epistral.errors import DuplicateAccount, InsufficientBalance, UnknownAccount
from epistral.tokens import MICRO_PER_TOKEN, format_tokens


class TestTokens:
    def test_int_is_whole_tokens(self):
        assert tokens(3) == 3 * MICRO_PER_TOKEN

    def test_float_rounds_to_micro(self):
        assert tokens(1.5) == 1_500_000
        assert tokens(0.0000004) == 0
        assert tokens(0.0000006) == 1

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            tokens(-1)

    def test_format_round_trip(self):
        assert format_tokens(tokens(2.5)) == "2.5"
        assert format_tokens(tokens(100)) == "100"


class TestAccounts:
    def test_create_and_fetch(self, ledger):
        acct = ledger.account("alice")
        assert acct.ept == tokens(100)
        assert acct.ep == tokens(50)
        assert acct.epd == 0
        assert acct.reputation == 1.0

    def test_duplicate_rejected(self, ledger):
        with pytest.raises(DuplicateAccount):
            ledger.create_account("alice")

    def test_unknown_rejected(self, ledger):
        with pytest.raises(UnknownAccount):
            ledger.account("nobody")

    def test_initial_supply_tracks_seeding(self):
        led = Ledger()
        led.create_account("a", tokens(10), tokens(5))
        led.create_account("b", tokens(1))
        assert led.initial_supply == tokens(16)


class TestTransfers:
    def test_moves_balance(self, ledger):
        ledger.transfer("alice", "bob", tokens(30))
        assert ledger.account("alice").ept == tokens(70)
        assert ledger.account("bob").ept == tokens(130)

    def test_insufficient_rejected_and_untouched(self, ledger):
        with pytest.raises(InsufficientBalance):
            ledger.transfer("alice", "bob", tokens(1000))
        assert ledger.account("alice").ept == tokens(100)
        assert ledger.account("bob").ept == tokens(100)

    def test_negative_rejected(self, ledger):
        with pytest.raises(ValueError):
            ledger.transfer("alice", "bob", -1)

    def test_self_transfer_is_noop(self, ledger):
        ledger.transfer("alice", "alice", tokens(10))
        assert ledger.account("alice").ept == tokens(100)


class TestStaking:
    def test_stake_moves_to_ep(self, ledger):
        ledger.stake("bob", tokens(40))
        acct = ledger.account("bob")
        assert acct.ept == tokens(60)
        assert acct.ep == tokens(50)

    def test_unstake_moves_back(self, ledger):
        ledger.unstake("alice", tokens(50))
        acct = ledger.account("alice")
        assert acct.ept == tokens(150)
        assert acct.ep == 0

    def test_overdraw_rejected(self, ledger):
        with pytest.raises(InsufficientBalance):
            ledger.stake("bob", tokens(101))
        with pytest.raises(InsufficientBalance):
            ledger.unstake("bob", tokens(11))


@st.composite
def op_sequences(draw):
    ops = []
    for _ in range(draw(st.integers(min_value=0, max_value=30))):
        kind = draw(st.sampled_from(["transfer", "stake", "unstake"]))
        src = draw(st.sampled_from(["alice", "bob", "carol"]))
        dst = draw(st.sampled_from(["alice", "bob", "carol"]))
        amount = draw(st.integers(min_value=0, max_value=tokens(120)))
        ops.append((kind, src, dst, amount))
    return ops


class TestConservation:
    @given(op_sequences())
    def test_total_never_changes(self, ops):
        led = Ledger()
        led.create_account("alice", tokens(100), tokens(50))
        led.create_account("bob", tokens(100), tokens(10))
        led.create_account("carol", tokens(100), tokens(20))
        total_before = led.liquid_and_staked()
        for kind, src, dst, amount in ops:
            try:
                if kind == "transfer":
                    led.transfer(src, dst, amount)
                elif kind == "stake":
                    led.stake(src, amount)
                else:
                    led.unstake(src, amount)
            except InsufficientBalance:
                pass
        assert led.liquid_and_staked() == total_before
        assert led.liquid_and_staked() == led.initial_supply

    @given(op_sequences())
    def test_balances_never_negative(self, ops):
        led = Ledger()
        led.create_account("alice", tokens(100), tokens(50))
        led.create_account("bob", tokens(100), tokens(10))
        led.create_account("carol", tokens(100), tokens(20))
        for kind, src, dst, amount in ops:
            try:
                if kind == "transfer":
                    led.transfer(src, dst, amount)
                elif kind == "stake":
                    led.stake(src, amount)
                else:
                    led.unstake(src, amount)
            except InsufficientBalance:
                pass
        for acct in led.iter_accounts():
            assert acct.ept >= 0 and acct.ep >= 0 and acct.epd >= 0


class TestStateHash:
    def test_same_state_same_hash(self, ledger):
        assert state_hash(ledger) == state_hash(ledger)

    def test_insertion_order_ignored(self):
        a = Ledger()
        a.create_account("x", tokens(1))
        a.create_account("y", tokens(2))
        b = Ledger()
        b.create_account("y", tokens(2))
        b.create_account("x", tokens(1))
        assert state_hash(a) == state_hash(b)

    def test_balance_change_changes_hash(self, ledger):
        before = state_hash(ledger)
        ledger.transfer("alice", "bob", 1)
        assert state_hash(ledger) != before

    def test_param_change_changes_hash(self, ledger):
        before = state_hash(ledger)
        ledger.params.feed_size = 21
        assert state_hash(ledger) != before

    def test_components_contribute(self, ledger):
        assert state_hash(ledger) != state_hash(ledger, (1, 2, 3))

    def test_hash_shape(self, ledger):
        digest = state_hash(ledger)
        assert len(digest) == 64
        assert all(ch in "0123456789abcdef" for ch in digest)

    def test_escrow_credit_tracked(self):
        led = Ledger()
        led.credit_escrow(tokens(5), minted=True)
        assert led.escrow == tokens(5)
        assert led.reward_minted == tokens(5)
        led.credit_escrow(tokens(2), minted=False)
        assert led.initial_supply == tokens(2)
