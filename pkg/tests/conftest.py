"""Shared test fixtures and tiny fakes."""

from __future__ import annotations

from dataclasses import dataclass

import pytest

from epistral import Ledger, ProtocolParams, tokens


@dataclass
class PoolItem:
    """Minimal stand-in for a content item in recommender tests."""

    id: int
    author: str
    cluster: int
    total_weight: float


@pytest.fixture
def ledger():
    led = Ledger(params=ProtocolParams())
    led.create_account("alice", tokens(100), tokens(50))
    led.create_account("bob", tokens(100), tokens(10))
    led.create_account("carol", tokens(100), tokens(20))
    return led
