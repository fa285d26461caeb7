"""Protocol parameters.

A single mutable record of every governance-adjustable knob. Values change
only at initial configuration (scenario overrides) or through governance
enactment; everything else treats the record as read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

from .errors import InvalidParameter
from .tokens import tokens


@dataclass
class ProtocolParams:
    lifespan_ticks: int = 15        # content engagement window, in ticks (days)
    feed_size: int = 20             # items per built feed
    cap_frac: float = 0.2           # max fraction of a feed one cluster may fill
    target_entropy: float = 2.0     # diversity goal in bits (diagnostic target)
    diversity_weight: float = 0.5   # blend between entropy and relative score
    base_mint: int = tokens(1000)   # epoch-0 mint ceiling, micro-tokens
    mint_decay: float = 0.99        # geometric per-tick decay of the mint ceiling
    creator_split: float = 0.75     # author's share of an item's reward pool
    debt_ratio_cap: float = 0.10    # max outstanding-debt value / total supply
    cluster_threshold: float = 0.8  # cosine needed to join an existing cluster
    reputation_bonus: float = 0.01  # multiplier step for effective curation
    witness_count: int = 5          # elected witness set size
    proposal_threshold: float = 0.5 # yes-stake fraction of all staked EP to enact


# (kind, lower, upper, lower_open, upper_open) per field; None = unbounded.
_RANGES = {
    "lifespan_ticks": (int, 1, None, False, False),
    "feed_size": (int, 1, None, False, False),
    "cap_frac": (float, 0.0, 1.0, True, False),
    "target_entropy": (float, 0.0, None, False, False),
    "diversity_weight": (float, 0.0, 1.0, False, False),
    "base_mint": (int, 0, None, False, False),
    "mint_decay": (float, 0.0, 1.0, True, False),
    "creator_split": (float, 0.0, 1.0, False, False),
    "debt_ratio_cap": (float, 0.0, 1.0, False, False),
    "cluster_threshold": (float, 0.0, 1.0, True, False),
    "reputation_bonus": (float, 0.0, None, False, False),
    "witness_count": (int, 1, None, False, False),
    "proposal_threshold": (float, 0.0, 1.0, False, True),
}

PARAM_NAMES = tuple(f.name for f in fields(ProtocolParams))


def describe_range(name: str) -> str:
    kind, lo, hi, lo_open, hi_open = _RANGES[name]
    left = "(" if lo_open else "["
    right = ")" if hi_open else "]"
    lo_s = "-inf" if lo is None else str(lo)
    hi_s = "inf" if hi is None else str(hi)
    return f"must be {kind.__name__} in {left}{lo_s}, {hi_s}{right}"


def validate_param(name: str, value) -> int | float:
    """Check one parameter value against its legal range.

    Returns the coerced value (ints stay ints, numeric floats become float).
    Raises InvalidParameter for unknown names or out-of-range values.
    """
    if name not in _RANGES:
        raise InvalidParameter(f"unknown parameter {name!r}")
    kind, lo, hi, lo_open, hi_open = _RANGES[name]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InvalidParameter(f"{name}: {describe_range(name)}")
    if kind is int:
        if isinstance(value, float) and not value.is_integer():
            raise InvalidParameter(f"{name}: {describe_range(name)}")
        value = int(value)
    else:
        value = float(value)
    if lo is not None and (value < lo or (lo_open and value == lo)):
        raise InvalidParameter(f"{name}: {describe_range(name)}")
    if hi is not None and (value > hi or (hi_open and value == hi)):
        raise InvalidParameter(f"{name}: {describe_range(name)}")
    return value


def validate_params(params: ProtocolParams) -> None:
    for name in PARAM_NAMES:
        validate_param(name, getattr(params, name))
