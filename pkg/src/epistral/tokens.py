"""Token amounts.

All money in the system is integer micro-tokens (1 token = 1,000,000 micro)
so that conservation invariants hold exactly. Floating point never touches a
balance.
"""

from __future__ import annotations

MICRO_PER_TOKEN = 1_000_000


def tokens(amount: float | int) -> int:
    """Convert a whole-token amount to integer micro-tokens.

    Accepts ints and floats (scenario files use human units); rounds to the
    nearest micro-token. Amounts are money, so they must be non-negative.
    """
    if amount < 0:
        raise ValueError("token amounts must be non-negative")
    if isinstance(amount, int):
        return amount * MICRO_PER_TOKEN
    return round(amount * MICRO_PER_TOKEN)


def format_tokens(micro: int) -> str:
    """Render micro-tokens as a decimal token string, e.g. 1500000 -> '1.5'."""
    sign = "-" if micro < 0 else ""
    whole, frac = divmod(abs(micro), MICRO_PER_TOKEN)
    if frac == 0:
        return f"{sign}{whole}"
    return f"{sign}{whole}.{frac:06d}".rstrip("0")
