"""Run metrics: inequality, popularity shape, diversity, and trace output.

One MetricRecord is emitted per tick. CSV output uses nine significant
digits for floats so equal runs produce byte-identical files; JSONL
carries full float precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .errors import TooFewPoints


def gini(values: Sequence[float]) -> float:
    """Gini coefficient of non-negative values.

    Uses the sorted-rank identity sum((2i - n - 1) * x_i) / (n * sum(x))
    with 1-based i over ascending x. All-zero input is perfectly equal,
    so 0.0.
    """
    arr = np.asarray(list(values), dtype=np.float64)
    if arr.size == 0:
        raise ValueError("gini needs at least one value")
    if np.any(arr < 0):
        raise ValueError("gini is defined for non-negative values")
    total = float(arr.sum())
    if total == 0.0:
        return 0.0
    arr = np.sort(arr)
    n = arr.size
    ranks = np.arange(1, n + 1, dtype=np.float64)
    return float(((2.0 * ranks - n - 1.0) * arr).sum() / (n * total))


def zipf_exponent(frequencies: Sequence[float]) -> float:
    """Zipf exponent fitted to a frequency distribution.

    Frequencies are sorted descending, and a least-squares line is fitted
    to log2(frequency) against log2(rank); the exponent is the negated
    slope. Requires at least 10 strictly positive frequencies.
    """
    arr = np.asarray(list(frequencies), dtype=np.float64)
    if arr.size < 10:
        raise TooFewPoints(
            f"zipf fit needs at least 10 frequencies, got {arr.size}"
        )
    if np.any(arr <= 0):
        raise ValueError("zipf fit needs strictly positive frequencies")
    arr = -np.sort(-arr)
    ranks = np.arange(1, arr.size + 1, dtype=np.float64)
    slope = np.polyfit(np.log2(ranks), np.log2(arr), 1)[0]
    return float(-slope)


@dataclass
class MetricRecord:
    tick: int
    mean_feed_entropy: float
    payout_gini: float
    holdings_zipf_exponent: Optional[float]
    max_cluster_feed_share: float
    minted: int
    total_supply: int
    debt_ratio: float


CSV_COLUMNS = (
    "tick",
    "mean_feed_entropy",
    "payout_gini",
    "holdings_zipf_exponent",
    "max_cluster_feed_share",
    "minted",
    "total_supply",
    "debt_ratio",
)


def _format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def render_csv(records: Sequence[MetricRecord]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for rec in records:
        lines.append(",".join(
            _format_value(getattr(rec, column)) for column in CSV_COLUMNS
        ))
    return "\n".join(lines) + "\n"


def write_csv(records: Sequence[MetricRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_csv(records))


def render_jsonl(records: Sequence[MetricRecord]) -> str:
    lines = []
    for rec in records:
        lines.append(json.dumps(
            {column: getattr(rec, column) for column in CSV_COLUMNS},
            sort_keys=False, separators=(",", ":"),
        ))
    return "\n".join(lines) + "\n"


def write_jsonl(records: Sequence[MetricRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_jsonl(records))


def read_csv(path: str) -> List[MetricRecord]:
    """Parse a trace CSV back into records (mainly for tests)."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line for line in fh.read().splitlines() if line]
    if not lines or lines[0] != ",".join(CSV_COLUMNS):
        raise ValueError(f"{path} is not a trace CSV")
    records = []
    for line in lines[1:]:
        parts = line.split(",")
        records.append(MetricRecord(
            tick=int(parts[0]),
            mean_feed_entropy=float(parts[1]),
            payout_gini=float(parts[2]),
            holdings_zipf_exponent=float(parts[3]) if parts[3] else None,
            max_cluster_feed_share=float(parts[4]),
            minted=int(parts[5]),
            total_supply=int(parts[6]),
            debt_ratio=float(parts[7]),
        ))
    return records
