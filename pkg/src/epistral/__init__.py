"""Epistral: a deterministic simulator of a diversity-first content economy.

Feeds are built to hit an entropy target instead of maximizing raw
popularity, content is mortal and settles its rewards when it expires,
minting scales with ecosystem diversity, debt lives in a second token, and
parameters are governed by stake-weighted votes. Everything here is
deterministic: same scenario, same seed, same bytes out.
"""

from ._kernels import BACKEND as kernel_backend
from .economy import (
    DebtBook,
    TxHistogram,
    balance_factor,
    convert_from_debt,
    convert_to_debt,
    debt_ratio,
    diversity_factor,
    mint_epoch,
    total_ept_in_existence,
)
from .engine import RunTrace, Simulation, SupplyAudit, run_scenario
from .governance import Governance, Proposal, elect_witnesses
from .ledger import Account, Ledger, state_hash
from .lifecycle import (
    KIND_FACTORS,
    ContentItem,
    ContentRegistry,
    Engagement,
    SettlementReport,
    proportional_split,
    settle_epoch,
)
from .metrics import MetricRecord, gini, zipf_exponent
from .params import PARAM_NAMES, ProtocolParams, validate_param
from .recommender import Feed, build_feed, cluster_cap, rank_pool, relative_score
from .scenario import AgentSpec, ScenarioConfig, from_dict, load_scenario
from .semantic import assign_clusters, cosine, feed_entropy, normalize
from .tokens import MICRO_PER_TOKEN, format_tokens, tokens

__version__ = "0.1.0"

__all__ = [
    "Account",
    "AgentSpec",
    "ContentItem",
    "ContentRegistry",
    "DebtBook",
    "Engagement",
    "Feed",
    "Governance",
    "KIND_FACTORS",
    "Ledger",
    "MetricRecord",
    "MICRO_PER_TOKEN",
    "PARAM_NAMES",
    "Proposal",
    "ProtocolParams",
    "RunTrace",
    "ScenarioConfig",
    "SettlementReport",
    "Simulation",
    "SupplyAudit",
    "TxHistogram",
    "assign_clusters",
    "balance_factor",
    "build_feed",
    "cluster_cap",
    "convert_from_debt",
    "convert_to_debt",
    "cosine",
    "debt_ratio",
    "diversity_factor",
    "elect_witnesses",
    "feed_entropy",
    "format_tokens",
    "from_dict",
    "gini",
    "kernel_backend",
    "load_scenario",
    "mint_epoch",
    "normalize",
    "proportional_split",
    "rank_pool",
    "relative_score",
    "run_scenario",
    "settle_epoch",
    "state_hash",
    "tokens",
    "total_ept_in_existence",
    "validate_param",
    "zipf_exponent",
    "__version__",
]
