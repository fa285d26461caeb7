"""Scenario configuration: strict JSON loading and validation.

A scenario is a declarative description of a run: the RNG seed, how many
ticks to simulate, parameter overrides, an oracle price path for the debt
token, optional pre-seeded accounts, and a population of agents grouped
into archetype specs. Validation is strict: unknown keys anywhere are
rejected so typos fail loudly instead of silently changing behavior.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

from .errors import ParseError, ValidationError
from .lifecycle import KIND_FACTORS
from .params import PARAM_NAMES, ProtocolParams, validate_param
from .tokens import tokens

ARCHETYPES = ("creator", "consumer", "curator", "bot_farm", "capital_only")

# parameters whose JSON value is whole tokens, stored as micro internally
_TOKEN_PARAMS = frozenset({"base_mint"})

_DEFAULT_KIND_WEIGHTS = {
    "consumer": {"view": 0.5, "like": 0.3, "comment": 0.15, "share": 0.05},
    "curator": {"view": 0.1, "like": 0.4, "comment": 0.3, "share": 0.2},
    "bot_farm": {"like": 1.0},
}


@dataclass
class AgentSpec:
    """One group of identically configured agents."""

    archetype: str
    count: int
    id_prefix: str
    initial_ept: int = tokens(100)
    initial_ep: int = tokens(10)
    # creator / bot_farm
    posts_per_tick: int = 1
    publish_ticks: Optional[int] = None
    label: Optional[str] = None
    target_label: Optional[str] = None
    embedding_center: Optional[List[float]] = None
    embedding_noise: float = 0.1
    # consumer / curator / bot_farm
    engage_rate: float = 0.25
    kind_weights: Dict[str, float] = field(default_factory=dict)
    engagements_per_tick: int = 10
    # capital_only
    transfer_tokens: int = tokens(1)
    stake_tokens: int = tokens(5)
    convert_tokens: int = tokens(5)

    def agent_ids(self) -> List[str]:
        return [f"{self.id_prefix}{i:05d}" for i in range(self.count)]


@dataclass
class InitialAccount:
    id: str
    ept: int = 0
    ep: int = 0


@dataclass
class ScenarioConfig:
    seed: int = 0
    ticks: int = 0
    embedding_dim: int = 16
    name: str = ""
    params: ProtocolParams = field(default_factory=ProtocolParams)
    price_path: List[float] = field(default_factory=lambda: [1.0])
    initial_accounts: List[InitialAccount] = field(default_factory=list)
    agents: List[AgentSpec] = field(default_factory=list)

    def price_at(self, tick: int) -> float:
        """Oracle price for a tick; the path holds its last value."""
        if tick < 0:
            raise ValueError("tick must be non-negative")
        path = self.price_path
        return path[tick] if tick < len(path) else path[-1]

    def scaled(self, factor: float) -> "ScenarioConfig":
        """Copy with every agent count divided by `factor` (rounded up)."""
        if factor < 1:
            raise ValueError("scale factor must be >= 1")
        agents = [
            replace(spec, count=math.ceil(spec.count / factor))
            for spec in self.agents
        ]
        return replace(self, agents=agents)


def _fail(path: str, message: str) -> None:
    raise ValidationError(path, message)


def _check_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        _fail(path, f"expected an object, got {type(value).__name__}")
    return value


def _reject_unknown(data: dict, allowed, path: str) -> None:
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        _fail(path, f"unknown keys: {', '.join(unknown)}")


def _get_int(data: dict, key: str, path: str, default=None, lo=None, hi=None):
    if key not in data:
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(f"{path}.{key}", "expected an integer")
    if lo is not None and value < lo:
        _fail(f"{path}.{key}", f"must be >= {lo}")
    if hi is not None and value > hi:
        _fail(f"{path}.{key}", f"must be <= {hi}")
    return value


def _get_number(data: dict, key: str, path: str, default=None, lo=None,
                hi=None):
    if key not in data:
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(f"{path}.{key}", "expected a number")
    value = float(value)
    if not math.isfinite(value):
        _fail(f"{path}.{key}", "must be finite")
    if lo is not None and value < lo:
        _fail(f"{path}.{key}", f"must be >= {lo}")
    if hi is not None and value > hi:
        _fail(f"{path}.{key}", f"must be <= {hi}")
    return value


def _get_str(data: dict, key: str, path: str, default=None):
    if key not in data:
        return default
    value = data[key]
    if not isinstance(value, str) or not value:
        _fail(f"{path}.{key}", "expected a non-empty string")
    return value


def _parse_kind_weights(data: dict, path: str, default: Dict[str, float]):
    if "kind_weights" not in data:
        return dict(default)
    raw = _check_mapping(data["kind_weights"], f"{path}.kind_weights")
    _reject_unknown(raw, KIND_FACTORS, f"{path}.kind_weights")
    weights: Dict[str, float] = {}
    for kind, value in raw.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)) \
                or not math.isfinite(float(value)) or value < 0:
            _fail(f"{path}.kind_weights.{kind}", "expected a number >= 0")
        weights[kind] = float(value)
    if not any(w > 0 for w in weights.values()):
        _fail(f"{path}.kind_weights", "at least one weight must be positive")
    return weights


_COMMON_KEYS = ("archetype", "count", "id_prefix", "initial_ept", "initial_ep")
_ARCHETYPE_KEYS = {
    "creator": _COMMON_KEYS + ("posts_per_tick", "publish_ticks", "label",
                               "embedding_center", "embedding_noise"),
    "consumer": _COMMON_KEYS + ("engage_rate", "kind_weights"),
    "curator": _COMMON_KEYS + ("engage_rate", "kind_weights"),
    "bot_farm": _COMMON_KEYS + ("posts_per_tick", "publish_ticks",
                                "target_label", "embedding_center",
                                "embedding_noise", "engagements_per_tick",
                                "kind_weights"),
    "capital_only": _COMMON_KEYS + ("transfer_tokens", "stake_tokens",
                                    "convert_tokens"),
}


def _parse_agent_spec(data, index: int, embedding_dim: int) -> AgentSpec:
    path = f"agents[{index}]"
    data = _check_mapping(data, path)
    archetype = _get_str(data, "archetype", path)
    if archetype is None:
        _fail(path, "missing required key 'archetype'")
    if archetype not in ARCHETYPES:
        _fail(f"{path}.archetype",
              f"expected one of {', '.join(ARCHETYPES)}")
    _reject_unknown(data, _ARCHETYPE_KEYS[archetype], path)

    count = _get_int(data, "count", path, default=None, lo=0, hi=99999)
    if count is None:
        _fail(path, "missing required key 'count'")
    prefix = _get_str(data, "id_prefix", path, default=f"{archetype}{index}_")

    spec = AgentSpec(archetype=archetype, count=count, id_prefix=prefix)
    spec.initial_ept = tokens(_get_number(data, "initial_ept", path,
                                          default=100.0, lo=0.0))
    spec.initial_ep = tokens(_get_number(data, "initial_ep", path,
                                         default=10.0, lo=0.0))

    if archetype in ("creator", "bot_farm"):
        default_posts = 1 if archetype == "creator" else 10
        spec.posts_per_tick = _get_int(data, "posts_per_tick", path,
                                       default=default_posts, lo=0)
        spec.publish_ticks = _get_int(data, "publish_ticks", path,
                                      default=None, lo=0)
        default_noise = 0.1 if archetype == "creator" else 0.01
        spec.embedding_noise = _get_number(data, "embedding_noise", path,
                                           default=default_noise, lo=0.0)
        center = data.get("embedding_center")
        if center is not None:
            if not isinstance(center, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool)
                and math.isfinite(float(x)) for x in center
            ):
                _fail(f"{path}.embedding_center", "expected a list of numbers")
            if len(center) != embedding_dim:
                _fail(f"{path}.embedding_center",
                      f"expected {embedding_dim} values, got {len(center)}")
            if not any(float(x) != 0.0 for x in center):
                _fail(f"{path}.embedding_center", "must not be the zero vector")
            spec.embedding_center = [float(x) for x in center]

    if archetype == "creator":
        spec.label = _get_str(data, "label", path, default=None)
        if spec.label is not None and spec.embedding_center is not None:
            _fail(path, "'label' and 'embedding_center' are mutually exclusive")

    if archetype == "bot_farm":
        spec.target_label = _get_str(data, "target_label", path, default=None)
        if (spec.target_label is None) == (spec.embedding_center is None):
            _fail(path, "exactly one of 'target_label' and "
                        "'embedding_center' is required")
        spec.engagements_per_tick = _get_int(data, "engagements_per_tick",
                                             path, default=10, lo=0)

    if archetype in ("consumer", "curator"):
        default_rate = 0.25 if archetype == "consumer" else 0.5
        spec.engage_rate = _get_number(data, "engage_rate", path,
                                       default=default_rate, lo=0.0, hi=1.0)

    if archetype in ("consumer", "curator", "bot_farm"):
        spec.kind_weights = _parse_kind_weights(
            data, path, _DEFAULT_KIND_WEIGHTS[archetype])

    if archetype == "capital_only":
        spec.transfer_tokens = tokens(_get_number(
            data, "transfer_tokens", path, default=1.0, lo=0.0))
        spec.stake_tokens = tokens(_get_number(
            data, "stake_tokens", path, default=5.0, lo=0.0))
        spec.convert_tokens = tokens(_get_number(
            data, "convert_tokens", path, default=5.0, lo=0.0))

    return spec


_TOP_KEYS = ("name", "seed", "ticks", "embedding_dim", "params", "price_path",
             "initial_accounts", "agents")


def from_dict(data) -> ScenarioConfig:
    """Validate a parsed scenario document into a ScenarioConfig."""
    data = _check_mapping(data, "scenario")
    _reject_unknown(data, _TOP_KEYS, "scenario")

    seed = _get_int(data, "seed", "scenario", default=0, lo=0, hi=2 ** 64 - 1)
    ticks = _get_int(data, "ticks", "scenario", default=0, lo=0)
    dim = _get_int(data, "embedding_dim", "scenario", default=16, lo=1)
    name = _get_str(data, "name", "scenario", default="")

    params = ProtocolParams()
    raw_params = _check_mapping(data.get("params", {}), "scenario.params")
    for key in sorted(raw_params):
        if key not in PARAM_NAMES:
            _fail(f"scenario.params.{key}", "unknown parameter")
        value = raw_params[key]
        if key in _TOKEN_PARAMS:
            if isinstance(value, bool) or not isinstance(value, (int, float)) \
                    or not math.isfinite(float(value)) or value < 0:
                _fail(f"scenario.params.{key}",
                      "expected a token amount (number >= 0)")
            value = tokens(float(value))
        try:
            coerced = validate_param(key, value)
        except Exception as exc:
            _fail(f"scenario.params.{key}", str(exc))
        setattr(params, key, coerced)

    price_path = [1.0]
    if "price_path" in data:
        raw_path = data["price_path"]
        if not isinstance(raw_path, list) or not raw_path:
            _fail("scenario.price_path", "expected a non-empty list")
        price_path = []
        for i, value in enumerate(raw_path):
            if isinstance(value, bool) or not isinstance(value, (int, float)) \
                    or not math.isfinite(float(value)) or not value > 0:
                _fail(f"scenario.price_path[{i}]",
                      "expected a positive finite number")
            price_path.append(float(value))

    initial_accounts: List[InitialAccount] = []
    seen_ids = set()
    for i, entry in enumerate(data.get("initial_accounts", [])):
        path = f"scenario.initial_accounts[{i}]"
        entry = _check_mapping(entry, path)
        _reject_unknown(entry, ("id", "ept", "ep"), path)
        account_id = _get_str(entry, "id", path)
        if account_id is None:
            _fail(path, "missing required key 'id'")
        if account_id in seen_ids:
            _fail(f"{path}.id", f"duplicate account id {account_id!r}")
        seen_ids.add(account_id)
        ept = tokens(_get_number(entry, "ept", path, default=0.0, lo=0.0))
        ep = tokens(_get_number(entry, "ep", path, default=0.0, lo=0.0))
        initial_accounts.append(InitialAccount(id=account_id, ept=ept, ep=ep))

    agents: List[AgentSpec] = []
    raw_agents = data.get("agents", [])
    if not isinstance(raw_agents, list):
        _fail("scenario.agents", "expected a list")
    prefixes = set()
    for i, raw_spec in enumerate(raw_agents):
        spec = _parse_agent_spec(raw_spec, i, dim)
        if spec.id_prefix in prefixes:
            _fail(f"agents[{i}].id_prefix",
                  f"duplicate id prefix {spec.id_prefix!r}")
        prefixes.add(spec.id_prefix)
        agents.append(spec)

    config = ScenarioConfig(
        seed=seed, ticks=ticks, embedding_dim=dim, name=name, params=params,
        price_path=price_path, initial_accounts=initial_accounts,
        agents=agents,
    )
    _check_id_collisions(config)
    return config


def _check_id_collisions(config: ScenarioConfig) -> None:
    seen = {acct.id for acct in config.initial_accounts}
    for i, spec in enumerate(config.agents):
        for agent_id in spec.agent_ids():
            if agent_id in seen:
                _fail(f"agents[{i}]", f"agent id {agent_id!r} collides with "
                                      "another account")
            seen.add(agent_id)


def load_scenario(path: str) -> ScenarioConfig:
    """Load and validate a scenario JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ParseError(f"scenario file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON at line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}"
        )
    return from_dict(data)
