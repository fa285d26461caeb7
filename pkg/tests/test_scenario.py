"""Scenario loading: strict validation, defaults, overrides."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from epistral import ScenarioConfig, from_dict, load_scenario, tokens
from epistral.errors import ParseError, ValidationError

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"

MINIMAL = {
    "seed": 1,
    "ticks": 5,
    "agents": [{"archetype": "consumer", "count": 2}],
}


def write_scenario(tmp_path, data):
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data))
    return str(path)


class TestPackagedScenarios:
    @pytest.mark.parametrize("name", [
        "musk_einstein.json",
        "ecommerce_reviews.json",
        "baseline_economy.json",
    ])
    def test_ships_and_validates(self, name):
        config = load_scenario(str(SCENARIO_DIR / name))
        assert config.ticks > 0
        assert config.agents

    def test_bot_flood_shape(self):
        config = load_scenario(str(SCENARIO_DIR / "musk_einstein.json"))
        bots = [s for s in config.agents if s.archetype == "bot_farm"]
        assert len(bots) == 1
        total_bot_posts = (bots[0].count * bots[0].posts_per_tick
                           * bots[0].publish_ticks)
        assert total_bot_posts == 100_000


class TestValidation:
    def test_minimal(self):
        config = from_dict(MINIMAL)
        assert config.seed == 1
        assert config.embedding_dim == 16
        assert config.price_path == [1.0]

    def test_unknown_top_level_key(self):
        with pytest.raises(ValidationError, match="unknown keys"):
            from_dict({**MINIMAL, "typo_key": 1})

    def test_unknown_agent_key(self):
        bad = dict(MINIMAL)
        bad["agents"] = [{"archetype": "consumer", "count": 1,
                          "engage_rte": 0.5}]
        with pytest.raises(ValidationError, match="engage_rte"):
            from_dict(bad)

    def test_key_from_wrong_archetype_rejected(self):
        bad = dict(MINIMAL)
        bad["agents"] = [{"archetype": "consumer", "count": 1,
                          "posts_per_tick": 3}]
        with pytest.raises(ValidationError):
            from_dict(bad)

    def test_unknown_param_rejected(self):
        with pytest.raises(ValidationError, match="unknown parameter"):
            from_dict({**MINIMAL, "params": {"feed_len": 10}})

    def test_out_of_range_param_rejected(self):
        with pytest.raises(ValidationError):
            from_dict({**MINIMAL, "params": {"cap_frac": 0.0}})

    def test_base_mint_given_in_tokens(self):
        config = from_dict({**MINIMAL, "params": {"base_mint": 250.5}})
        assert config.params.base_mint == tokens(250.5)

    def test_bad_seed(self):
        with pytest.raises(ValidationError):
            from_dict({**MINIMAL, "seed": -1})
        with pytest.raises(ValidationError):
            from_dict({**MINIMAL, "seed": 2 ** 64})

    def test_unknown_archetype(self):
        with pytest.raises(ValidationError):
            from_dict({"agents": [{"archetype": "whale", "count": 1}]})

    def test_missing_count(self):
        with pytest.raises(ValidationError, match="count"):
            from_dict({"agents": [{"archetype": "consumer"}]})

    def test_bot_farm_needs_exactly_one_target(self):
        with pytest.raises(ValidationError):
            from_dict({"agents": [{"archetype": "bot_farm", "count": 1}]})
        both = {"archetype": "bot_farm", "count": 1,
                "target_label": "x",
                "embedding_center": [1.0] + [0.0] * 15}
        with pytest.raises(ValidationError):
            from_dict({"agents": [both]})

    def test_embedding_center_dimension_checked(self):
        bad = {"embedding_dim": 4,
               "agents": [{"archetype": "creator", "count": 1,
                           "embedding_center": [1.0, 0.0]}]}
        with pytest.raises(ValidationError, match="expected 4 values"):
            from_dict(bad)

    def test_kind_weights_validated(self):
        bad = {"agents": [{"archetype": "consumer", "count": 1,
                           "kind_weights": {"upvote": 1.0}}]}
        with pytest.raises(ValidationError):
            from_dict(bad)
        zero = {"agents": [{"archetype": "consumer", "count": 1,
                            "kind_weights": {"like": 0.0}}]}
        with pytest.raises(ValidationError, match="positive"):
            from_dict(zero)

    def test_duplicate_prefix_rejected(self):
        bad = {"agents": [
            {"archetype": "consumer", "count": 1, "id_prefix": "x_"},
            {"archetype": "curator", "count": 1, "id_prefix": "x_"},
        ]}
        with pytest.raises(ValidationError, match="duplicate id prefix"):
            from_dict(bad)

    def test_agent_collides_with_initial_account(self):
        bad = {
            "initial_accounts": [{"id": "c0_00000", "ept": 1}],
            "agents": [{"archetype": "consumer", "count": 1,
                        "id_prefix": "c0_"}],
        }
        with pytest.raises(ValidationError, match="collides"):
            from_dict(bad)

    def test_duplicate_initial_account(self):
        bad = {"initial_accounts": [{"id": "a", "ept": 1},
                                    {"id": "a", "ept": 2}]}
        with pytest.raises(ValidationError, match="duplicate"):
            from_dict(bad)

    def test_price_path_must_be_positive(self):
        with pytest.raises(ValidationError):
            from_dict({**MINIMAL, "price_path": [1.0, 0.0]})
        with pytest.raises(ValidationError):
            from_dict({**MINIMAL, "price_path": []})

    def test_negative_engage_rate_rejected(self):
        bad = {"agents": [{"archetype": "consumer", "count": 1,
                           "engage_rate": -0.1}]}
        with pytest.raises(ValidationError):
            from_dict(bad)
        over = {"agents": [{"archetype": "consumer", "count": 1,
                            "engage_rate": 1.0001}]}
        with pytest.raises(ValidationError):
            from_dict(over)


class TestDefaults:
    def test_consumer_defaults(self):
        config = from_dict({"agents": [{"archetype": "consumer",
                                        "count": 1}]})
        spec = config.agents[0]
        assert spec.engage_rate == 0.25
        assert spec.initial_ept == tokens(100)
        assert spec.initial_ep == tokens(10)
        assert abs(sum(spec.kind_weights.values()) - 1.0) < 1e-9

    def test_curator_leans_heavier(self):
        config = from_dict({"agents": [{"archetype": "curator",
                                        "count": 1}]})
        spec = config.agents[0]
        assert spec.engage_rate == 0.5
        assert spec.kind_weights["comment"] > 0.2

    def test_agent_ids_are_stable(self):
        config = from_dict({"agents": [{"archetype": "consumer", "count": 3,
                                        "id_prefix": "c_"}]})
        assert config.agents[0].agent_ids() == ["c_00000", "c_00001",
                                                "c_00002"]


class TestPricePath:
    def test_padding_with_last_value(self):
        config = from_dict({**MINIMAL, "price_path": [1.0, 2.0, 3.0]})
        assert config.price_at(0) == 1.0
        assert config.price_at(2) == 3.0
        assert config.price_at(99) == 3.0


class TestScaling:
    def test_counts_divided_rounding_up(self):
        config = from_dict({"agents": [
            {"archetype": "consumer", "count": 25},
            {"archetype": "creator", "count": 1},
        ]})
        scaled = config.scaled(10)
        assert [s.count for s in scaled.agents] == [3, 1]
        # original untouched
        assert [s.count for s in config.agents] == [25, 1]

    def test_factor_below_one_rejected(self):
        config = from_dict(MINIMAL)
        with pytest.raises(ValueError):
            config.scaled(0.5)


class TestLoadErrors:
    def test_missing_file(self):
        with pytest.raises(ParseError, match="not found"):
            load_scenario("/nonexistent/path.json")

    def test_invalid_json_reports_position(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{"seed": 1,,}')
        with pytest.raises(ParseError, match="line 1"):
            load_scenario(str(path))

    def test_non_object_root(self, tmp_path):
        path = tmp_path / "arr.json"
        path.write_text("[1, 2]")
        with pytest.raises(ValidationError):
            load_scenario(str(path))

    def test_round_trip(self, tmp_path):
        path = write_scenario(tmp_path, MINIMAL)
        config = load_scenario(path)
        assert isinstance(config, ScenarioConfig)
        assert config.ticks == 5
