"""Configuration documents: SNR grammar, schema validation, overrides."""

import json

import numpy as np
import pytest

from plc_capacity.config import (
    load_config,
    parse_snr_spec,
    preset_run,
    resolve_config,
)
from plc_capacity.errors import ConfigError, SingularHeadTapError
from plc_capacity.scenarios import SCENARIO_NAMES


def test_snr_range_form_is_inclusive():
    assert parse_snr_spec("0:2:30") == tuple(float(v) for v in range(0, 31, 2))
    assert parse_snr_spec("0:0.3:0.9") == pytest.approx((0.0, 0.3, 0.6, 0.9))
    assert parse_snr_spec("5:10:5") == (5.0,)


def test_snr_list_and_scalar_forms():
    assert parse_snr_spec("1, 2.5, -3") == (1.0, 2.5, -3.0)
    assert parse_snr_spec([0, 10]) == (0.0, 10.0)
    assert parse_snr_spec(12) == (12.0,)


def test_snr_bad_specs():
    for bad in ("1:2", "a:b:c", "1:0:5", "10:2:0", "", [], ["x"], True, None):
        with pytest.raises(ConfigError):
            parse_snr_spec(bad)


def test_resolve_minimal_scenario_document():
    spec = resolve_config({"schema": 1, "scenario": "gm1-iid"})
    assert spec.name == "gm1-iid"
    assert spec.snr_db == parse_snr_spec("0:2:30")
    assert spec.n_omega == 512 and spec.seed == 0 and spec.block_length is None


def test_resolve_rejects_wrong_schema():
    with pytest.raises(ConfigError):
        resolve_config({"schema": 99, "scenario": "gm1-iid"})
    with pytest.raises(ConfigError):
        resolve_config({"scenario": "gm1-iid"})


def test_resolve_rejects_unknown_keys_with_path():
    with pytest.raises(ConfigError) as err:
        resolve_config({"schema": 1, "scenario": "gm1-iid", "snr": "0:2:30"})
    assert "snr" in str(err.value)


def test_resolve_needs_channel_and_noise():
    with pytest.raises(ConfigError):
        resolve_config({"schema": 1, "noise": {"innovation": {"kind": "preset", "id": "gm1"}}})
    with pytest.raises(ConfigError):
        resolve_config({"schema": 1, "channel": {"kind": "identity-complex"}})


def test_scenario_with_noise_override():
    doc = {
        "schema": 1,
        "scenario": "scalar-gm1",
        "noise": {"innovation": {"kind": "preset", "id": "gm2"}},
        "snr_db": 6,
    }
    spec = resolve_config(doc)
    assert spec.scenario.noise.innovation.kind == "gm"
    assert spec.snr_db == (6.0,)
    # the override must still match the channel dimension
    doc["noise"] = {"innovation": {"kind": "preset", "id": "mimo-gm"}}
    with pytest.raises(ConfigError):
        resolve_config(doc)


def test_explicit_taps_channel():
    doc = {
        "schema": 1,
        "channel": {"kind": "real-taps", "taps": [[[[2.0]]]]},
        "noise": {"innovation": {"kind": "gaussian", "covariance": [[1.0]]}},
    }
    spec = resolve_config(doc)
    assert spec.scenario.channel.taps[0, 0, 0, 0] == 2.0
    assert not spec.scenario.complex_origin


def test_complex_taps_channel_sets_origin_flag():
    doc = {
        "schema": 1,
        "channel": {
            "kind": "complex-taps",
            "taps_real": [[[[1.0]]]],
            "taps_imag": [[[[0.5]]]],
        },
        "noise": {"innovation": {"kind": "preset", "id": "mimo-gm"}},
    }
    spec = resolve_config(doc)
    assert spec.scenario.complex_origin
    assert spec.scenario.channel.n_out == 2
    np.testing.assert_allclose(
        spec.scenario.channel.taps[0, 0], [[1.0, -0.5], [0.5, 1.0]]
    )


def test_synthetic_channels_by_config():
    doc = {
        "schema": 1,
        "channel": {"kind": "synthetic-scalar", "seed": 3},
        "noise": {"innovation": {"kind": "preset", "id": "gm1"}},
    }
    spec = resolve_config(doc)
    assert spec.scenario.channel.n_in == 1
    doc2 = {
        "schema": 1,
        "channel": {"kind": "synthetic-mimo", "seed": 3},
        "noise": {"innovation": {"kind": "preset", "id": "mimo-gm"}},
    }
    spec2 = resolve_config(doc2)
    assert spec2.scenario.channel.n_in == 2


def test_nakagami_innovation_by_config():
    doc = {
        "schema": 1,
        "channel": {"kind": "identity-complex"},
        "noise": {"innovation": {"kind": "nakagami", "m": 0.8, "omega": 1.0}},
    }
    spec = resolve_config(doc)
    assert spec.scenario.noise.innovation.kind == "nakagami"


def test_middleton_innovation_by_config():
    doc = {
        "schema": 1,
        "channel": {"kind": "real-taps", "taps": [[[[1.0]]]]},
        "noise": {
            "innovation": {
                "kind": "middleton",
                "overlap": 0.1,
                "gamma": 0.01,
                "terms": 8,
                "dim": 1,
            }
        },
    }
    spec = resolve_config(doc)
    assert spec.scenario.noise.innovation.gm.n_comp == 8


def test_singular_shaping_head_keeps_its_cause():
    doc = {
        "schema": 1,
        "channel": {"kind": "real-taps", "taps": [[[[1.0]]]]},
        "noise": {
            "innovation": {"kind": "gaussian", "covariance": [[1.0]]},
            "shaping": {"kind": "taps", "taps": [[[[0.0]], [[1.0]]]]},
        },
    }
    with pytest.raises(ConfigError) as err:
        resolve_config(doc)
    assert isinstance(err.value.__cause__, SingularHeadTapError)


def test_profile_shaping_by_config():
    doc = {
        "schema": 1,
        "channel": {"kind": "real-taps", "taps": [[[[1.0]]]]},
        "noise": {
            "innovation": {"kind": "preset", "id": "gm1"},
            "shaping": {
                "kind": "profile",
                "period": 4,
                "levels": [1.0, 1.0, 4.0, 4.0],
                "memory": 3,
            },
        },
    }
    spec = resolve_config(doc)
    assert spec.scenario.noise.shaping.period == 4
    assert spec.scenario.noise.shaping.memory == 3


def test_load_config_reports_json_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"schema": 1,}')
    with pytest.raises(ConfigError) as err:
        load_config(str(path))
    assert "line" in str(err.value)


def test_load_config_round_trip(tmp_path):
    doc = {"schema": 1, "scenario": "mimo-mca", "snr_db": "0:5:10", "seed": 7}
    path = tmp_path / "run.json"
    path.write_text(json.dumps(doc))
    spec = load_config(str(path))
    assert spec.seed == 7
    assert spec.snr_db == (0.0, 5.0, 10.0)


def test_preset_run_covers_every_scenario():
    for name in SCENARIO_NAMES:
        spec = preset_run(name)
        assert spec.name == name
        assert spec.scenario.channel.n_out == spec.scenario.noise.shaping.n
    with pytest.raises(ConfigError):
        preset_run("missing")
