"""Scenario configuration documents.

A run is described by a single JSON document with a versioned ``schema``
field.  Documents either name a built-in scenario or spell out channel
and noise blocks; unknown keys are rejected everywhere, and every
diagnostic carries the dotted path of the offending field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ModelError
from .model import (
    LptvChannel,
    LptvShapingFilter,
    NoiseModel,
    complex_nakagami,
    complex_to_real,
    gaussian,
    gaussian_mixture,
    iid_shaping,
)
from .noisegen import (
    PresetId,
    SpatialProfile,
    build_preset,
    middleton_a,
    profile_to_filter,
)
from .scenarios import (
    SCENARIO_NAMES,
    Scenario,
    build_scenario,
    identity_complex_channel,
    synthetic_mimo_channel,
    synthetic_scalar_channel,
)

SCHEMA_VERSION = 1
DEFAULT_SNR_SPEC = "0:2:30"


@dataclass(frozen=True)
class RunSpec:
    """Everything a bounds run needs, resolved from a document or preset."""

    name: str
    scenario: Scenario
    snr_db: tuple
    n_omega: int
    seed: int
    block_length: int | None


def parse_snr_spec(spec) -> tuple:
    """SNR grid from 'A:STEP:B', a list of numbers, or a single number."""
    if isinstance(spec, (int, float)) and not isinstance(spec, bool):
        return (float(spec),)
    if isinstance(spec, (list, tuple)):
        if not spec:
            raise ConfigError("snr list must not be empty")
        out = []
        for v in spec:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ConfigError("snr list entries must be numbers")
            out.append(float(v))
        return tuple(out)
    if isinstance(spec, str):
        text = spec.strip()
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ConfigError(f"bad snr range {spec!r}; expected A:STEP:B")
            try:
                a, step, b = (float(p) for p in parts)
            except ValueError:
                raise ConfigError(f"bad snr range {spec!r}") from None
            if step <= 0:
                raise ConfigError("snr range step must be positive")
            if b < a:
                raise ConfigError("snr range end must not precede start")
            n = int(math.floor((b - a) / step + 1e-9)) + 1
            return tuple(a + i * step for i in range(n))
        try:
            values = [float(p) for p in text.split(",") if p.strip()]
        except ValueError:
            raise ConfigError(f"bad snr list {spec!r}") from None
        if not values:
            raise ConfigError("snr list must not be empty")
        return tuple(values)
    raise ConfigError("snr must be a number, list, or 'A:STEP:B' string")


def _require_mapping(obj, path: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"{path}: expected an object")
    return obj

def _check_keys(obj: dict, path: str, allowed: set, required: set):
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"{path}: missing key(s) {sorted(missing)}")


def _number(obj, path: str, minimum=None, maximum=None) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(f"{path}: expected a number")
    v = float(obj)
    if not math.isfinite(v):
        raise ConfigError(f"{path}: must be finite")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{path}: must be at least {minimum}")
    if maximum is not None and v > maximum:
        raise ConfigError(f"{path}: must be at most {maximum}")
    return v


def _integer(obj, path: str, minimum=None) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ConfigError(f"{path}: expected an integer")
    if minimum is not None and obj < minimum:
        raise ConfigError(f"{path}: must be at least {minimum}")
    return obj


def _array(obj, path: str, ndim: int) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{path}: expected a numeric array") from None
    if arr.ndim != ndim:
        raise ConfigError(f"{path}: expected a {ndim}-dimensional array")
    if not np.all(np.isfinite(arr)):
        raise ConfigError(f"{path}: entries must be finite")
    return arr


def _parse_channel(obj, path: str) -> tuple[LptvChannel, bool]:
    obj = _require_mapping(obj, path)
    kind = obj.get("kind")
    if kind == "identity-complex":
        _check_keys(obj, path, {"kind"}, {"kind"})
        return identity_complex_channel(), True
    if kind == "real-taps":
        _check_keys(obj, path, {"kind", "taps"}, {"kind", "taps"})
        taps = _array(obj["taps"], f"{path}.taps", 4)
        try:
            return LptvChannel(taps), False
        except ModelError as exc:
            raise ConfigError(f"{path}.taps: {exc}") from exc
    if kind == "complex-taps":
        _check_keys(
            obj, path, {"kind", "taps_real", "taps_imag"},
            {"kind", "taps_real", "taps_imag"},
        )
        re = _array(obj["taps_real"], f"{path}.taps_real", 4)
        im = _array(obj["taps_imag"], f"{path}.taps_imag", 4)
        if re.shape != im.shape:
            raise ConfigError(f"{path}: taps_real and taps_imag shapes differ")
        return complex_to_real(re + 1j * im), True
    if kind == "synthetic-scalar":
        _check_keys(
            obj, path, {"kind", "period", "memory", "seed"}, {"kind"}
        )
        return (
            synthetic_scalar_channel(
                period=_integer(obj.get("period", 24), f"{path}.period", 1),
                memory=_integer(obj.get("memory", 4), f"{path}.memory", 0),
                seed=_integer(obj.get("seed", 41), f"{path}.seed", 0),
            ),
            False,
        )
    if kind == "synthetic-mimo":
        _check_keys(
            obj, path, {"kind", "period", "memory", "seed", "rho"}, {"kind"}
        )
        return (
            synthetic_mimo_channel(
                period=_integer(obj.get("period", 24), f"{path}.period", 1),
                memory=_integer(obj.get("memory", 4), f"{path}.memory", 0),
                seed=_integer(obj.get("seed", 1007), f"{path}.seed", 0),
                rho=_number(obj.get("rho", 0.9), f"{path}.rho", -0.999, 0.999),
            ),
            False,
        )
    raise ConfigError(
        f"{path}.kind: expected one of identity-complex, real-taps, "
        f"complex-taps, synthetic-scalar, synthetic-mimo"
    )


def _parse_innovation(obj, path: str):
    obj = _require_mapping(obj, path)
    kind = obj.get("kind")
    try:
        if kind == "preset":
            _check_keys(obj, path, {"kind", "id"}, {"kind", "id"})
            name = obj["id"]
            try:
                preset = PresetId(name)
            except ValueError:
                raise ConfigError(
                    f"{path}.id: unknown preset {name!r}; known: "
                    + ", ".join(p.value for p in PresetId)
                ) from None
            return build_preset(preset)
        if kind == "gm":
            _check_keys(
                obj, path, {"kind", "priors", "means", "covariances"},
                {"kind", "priors", "means", "covariances"},
            )
            priors = _array(obj["priors"], f"{path}.priors", 1)
            means = np.asarray(obj["means"], dtype=float)
            covs = np.asarray(obj["covariances"], dtype=float)
            return gaussian_mixture(priors, means, covs)
        if kind == "nakagami":
            _check_keys(obj, path, {"kind", "m", "omega"}, {"kind", "m"})
            return complex_nakagami(
                _number(obj["m"], f"{path}.m", 0.5),
                _number(obj.get("omega", 1.0), f"{path}.omega"),
            )
        if kind == "gaussian":
            _check_keys(obj, path, {"kind", "covariance"}, {"kind", "covariance"})
            return gaussian(_array(obj["covariance"], f"{path}.covariance", 2))
        if kind == "middleton":
            _check_keys(
                obj, path, {"kind", "overlap", "gamma", "terms", "dim"}, {"kind"}
            )
            return middleton_a(
                overlap=_number(obj.get("overlap", 0.1), f"{path}.overlap"),
                gamma=_number(obj.get("gamma", 0.01), f"{path}.gamma"),
                n_terms=_integer(obj.get("terms", 10), f"{path}.terms", 1),
                dim=_integer(obj.get("dim", 1), f"{path}.dim", 1),
            )
    except ModelError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(
        f"{path}.kind: expected one of preset, gm, nakagami, gaussian, middleton"
    )


def _parse_shaping(obj, path: str, dim: int) -> LptvShapingFilter:
    obj = _require_mapping(obj, path)
    kind = obj.get("kind")
    try:
        if kind == "iid":
            _check_keys(obj, path, {"kind"}, {"kind"})
            return iid_shaping(dim)
        if kind == "taps":
            _check_keys(obj, path, {"kind", "taps"}, {"kind", "taps"})
            return LptvShapingFilter(_array(obj["taps"], f"{path}.taps", 4))
        if kind == "profile":
            allowed = {
                "kind", "period", "memory", "levels", "shape_amp",
                "rho_w_max", "rho_w_slope",
            }
            _check_keys(obj, path, allowed, {"kind", "period", "levels"})
            levels = _array(obj["levels"], f"{path}.levels", 1)
            profile = SpatialProfile(
                dim=dim,
                period=_integer(obj["period"], f"{path}.period", 1),
                memory=_integer(obj.get("memory", 4), f"{path}.memory", 0),
                levels=tuple(float(v) for v in levels),
                shape_amp=_number(obj.get("shape_amp", 0.1), f"{path}.shape_amp", 0.0),
                rho_w_max=_number(obj.get("rho_w_max", 0.7), f"{path}.rho_w_max"),
                rho_w_slope=_number(
                    obj.get("rho_w_slope", 1.0 / (2.0 * math.pi)),
                    f"{path}.rho_w_slope",
                ),
            )
            return profile_to_filter(profile)
    except ModelError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    raise ConfigError(f"{path}.kind: expected one of iid, taps, profile")


def _parse_noise(obj, path: str) -> NoiseModel:
    obj = _require_mapping(obj, path)
    _check_keys(obj, path, {"innovation", "shaping"}, {"innovation"})
    innovation = _parse_innovation(obj["innovation"], f"{path}.innovation")
    if "shaping" in obj:
        shaping = _parse_shaping(obj["shaping"], f"{path}.shaping", innovation.dim)
    else:
        shaping = iid_shaping(innovation.dim)
    try:
        return NoiseModel(innovation=innovation, shaping=shaping)
    except ModelError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def resolve_config(doc) -> RunSpec:
    """Validate a parsed JSON document and build the run it describes."""
    doc = _require_mapping(doc, "config")
    allowed = {
        "schema", "name", "scenario", "channel", "noise", "snr_db",
        "n_omega", "seed", "block_length", "complex_origin",
    }
    _check_keys(doc, "config", allowed, {"schema"})
    version = doc["schema"]
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"config.schema: unsupported version {version!r}; this build "
            f"reads schema {SCHEMA_VERSION}"
        )
    base = None
    if "scenario" in doc:
        name = doc["scenario"]
        if name not in SCENARIO_NAMES:
            raise ConfigError(
                f"config.scenario: unknown scenario {name!r}; known: "
                + ", ".join(SCENARIO_NAMES)
            )
        base = build_scenario(name)
    channel = base.channel if base else None
    complex_origin = base.complex_origin if base else False
    if "channel" in doc:
        channel, complex_origin = _parse_channel(doc["channel"], "config.channel")
    if channel is None:
        raise ConfigError("config: needs either a scenario or a channel block")
    noise = base.noise if base else None
    if "noise" in doc:
        noise = _parse_noise(doc["noise"], "config.noise")
    if noise is None:
        raise ConfigError("config: needs either a scenario or a noise block")
    if "complex_origin" in doc:
        flag = doc["complex_origin"]
        if not isinstance(flag, bool):
            raise ConfigError("config.complex_origin: expected true or false")
        complex_origin = flag
    if noise.shaping.n != channel.n_out:
        raise ConfigError(
            f"config: noise dimension {noise.shaping.n} does not match "
            f"channel outputs {channel.n_out}"
        )
    name = doc.get("name")
    if name is None:
        name = base.name if base else "custom"
    elif not isinstance(name, str):
        raise ConfigError("config.name: expected a string")
    snr = parse_snr_spec(doc.get("snr_db", DEFAULT_SNR_SPEC))
    n_omega = _integer(doc.get("n_omega", 512), "config.n_omega", 2)
    seed = _integer(doc.get("seed", 0), "config.seed", 0)
    block = None
    if "block_length" in doc:
        block = _integer(doc["block_length"], "config.block_length", 1)
    desc = base.description if base else "configured scenario"
    scenario = Scenario(
        name=name,
        channel=channel,
        noise=noise,
        complex_origin=complex_origin,
        description=desc,
    )
    return RunSpec(
        name=name,
        scenario=scenario,
        snr_db=snr,
        n_omega=n_omega,
        seed=seed,
        block_length=block,
    )


def load_config(path: str) -> RunSpec:
    """Read, parse and resolve a JSON config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"config {path!r} is not valid JSON: line {exc.lineno}, "
            f"column {exc.colno}: {exc.msg}"
        ) from None
    return resolve_config(doc)


def preset_run(name: str, snr=None, n_omega: int = 512, seed: int = 0) -> RunSpec:
    """RunSpec for a built-in scenario name."""
    if name not in SCENARIO_NAMES:
        raise ConfigError(
            f"unknown scenario {name!r}; known: " + ", ".join(SCENARIO_NAMES)
        )
    scenario = build_scenario(name)
    snr_tuple = parse_snr_spec(snr if snr is not None else DEFAULT_SNR_SPEC)
    return RunSpec(
        name=name,
        scenario=scenario,
        snr_db=snr_tuple,
        n_omega=n_omega,
        seed=seed,
        block_length=None,
    )
