"""Named end-to-end scenarios and synthetic channel generators.

Measured in-building channel responses are not shipped; scenarios use a
deterministic synthetic generator instead: a fixed random impulse
response with geometrically decaying taps, modulated by a smooth periodic
gain envelope.  Two-by-two channels couple four such responses through a
fixed spatial correlation, mirroring how closely routed conductors
correlate.  Every scenario is fully determined by its name.

Rates are reported per channel use; scenarios whose signals originate as
complex baseband count one complex sample per use (spectral efficiency
factor 1), real passband scenarios count two real samples per hertz
(factor 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import (
    InnovationPdf,
    LptvChannel,
    NoiseModel,
    complex_to_real,
    iid_noise,
)
from .noisegen import (
    PresetId,
    SpatialProfile,
    build_preset,
    gm2_isotropic,
    shaped_noise,
)

SPATIAL_RHO = 0.9

# Fixed design constants for the synthetic scenarios.
_CHANNEL_PERIOD = 24
_CHANNEL_MEMORY = 4
_NOISE_PERIOD = 12
_NOISE_MEMORY = 4
_SCALAR_SEED = 41
_MIMO_SEED = 1007

# Per-phase noise power templates: a quiet stretch and a disturbed
# stretch per period, with mild spectral ripple so short shaping filters
# track the target spectrum closely.
_MEDIUM_LEVELS = (1.0,) * 8 + (4.0,) * 4
_MEDIUM_AMP = 0.1
_HEAVY_LEVELS = (1.0,) * 6 + (16.0,) * 6
_HEAVY_AMP = 0.15


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def synthetic_scalar_cir(
    period: int,
    memory: int,
    seed: int,
    envelope_depth: float = 0.35,
    decay: float = 0.55,
) -> np.ndarray:
    """One periodic scalar impulse response, shape (period, memory+1).

    Base taps are a fixed random draw shaped by decay^tau, with the head
    tap forced away from zero; each phase scales them by a smooth gain
    envelope 1 + envelope_depth cos(2 pi i / period + phi).  The result
    is normalized to unit mean power gain across phases.
    """
    if not (0.0 <= envelope_depth < 1.0):
        raise ValueError("envelope depth must lie in [0, 1)")
    rng = _rng(seed)
    draw = rng.standard_normal(memory + 1)
    base = draw * decay ** np.arange(memory + 1)
    base[0] = math.copysign(0.6 + 0.4 * abs(draw[0]), draw[0])
    phi = rng.uniform(0.0, 2.0 * np.pi)
    phases = np.arange(period)
    envelope = 1.0 + envelope_depth * np.cos(2.0 * np.pi * phases / period + phi)
    taps = envelope[:, None] * base[None, :]
    gain = float(np.mean(np.sum(taps**2, axis=1)))
    return taps / math.sqrt(gain)


def synthetic_scalar_channel(
    period: int = _CHANNEL_PERIOD,
    memory: int = _CHANNEL_MEMORY,
    seed: int = _SCALAR_SEED,
) -> LptvChannel:
    taps = synthetic_scalar_cir(period, memory, seed)
    return LptvChannel(taps[:, :, None, None])


def synthetic_mimo_channel(
    period: int = _CHANNEL_PERIOD,
    memory: int = _CHANNEL_MEMORY,
    seed: int = _MIMO_SEED,
    rho: float = SPATIAL_RHO,
) -> LptvChannel:
    """Two-by-two periodic channel from four coupled scalar responses.

    Each entry of the 2x2 response is an independent synthetic scalar
    response; transmit and receive sides are then coupled by the square
    root of [[1, rho], [rho, 1]] on both sides.
    """
    a = math.sqrt(1.0 + rho)
    b = math.sqrt(1.0 - rho)
    root = 0.5 * np.array([[a + b, a - b], [a - b, a + b]])
    cirs = [
        synthetic_scalar_cir(period, memory, seed * 4 + k) for k in range(4)
    ]
    taps = np.empty((period, memory + 1, 2, 2))
    for i in range(period):
        for tau in range(memory + 1):
            g = np.array(
                [
                    [cirs[0][i, tau], cirs[1][i, tau]],
                    [cirs[2][i, tau], cirs[3][i, tau]],
                ]
            )
            taps[i, tau] = root @ g @ root
    # per-branch mean power gain one, so scalar and 2x2 scenarios share scale
    gain = float(np.mean(np.sum(taps**2, axis=(1, 2, 3))) / 2.0)
    return LptvChannel(taps / math.sqrt(gain))


def identity_complex_channel() -> LptvChannel:
    """Memoryless unit complex channel in its real representation."""
    return complex_to_real(np.ones((1, 1, 1, 1), dtype=complex))


def medium_profile(dim: int) -> SpatialProfile:
    return SpatialProfile(
        dim=dim,
        period=_NOISE_PERIOD,
        memory=_NOISE_MEMORY,
        levels=_MEDIUM_LEVELS,
        shape_amp=_MEDIUM_AMP,
    )


def heavy_profile(dim: int) -> SpatialProfile:
    return SpatialProfile(
        dim=dim,
        period=_NOISE_PERIOD,
        memory=_NOISE_MEMORY,
        levels=_HEAVY_LEVELS,
        shape_amp=_HEAVY_AMP,
    )


@dataclass(frozen=True)
class Scenario:
    """A channel, a noise model, and how to report its rates."""

    name: str
    channel: LptvChannel
    noise: NoiseModel
    complex_origin: bool
    description: str

    @property
    def bps_factor(self) -> float:
        """Bits/sample to bits/s/Hz: 1 for complex-origin, else 2."""
        return 1.0 if self.complex_origin else 2.0


def _iid_scenario(name: str, innovation: InnovationPdf, description: str) -> Scenario:
    return Scenario(
        name=name,
        channel=identity_complex_channel(),
        noise=iid_noise(innovation),
        complex_origin=True,
        description=description,
    )


def _scalar_scenario(
    name: str, innovation: InnovationPdf, profile: SpatialProfile, description: str
) -> Scenario:
    return Scenario(
        name=name,
        channel=synthetic_scalar_channel(),
        noise=shaped_noise(innovation, profile),
        complex_origin=False,
        description=description,
    )


def _mimo_scenario(
    name: str, innovation: InnovationPdf, profile: SpatialProfile, description: str
) -> Scenario:
    return Scenario(
        name=name,
        channel=synthetic_mimo_channel(),
        noise=shaped_noise(innovation, profile),
        complex_origin=False,
        description=description,
    )


def _build(name: str) -> Scenario:
    if name == "nakagami-iid":
        return _iid_scenario(
            name,
            build_preset(PresetId.NAKAGAMI_08),
            "unit complex channel, i.i.d. complex-Nakagami noise (m=0.8)",
        )
    if name == "gm1-iid":
        return _iid_scenario(
            name,
            build_preset(PresetId.MIMO_GM),
            "unit complex channel, i.i.d. three-component mixture noise",
        )
    if name == "gaussian-iid":
        return _iid_scenario(
            name,
            build_preset(PresetId.GAUSSIAN_REF),
            "unit complex channel, circular Gaussian reference noise",
        )
    if name == "scalar-gm1":
        return _scalar_scenario(
            name,
            build_preset(PresetId.GM1),
            medium_profile(1),
            "periodic scalar channel, separated-means mixture noise, "
            "medium disturbance profile",
        )
    if name == "scalar-gm2":
        return _scalar_scenario(
            name,
            build_preset(PresetId.GM2),
            medium_profile(1),
            "periodic scalar channel, spread-variance mixture noise, "
            "medium disturbance profile",
        )
    if name == "scalar-mca":
        return _scalar_scenario(
            name,
            build_preset(PresetId.MCA),
            heavy_profile(1),
            "periodic scalar channel, Middleton class-A noise, "
            "heavy disturbance profile",
        )
    if name == "mimo-gm1":
        return _mimo_scenario(
            name,
            build_preset(PresetId.MIMO_GM),
            heavy_profile(2),
            "coupled 2x2 channel, two-channel mixture noise, "
            "heavy disturbance profile",
        )
    if name == "mimo-gm2":
        return _mimo_scenario(
            name,
            gm2_isotropic(2),
            heavy_profile(2),
            "coupled 2x2 channel, spread-variance mixture noise, "
            "heavy disturbance profile",
        )
    if name == "mimo-mca":
        return _mimo_scenario(
            name,
            build_preset(PresetId.MIMO_MCA),
            heavy_profile(2),
            "coupled 2x2 channel, two-channel Middleton class-A noise, "
            "heavy disturbance profile",
        )
    raise KeyError(name)


SCENARIO_NAMES = (
    "nakagami-iid",
    "gm1-iid",
    "gaussian-iid",
    "scalar-gm1",
    "scalar-gm2",
    "scalar-mca",
    "mimo-gm1",
    "mimo-gm2",
    "mimo-mca",
)


def build_scenario(name: str) -> Scenario:
    """Construct a named scenario; KeyError for unknown names."""
    if name not in SCENARIO_NAMES:
        raise KeyError(f"unknown scenario {name!r}")
    return _build(name)
