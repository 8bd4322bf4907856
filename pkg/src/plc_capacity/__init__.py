"""Capacity bounds for periodically time-varying channels with
cyclostationary non-Gaussian noise.

The package lifts a periodic MIMO filter model to a block-stationary
two-tap form, evaluates water-filling capacity on a spectral grid, and
combines it with entropy-rate intervals of the noise into upper and
lower bounds on achievable rate.
"""

from .capacity import (
    BoundsReport,
    SweepResult,
    WaterfillResult,
    bounds,
    snr_sweep,
    waterfill,
)
from .config import RunSpec, load_config, parse_snr_spec, preset_run, resolve_config
from .entropy import (
    EntropyInterval,
    McEntropy,
    NoiseEntropyRate,
    gaussian_entropy,
    gaussian_entropy_rate,
    gm_entropy_interval,
    innovation_entropy,
    mc_entropy_estimate,
    nakagami_complex_entropy,
    noise_entropy_rate,
)
from .errors import (
    ConfigError,
    DivergentIntegralError,
    ModelError,
    NumericalError,
    SingularHeadTapError,
    SingularNoiseError,
)
from .model import (
    GmParams,
    InnovationPdf,
    LiftedChannel,
    LptvChannel,
    LptvShapingFilter,
    NakagamiParams,
    NoiseModel,
    complex_nakagami,
    complex_to_real,
    gaussian,
    gaussian_mixture,
    iid_noise,
    iid_shaping,
    lift,
    lifted_noise_autocorrelation,
    natural_block_length,
)
from .noisegen import (
    PresetId,
    SpatialProfile,
    build_preset,
    gm2_isotropic,
    middleton_a,
    profile_to_filter,
    sample_innovation,
    sample_lifted_noise,
    shaped_noise,
    sym_sqrt,
)
from .report import CSV_COLUMNS, csv_text, render_figure, write_csv, write_json
from .scenarios import SCENARIO_NAMES, Scenario, build_scenario
from .spectra import SpectralGrid, band_nodes, build_grid, integrate_band, szego_logdet

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "CSV_COLUMNS",
    "ConfigError",
    "DivergentIntegralError",
    "EntropyInterval",
    "GmParams",
    "InnovationPdf",
    "LiftedChannel",
    "LptvChannel",
    "LptvShapingFilter",
    "McEntropy",
    "ModelError",
    "NakagamiParams",
    "NoiseEntropyRate",
    "NoiseModel",
    "NumericalError",
    "PresetId",
    "RunSpec",
    "SCENARIO_NAMES",
    "Scenario",
    "SingularHeadTapError",
    "SingularNoiseError",
    "SpatialProfile",
    "SpectralGrid",
    "SweepResult",
    "WaterfillResult",
    "band_nodes",
    "bounds",
    "build_grid",
    "build_preset",
    "build_scenario",
    "complex_nakagami",
    "complex_to_real",
    "csv_text",
    "gaussian",
    "gaussian_entropy",
    "gaussian_entropy_rate",
    "gaussian_mixture",
    "gm2_isotropic",
    "gm_entropy_interval",
    "iid_noise",
    "iid_shaping",
    "innovation_entropy",
    "integrate_band",
    "lift",
    "lifted_noise_autocorrelation",
    "load_config",
    "mc_entropy_estimate",
    "middleton_a",
    "nakagami_complex_entropy",
    "natural_block_length",
    "noise_entropy_rate",
    "parse_snr_spec",
    "preset_run",
    "profile_to_filter",
    "render_figure",
    "resolve_config",
    "sample_innovation",
    "sample_lifted_noise",
    "shaped_noise",
    "snr_sweep",
    "sym_sqrt",
    "szego_logdet",
    "waterfill",
    "write_csv",
    "write_json",
]
