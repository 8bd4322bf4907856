"""Noise presets, samplers, and periodic shaping-filter synthesis.

Presets collect innovation laws measured or standardized for in-building
power-line environments: three-component Gaussian mixtures with either
separated means (gm1) or widely spread variances (gm2), a truncated
Middleton class-A mixture (mca), a complex-Nakagami law, their two-channel
isotropic counterparts, and a circular Gaussian reference.  All presets
are normalized to unit per-sample total variance so signal-to-noise ratios
line up across laws.

Shaping filters are synthesized from a per-phase power profile: the
target spectral response is the symmetric square root of the spatial
coherence times the square root of the per-phase spectrum, inverse
transformed and truncated to the requested memory.  The truncation biases
the realized spectrum; downstream computations always use the realized
taps, never the nominal profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln

from .errors import ModelError
from .model import (
    InnovationPdf,
    LiftedChannel,
    LptvShapingFilter,
    NoiseModel,
    complex_nakagami,
    gaussian,
    gaussian_mixture,
)


class PresetId(str, Enum):
    GM1 = "gm1"
    GM2 = "gm2"
    MCA = "mca"
    NAKAGAMI_08 = "nakagami-08"
    MIMO_GM = "mimo-gm"
    MIMO_MCA = "mimo-mca"
    GAUSSIAN_REF = "gaussian-ref"


# Three-component mixture with separated means (narrowband-interference
# flavor): priors, scalar means, component variances.
_GM1_PRIORS = (0.7, 0.2, 0.1)
_GM1_MEANS_1D = (5.0, -8.0, -19.0)
_GM1_MEANS_2D = ((5.0, 4.0), (-8.0, -16.0), (-19.0, 4.0))
_GM1_VARS = (5.0, 2.0, 1.0)

# Zero-mean mixture with variances spanning three decades (impulsive
# background flavor).
_GM2_PRIORS = (0.9, 0.07, 0.03)
_GM2_VARS = (1.0, 100.0, 1000.0)

# Truncated Middleton class-A defaults.
_MCA_OVERLAP = 0.1
_MCA_GAMMA = 0.01
_MCA_TERMS = 10


def middleton_a(
    overlap: float = _MCA_OVERLAP,
    gamma: float = _MCA_GAMMA,
    n_terms: int = _MCA_TERMS,
    dim: int = 1,
    normalize: bool = True,
) -> InnovationPdf:
    """Truncated Middleton class-A law as a Gaussian mixture.

    Component n in 0..n_terms-1 carries the renormalized Poisson weight
    e^{-A} A^n / n! and variance (n/A + gamma) / (1 + gamma); the weights
    make the untruncated law have unit variance exactly.
    """
    if overlap <= 0 or gamma <= 0 or n_terms < 1:
        raise ModelError("Middleton parameters must be positive")
    n = np.arange(n_terms)
    log_w = -overlap + n * math.log(overlap) - gammaln(n + 1.0)
    weights = np.exp(log_w)
    weights = weights / weights.sum()
    variances = (n / overlap + gamma) / (1.0 + gamma)
    means = np.zeros((n_terms, dim))
    covs = variances[:, None, None] * np.eye(dim)[None, :, :]
    return gaussian_mixture(weights, means, covs, normalize=normalize)


def build_preset(preset: PresetId | str, normalize: bool = True) -> InnovationPdf:
    """Innovation law for a named preset (normalized unless disabled)."""
    preset = PresetId(preset)
    if preset is PresetId.GM1:
        return gaussian_mixture(
            _GM1_PRIORS,
            np.array(_GM1_MEANS_1D)[:, None],
            np.array(_GM1_VARS)[:, None, None],
            normalize=normalize,
        )
    if preset is PresetId.GM2:
        return gaussian_mixture(
            _GM2_PRIORS,
            np.zeros((3, 1)),
            np.array(_GM2_VARS)[:, None, None],
            normalize=normalize,
        )
    if preset is PresetId.MCA:
        return middleton_a(dim=1, normalize=normalize)
    if preset is PresetId.NAKAGAMI_08:
        return complex_nakagami(0.8, 1.0, normalize=normalize)
    if preset is PresetId.MIMO_GM:
        covs = np.array(_GM1_VARS)[:, None, None] * np.eye(2)[None, :, :]
        return gaussian_mixture(
            _GM1_PRIORS, np.array(_GM1_MEANS_2D), covs, normalize=normalize
        )
    if preset is PresetId.MIMO_MCA:
        return middleton_a(dim=2, normalize=normalize)
    if preset is PresetId.GAUSSIAN_REF:
        return gaussian(0.5 * np.eye(2), normalize=normalize)
    raise ModelError(f"unknown preset {preset!r}")


def gm2_isotropic(dim: int = 2, normalize: bool = True) -> InnovationPdf:
    """Two-channel variant of the gm2 preset: same weights, c_n * I_dim blocks."""
    covs = np.array(_GM2_VARS)[:, None, None] * np.eye(dim)[None, :, :]
    return gaussian_mixture(
        _GM2_PRIORS, np.zeros((3, dim)), covs, normalize=normalize
    )


def _rng(seed: int) -> np.random.Generator:
    # counter-based generator: streams for distinct seeds never collide
    return np.random.Generator(np.random.Philox(key=np.uint64(seed)))


def sample_innovation(pdf: InnovationPdf, n: int, seed: int) -> np.ndarray:
    """Draw n innovation vectors, deterministically in the seed."""
    rng = _rng(seed)
    if pdf.kind == "gm":
        g = pdf.gm
        comp = rng.choice(g.n_comp, size=n, p=g.priors)
        z = rng.standard_normal((n, g.dim))
        chols = np.linalg.cholesky(g.covariances)
        return g.means[comp] + np.einsum("nij,nj->ni", chols[comp], z)
    if pdf.kind == "nakagami":
        p = pdf.nakagami
        radius = np.sqrt(rng.gamma(shape=p.m, scale=p.omega / p.m, size=n))
        theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
        return np.column_stack([radius * np.cos(theta), radius * np.sin(theta)])
    chol = np.linalg.cholesky(pdf.covariance)
    return rng.standard_normal((n, pdf.dim)) @ chol.T


def sample_lifted_noise(
    model: NoiseModel, lifted: LiftedChannel, n_blocks: int, seed: int
) -> np.ndarray:
    """Stationary noise blocks W[k] = F0 U[k] + F1 U[k-1], shape (n_blocks, per*dim).

    One extra innovation block is drawn and discarded as warm-up so every
    returned block sees a valid predecessor.
    """
    if n_blocks < 1:
        raise ValueError("need at least one block")
    dim = model.innovation.dim
    per = lifted.per
    u = sample_innovation(model.innovation, (n_blocks + 1) * per, seed)
    u = u.reshape(n_blocks + 1, per * dim)
    w = u[1:] @ lifted.f0.T + u[:-1] @ lifted.f1.T
    return w


def sym_sqrt(mat: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root via eigendecomposition."""
    vals, vecs = np.linalg.eigh(np.asarray(mat, dtype=float))
    if vals.min() < -1e-12:
        raise ModelError("matrix is not positive semidefinite")
    return (vecs * np.sqrt(np.maximum(vals, 0.0))) @ vecs.T


@dataclass(frozen=True)
class SpatialProfile:
    """Per-phase noise power profile with optional two-channel coherence.

    levels[i] scales the noise spectrum at phase i; within a phase the
    spectrum is levels[i] * (1 + shape_amp cos omega).  For dim=2 the
    channels are coupled by the coherence rho_w(omega) = rho_w_max
    - rho_w_slope * |omega|.
    """

    dim: int
    period: int
    memory: int
    levels: tuple
    shape_amp: float = 0.1
    rho_w_max: float = 0.7
    rho_w_slope: float = 1.0 / (2.0 * math.pi)
    n_fft: int = 512

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ModelError("profile supports one or two channels")
        if len(self.levels) != self.period:
            raise ModelError("need one level per phase")
        if any(lv <= 0 for lv in self.levels):
            raise ModelError("levels must be positive")
        if not (0.0 <= self.shape_amp < 1.0):
            raise ModelError("shape_amp must lie in [0, 1)")
        if self.memory < 0 or self.memory + 1 > self.n_fft:
            raise ModelError("memory must be non-negative and below n_fft")

    def rho_w(self, omega: float) -> float:
        rho = self.rho_w_max - self.rho_w_slope * abs(omega)
        if abs(rho) >= 1.0:
            raise ModelError("coherence magnitude must stay below one")
        return rho

    def spectrum(self, phase: int, omega) -> np.ndarray:
        """Per-phase scalar spectrum levels[i] (1 + shape_amp cos omega)."""
        return self.levels[phase] * (1.0 + self.shape_amp * np.cos(omega))

    def target_psd(self, phase: int, omega: float) -> np.ndarray:
        s = float(self.spectrum(phase, omega))
        if self.dim == 1:
            return np.array([[s]])
        rho = self.rho_w(omega)
        return s * np.array([[1.0, rho], [rho, 1.0]])


def profile_to_filter(profile: SpatialProfile) -> LptvShapingFilter:
    """Synthesize periodic shaping taps matching a power profile.

    Per phase, the zero-phase target response (coherence square root times
    the square root of the spectrum) is inverse transformed on a dense
    grid and truncated to lags 0..memory.  The response is real and even
    in omega, so taps are real; truncation makes the realized spectrum an
    approximation of the target, closest for smooth profiles.
    """
    n_fft = profile.n_fft
    omega = -np.pi + 2.0 * np.pi * np.arange(n_fft) / n_fft
    taps = np.zeros((profile.period, profile.memory + 1, profile.dim, profile.dim))
    for i in range(profile.period):
        resp = np.empty((n_fft, profile.dim, profile.dim))
        s = profile.spectrum(i, omega)
        if np.any(s <= 0):
            raise ModelError("profile spectrum must stay positive")
        if profile.dim == 1:
            resp[:, 0, 0] = np.sqrt(s)
        else:
            for g in range(n_fft):
                rho = profile.rho_w(omega[g])
                root = sym_sqrt(np.array([[1.0, rho], [rho, 1.0]]))
                resp[g] = math.sqrt(s[g]) * root
        for tau in range(profile.memory + 1):
            kernel = np.exp(1j * omega * tau)
            coeff = np.tensordot(kernel, resp, axes=(0, 0)) / n_fft
            if np.max(np.abs(coeff.imag)) > 1e-9 * max(1.0, np.max(np.abs(coeff))):
                raise ModelError("profile response is not conjugate symmetric")
            taps[i, tau] = coeff.real
    return LptvShapingFilter(taps)


def shaped_noise(
    innovation: InnovationPdf, profile: SpatialProfile
) -> NoiseModel:
    if innovation.dim != profile.dim:
        raise ModelError("innovation and profile dimensions disagree")
    return NoiseModel(innovation=innovation, shaping=profile_to_filter(profile))
