"""Differential entropies and entropy rates, in bits.

Non-Gaussian innovation laws rarely admit closed-form entropies; mixture
laws get a deterministic interval (a lower bound from the mixture's
quadratic cross-correlation and an upper bound from component entropies
plus mixing entropy), while the complex-Nakagami law has an exact closed
form.  Filtered noise adds a log-determinant spectral term to the
innovation entropy, exactly, so intervals propagate through shaping
filters without widening.

`mc_entropy_estimate` is a sampling cross-check (nearest-neighbor
estimator), kept separate from the deterministic path; bounds never
consume it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma, gammaln, logsumexp

from ._env import thread_cap
from .model import GmParams, InnovationPdf, LiftedChannel, NakagamiParams, NoiseModel
from .spectra import DEFAULT_N_OMEGA, band_nodes, szego_logdet

LN2 = math.log(2.0)


@dataclass(frozen=True)
class EntropyInterval:
    """Closed interval certain to contain a differential entropy, in bits."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError("entropy interval endpoints must be finite")
        if self.lower > self.upper + 1e-9:
            raise ValueError(
                f"entropy interval is inverted: [{self.lower}, {self.upper}]"
            )

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def exact(self) -> bool:
        return self.width <= 1e-12

    def shift(self, offset: float) -> "EntropyInterval":
        return EntropyInterval(self.lower + offset, self.upper + offset)

    def scale(self, factor: float) -> "EntropyInterval":
        if factor <= 0:
            raise ValueError("interval scale factor must be positive")
        return EntropyInterval(self.lower * factor, self.upper * factor)


def gaussian_entropy(covariance) -> float:
    """Entropy of a Gaussian vector: (1/2) log2 |2 pi e C|."""
    cov = np.asarray(covariance, dtype=float)
    d = cov.shape[0]
    sign, logabs = np.linalg.slogdet(cov)
    if sign <= 0 or not np.isfinite(logabs):
        raise ValueError("covariance must be positive definite")
    return 0.5 * (d * math.log2(2.0 * math.pi * math.e) + logabs / LN2)


def nakagami_complex_entropy(params: NakagamiParams) -> float:
    """Entropy of a circular complex variate with Nakagami-m amplitude.

    With shape m and spread omega = E|W|^2,

        h = psi(m)/(2 ln 2)
            + log2( (pi omega / m) Gamma(m) e^{(2m - (2m-1) psi(m))/2} ),

    evaluated through log-Gamma so large shapes cannot overflow.  At m=1
    this reduces to log2(pi e omega), the circular Gaussian value.
    """
    m = float(params.m)
    omega = float(params.omega)
    if not (m >= 0.5) or not (omega > 0):
        raise ValueError("need m >= 1/2 and omega > 0")
    psi = digamma(m)
    return (
        psi / (2.0 * LN2)
        + math.log2(math.pi * omega / m)
        + gammaln(m) / LN2
        + (2.0 * m - (2.0 * m - 1.0) * psi) / (2.0 * LN2)
    )


def gm_entropy_interval(params: GmParams) -> EntropyInterval:
    """Deterministic entropy bracket for a Gaussian mixture.

    Lower endpoint: -sum_n a_n log2 sum_m a_m N(mu_n; mu_m, C_n + C_m).
    Upper endpoint: sum_n a_n ( (1/2) log2 |2 pi e C_n| - log2 a_n ).
    A single-component mixture is Gaussian, so both endpoints collapse to
    the exact value.
    """
    priors = np.asarray(params.priors, dtype=float)
    means = np.asarray(params.means, dtype=float)
    covs = np.asarray(params.covariances, dtype=float)
    n_comp, d = means.shape
    if n_comp == 1:
        exact = gaussian_entropy(covs[0])
        return EntropyInterval(exact, exact)
    log_priors = np.log(priors)
    # pairwise log N(mu_n; mu_m, C_n + C_m), nats
    lp = np.empty((n_comp, n_comp))
    for n in range(n_comp):
        for m in range(n_comp):
            cov = covs[n] + covs[m]
            sign, logdet = np.linalg.slogdet(cov)
            if sign <= 0:
                raise ValueError("component covariances must be positive definite")
            diff = means[n] - means[m]
            quad = float(diff @ np.linalg.solve(cov, diff))
            lp[n, m] = -0.5 * (d * math.log(2.0 * math.pi) + logdet + quad)
    inner = logsumexp(lp + log_priors[None, :], axis=1)
    lower = -float(priors @ inner) / LN2
    comp_entropy = np.array([gaussian_entropy(covs[n]) for n in range(n_comp)])
    mixing = -float(priors @ (np.log(priors) / LN2))
    upper = float(priors @ comp_entropy) + mixing
    return EntropyInterval(lower, upper)


def innovation_entropy(pdf: InnovationPdf) -> EntropyInterval:
    """Entropy of one innovation draw; exact laws yield a zero-width interval."""
    if pdf.kind == "gm":
        return gm_entropy_interval(pdf.gm)
    if pdf.kind == "nakagami":
        h = nakagami_complex_entropy(pdf.nakagami)
        return EntropyInterval(h, h)
    h = gaussian_entropy(pdf.covariance)
    return EntropyInterval(h, h)


def gaussian_entropy_rate(grid) -> float:
    """Entropy rate per block of a Gaussian process with the grid's density.

    (1/4 pi) integral of log2 |2 pi e C(omega)| over the band; diverges
    (and raises) when the density is singular at a node.
    """
    d = grid.psd.shape[1]
    szego = szego_logdet(grid.psd, grid.nodes)
    return 0.5 * (d * math.log2(2.0 * math.pi * math.e) + szego)


@dataclass(frozen=True)
class NoiseEntropyRate:
    """Entropy rate of the shaped noise with its building blocks.

    per_block is for one lifted block, per_sample the same divided by the
    block length; szego_gain_bits is the shaping filter's log-determinant
    spectral term for one block; innovation is per original sample.
    """

    per_block: EntropyInterval
    per_sample: EntropyInterval
    szego_gain_bits: float
    innovation: EntropyInterval


def noise_entropy_rate(
    model: NoiseModel, lifted: LiftedChannel, n_omega: int = DEFAULT_N_OMEGA
) -> NoiseEntropyRate:
    """Entropy rate of the stationary noise blocks.

    The rate for one block equals the shaping filter's spectral
    log-determinant term plus the entropy of one block of innovations;
    filtering by an invertible filter changes entropy by exactly that
    spectral term, so exact innovations give exact rates and intervals
    keep their width.
    """
    nodes, _ = band_nodes(n_omega)
    phase = np.exp(-1j * nodes)
    field = lifted.f0[None, :, :] + lifted.f1[None, :, :] * phase[:, None, None]
    szego = szego_logdet(field, nodes)
    h_u = innovation_entropy(model.innovation)
    per_block = h_u.scale(lifted.per).shift(szego)
    return NoiseEntropyRate(
        per_block=per_block,
        per_sample=per_block.scale(1.0 / lifted.per),
        szego_gain_bits=szego,
        innovation=h_u,
    )


@dataclass(frozen=True)
class McEntropy:
    """Sampling entropy estimate with its jackknife standard error, in bits."""

    bits: float
    stderr: float
    n_samples: int
    dim: int
    k: int


def mc_entropy_estimate(samples, k: int = 4, seed: int = 0) -> McEntropy:
    """Nearest-neighbor entropy estimate of an i.i.d. sample.

    Kozachenko-Leonenko estimator with Euclidean balls: digamma-corrected
    log of the k-th neighbor distance, averaged over points.  Standard
    error comes from a delete-block jackknife over the per-point terms.
    Exact duplicate points would put a zero distance under the log; the
    sample is then jittered at relative scale 1e-10 (seeded) and a warning
    is emitted.  Cross-check tool only.
    """
    x = np.ascontiguousarray(np.asarray(samples, dtype=float))
    if x.ndim != 2:
        raise ValueError("samples must be a (n, dim) array")
    n, d = x.shape
    if n < 10**4:
        raise ValueError("need at least 1e4 samples for a stable estimate")
    if d > 8:
        raise ValueError("estimator is unreliable beyond 8 dimensions")
    if k < 1 or k >= n:
        raise ValueError("need 1 <= k < n")
    workers = thread_cap(default=4)
    tree = cKDTree(x)
    dist, _ = tree.query(x, k=k + 1, workers=workers)
    eps = dist[:, k]
    if np.any(eps == 0.0):
        warnings.warn(
            "duplicate samples detected; jittering before entropy estimation",
            RuntimeWarning,
        )
        rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
        scale = 1e-10 * max(1.0, float(np.median(np.abs(x))))
        x = x + rng.normal(scale=scale, size=x.shape)
        tree = cKDTree(x)
        dist, _ = tree.query(x, k=k + 1, workers=workers)
        eps = dist[:, k]
    log_ball = (d / 2.0) * math.log(math.pi) - gammaln(d / 2.0 + 1.0)
    const = digamma(n) - digamma(k) + log_ball
    terms = d * np.log(eps)
    h_nats = const + float(np.mean(terms))
    n_blocks = min(20, n)
    edges = np.linspace(0, n, n_blocks + 1, dtype=int)
    total = float(np.sum(terms))
    loo = np.empty(n_blocks)
    for b in range(n_blocks):
        lo, hi = edges[b], edges[b + 1]
        block = float(np.sum(terms[lo:hi]))
        loo[b] = const + (total - block) / (n - (hi - lo))
    se_nats = math.sqrt(
        (n_blocks - 1) / n_blocks * float(np.sum((loo - loo.mean()) ** 2))
    )
    return McEntropy(
        bits=h_nats / LN2, stderr=se_nats / LN2, n_samples=n, dim=d, k=k
    )
