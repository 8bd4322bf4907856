"""Channel and noise models for periodically time-varying linear systems.

A periodic filter with period ``P`` and memory ``m`` is stored as a tap
array of shape ``(P, m+1, n_out, n_in)``: ``taps[i, tau]`` maps an input
applied ``tau`` samples before phase ``i`` to the output at phase ``i``.
Additive noise is modeled as an i.i.d. innovation sequence passed through
a periodic shaping filter of the same layout (an identity single-tap
filter encodes i.i.d. noise).

`lift` folds one period of channel and shaping filter into a block system
with two matrix taps.  The block system is time-invariant at the block
rate, which makes frequency-domain capacity and entropy-rate machinery
applicable; per-block quantities divide by the block length to recover
per-sample rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ModelError, SingularHeadTapError

# Head taps of a shaping filter must be safely invertible: the innovation
# recovered from the noise by inverting the filter is what entropy-rate
# formulas are anchored to.
HEAD_RCOND_MIN = 1e-10


def _reciprocal_cond(mat: np.ndarray) -> float:
    s = np.linalg.svd(mat, compute_uv=False)
    if s[0] == 0.0:
        return 0.0
    return float(s[-1] / s[0])


def _check_taps(taps: np.ndarray, what: str) -> np.ndarray:
    taps = np.asarray(taps, dtype=float)
    if taps.ndim != 4:
        raise ModelError(f"{what} taps must have shape (period, memory+1, rows, cols)")
    if taps.shape[0] < 1 or taps.shape[1] < 1:
        raise ModelError(f"{what} needs at least one phase and one tap")
    if not np.all(np.isfinite(taps)):
        raise ModelError(f"{what} taps must be finite")
    return taps


@dataclass(frozen=True)
class LptvChannel:
    """Periodic linear filter, taps shaped (period, memory+1, n_out, n_in)."""

    taps: np.ndarray

    def __post_init__(self):
        taps = _check_taps(self.taps, "channel")
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def period(self) -> int:
        return self.taps.shape[0]

    @property
    def memory(self) -> int:
        return self.taps.shape[1] - 1

    @property
    def n_out(self) -> int:
        return self.taps.shape[2]

    @property
    def n_in(self) -> int:
        return self.taps.shape[3]


@dataclass(frozen=True)
class LptvShapingFilter:
    """Periodic square shaping filter for noise, taps (period, memory+1, n, n).

    The tap at lag zero must be invertible at every phase; construction
    rejects filters whose head tap has reciprocal condition number at or
    below `HEAD_RCOND_MIN`.
    """

    taps: np.ndarray

    def __post_init__(self):
        taps = _check_taps(self.taps, "shaping filter")
        if taps.shape[2] != taps.shape[3]:
            raise ModelError("shaping filter taps must be square")
        for i in range(taps.shape[0]):
            rc = _reciprocal_cond(taps[i, 0])
            if rc <= HEAD_RCOND_MIN:
                raise SingularHeadTapError(
                    f"shaping filter head tap at phase {i} is numerically singular "
                    f"(rcond={rc:.3e})"
                )
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def period(self) -> int:
        return self.taps.shape[0]

    @property
    def memory(self) -> int:
        return self.taps.shape[1] - 1

    @property
    def n(self) -> int:
        return self.taps.shape[2]


def iid_shaping(dim: int) -> LptvShapingFilter:
    """Single-tap identity filter: the noise equals its innovation."""
    return LptvShapingFilter(np.eye(dim)[None, None, :, :])


@dataclass(frozen=True)
class GmParams:
    """Gaussian mixture: priors (n_comp,), means (n_comp, d), covariances (n_comp, d, d)."""

    priors: np.ndarray
    means: np.ndarray
    covariances: np.ndarray

    @property
    def n_comp(self) -> int:
        return self.priors.shape[0]

    @property
    def dim(self) -> int:
        return self.means.shape[1]


@dataclass(frozen=True)
class NakagamiParams:
    """Complex-envelope Nakagami law: shape m >= 1/2 and spread omega = E|W|^2."""

    m: float
    omega: float


@dataclass(frozen=True)
class InnovationPdf:
    """Per-sample innovation law, tagged by `kind`.

    kind is one of "gm", "nakagami", "gaussian"; exactly one of the
    matching parameter fields is set.  `amplitude_scale` records the factor
    applied to the raw law's amplitudes during variance normalization, so
    the stored parameters always describe the law actually sampled.
    """

    kind: str
    dim: int
    variance_normalized: bool
    amplitude_scale: float
    gm: GmParams | None = None
    nakagami: NakagamiParams | None = None
    covariance: np.ndarray | None = None

    def per_sample_covariance(self) -> np.ndarray:
        """Covariance of one innovation draw (dim, dim)."""
        if self.kind == "gm":
            g = self.gm
            second = np.einsum("n,nij->ij", g.priors, g.covariances)
            second = second + np.einsum("n,ni,nj->ij", g.priors, g.means, g.means)
            return second
        if self.kind == "nakagami":
            return 0.5 * self.nakagami.omega * np.eye(2)
        return np.array(self.covariance, dtype=float)


def _sym_pd_check(cov: np.ndarray, what: str) -> np.ndarray:
    cov = np.asarray(cov, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ModelError(f"{what} must be a square matrix")
    if not np.all(np.isfinite(cov)):
        raise ModelError(f"{what} must be finite")
    if np.max(np.abs(cov - cov.T)) > 1e-9 * max(1.0, np.max(np.abs(cov))):
        raise ModelError(f"{what} must be symmetric")
    try:
        np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise ModelError(f"{what} must be positive definite") from None
    return 0.5 * (cov + cov.T)


def gaussian_mixture(
    priors, means, covariances, normalize: bool = True
) -> InnovationPdf:
    """Zero-mean Gaussian mixture innovation.

    Priors must be positive and sum to one (tiny deviations are
    renormalized); the mixture mean must vanish.  With ``normalize`` the
    law is rescaled so its total per-sample variance (covariance trace)
    equals one.
    """
    priors = np.asarray(priors, dtype=float)
    means = np.asarray(means, dtype=float)
    covariances = np.asarray(covariances, dtype=float)
    if priors.ndim != 1:
        raise ModelError("mixture priors must be a vector")
    if np.any(priors <= 0):
        raise ModelError("mixture priors must be positive")
    total = priors.sum()
    if abs(total - 1.0) > 1e-8:
        raise ModelError("mixture priors must sum to one")
    priors = priors / total
    if means.ndim == 1:
        means = means[:, None]
    if covariances.ndim == 1:
        covariances = covariances[:, None, None]
    n_comp = priors.shape[0]
    if means.shape[0] != n_comp or covariances.shape[0] != n_comp:
        raise ModelError("mixture priors, means and covariances disagree in length")
    dim = means.shape[1]
    if covariances.shape[1:] != (dim, dim):
        raise ModelError("mixture covariance blocks must be (dim, dim)")
    covs = np.empty_like(covariances)
    for n in range(n_comp):
        covs[n] = _sym_pd_check(covariances[n], f"mixture covariance {n}")
    mean = priors @ means
    second = np.einsum("n,nij->ij", priors, covs)
    second = second + np.einsum("n,ni,nj->ij", priors, means, means)
    trace = float(np.trace(second))
    if np.linalg.norm(mean) > 1e-9 * max(1.0, math.sqrt(trace)):
        raise ModelError("mixture must have zero mean")
    scale = 1.0
    if normalize:
        scale = 1.0 / math.sqrt(trace)
        means = means * scale
        covs = covs * scale**2
    for arr in (priors, means, covs):
        arr.setflags(write=False)
    return InnovationPdf(
        kind="gm",
        dim=dim,
        variance_normalized=normalize,
        amplitude_scale=scale,
        gm=GmParams(priors=priors, means=means, covariances=covs),
    )


def complex_nakagami(m: float, omega: float, normalize: bool = True) -> InnovationPdf:
    """Circular complex innovation with Nakagami-m amplitude, as a 2-d real law.

    The amplitude X satisfies X^2 ~ Gamma(m, omega/m) and the phase is
    uniform; the real pair (Re W, Im W) is the stored sample.  E|W|^2 is
    `omega`, so normalization rescales omega to one.
    """
    m = float(m)
    omega = float(omega)
    if not (m >= 0.5):
        raise ModelError("Nakagami shape m must be at least 1/2")
    if not (omega > 0):
        raise ModelError("Nakagami spread omega must be positive")
    scale = 1.0
    if normalize:
        scale = 1.0 / math.sqrt(omega)
        omega = 1.0
    return InnovationPdf(
        kind="nakagami",
        dim=2,
        variance_normalized=normalize,
        amplitude_scale=scale,
        nakagami=NakagamiParams(m=m, omega=omega),
    )


def gaussian(covariance, normalize: bool = True) -> InnovationPdf:
    """Zero-mean Gaussian innovation with the given covariance."""
    cov = _sym_pd_check(covariance, "innovation covariance")
    scale = 1.0
    if normalize:
        trace = float(np.trace(cov))
        scale = 1.0 / math.sqrt(trace)
        cov = cov * scale**2
    cov.setflags(write=False)
    return InnovationPdf(
        kind="gaussian",
        dim=cov.shape[0],
        variance_normalized=normalize,
        amplitude_scale=scale,
        covariance=cov,
    )


@dataclass(frozen=True)
class NoiseModel:
    """Innovation law plus periodic shaping filter."""

    innovation: InnovationPdf
    shaping: LptvShapingFilter

    def __post_init__(self):
        if self.shaping.n != self.innovation.dim:
            raise ModelError(
                f"shaping filter dimension {self.shaping.n} does not match "
                f"innovation dimension {self.innovation.dim}"
            )


def iid_noise(innovation: InnovationPdf) -> NoiseModel:
    return NoiseModel(innovation=innovation, shaping=iid_shaping(innovation.dim))


def complex_to_real(taps_complex) -> LptvChannel:
    """Real representation of a complex periodic filter.

    Each complex entry a+jb becomes the 2x2 rotation-scaling block
    [[a, -b], [b, a]]; complex vectors map to interleaved (real, imag)
    pairs.  Products and sums of filters commute with the embedding, so
    the real channel carries exactly the complex dynamics.
    """
    taps = np.asarray(taps_complex, dtype=complex)
    if taps.ndim != 4:
        raise ModelError("complex taps must have shape (period, memory+1, rows, cols)")
    if not np.all(np.isfinite(taps)):
        raise ModelError("complex taps must be finite")
    p, mt, nr, nt = taps.shape
    out = np.zeros((p, mt, 2 * nr, 2 * nt))
    re = taps.real
    im = taps.imag
    out[:, :, 0::2, 0::2] = re
    out[:, :, 0::2, 1::2] = -im
    out[:, :, 1::2, 0::2] = im
    out[:, :, 1::2, 1::2] = re
    return LptvChannel(out)


@dataclass(frozen=True)
class LiftedChannel:
    """Two-tap block system produced by `lift`.

    h0/h1 are the block channel taps, f0/f1 the block shaping taps; the
    block transfer functions are h0 + h1 e^{-j omega} and likewise for f.
    sigma_u is the per-sample innovation covariance, and head_nonsingular
    records whether every lag-zero channel tap is square and safely
    invertible (a precondition for bounds that invert the channel).
    """

    per: int
    h0: np.ndarray
    h1: np.ndarray
    f0: np.ndarray
    f1: np.ndarray
    n_out: int
    n_in: int
    sigma_u: np.ndarray
    head_nonsingular: bool

    def __post_init__(self):
        for name in ("h0", "h1", "f0", "f1", "sigma_u"):
            arr = np.asarray(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        dr = self.per * self.n_out
        dc = self.per * self.n_in
        if self.h0.shape != (dr, dc) or self.h1.shape != (dr, dc):
            raise ModelError("lifted channel taps have inconsistent shape")
        if self.f0.shape != (dr, dr) or self.f1.shape != (dr, dr):
            raise ModelError("lifted shaping taps have inconsistent shape")
        if self.sigma_u.shape != (self.n_out, self.n_out):
            raise ModelError("innovation covariance has inconsistent shape")


def natural_block_length(channel: LptvChannel, noise: NoiseModel) -> int:
    """Smallest common period that exceeds the joint memory."""
    base = math.lcm(channel.period, noise.shaping.period)
    memory = max(channel.memory, noise.shaping.memory)
    return base * max(1, math.ceil((memory + 1) / base))


def _pad_memory(taps: np.ndarray, memory: int) -> np.ndarray:
    have = taps.shape[1] - 1
    if have == memory:
        return taps
    pad = np.zeros((taps.shape[0], memory - have) + taps.shape[2:])
    return np.concatenate([taps, pad], axis=1)


def _block_lift(taps: np.ndarray, per: int, memory: int):
    p, _, a, b = taps.shape
    t0 = np.zeros((per * a, per * b))
    t1 = np.zeros((per * a, per * b))
    for i in range(per):
        for tau in range(0, min(i, memory) + 1):
            j = i - tau
            t0[i * a : (i + 1) * a, j * b : (j + 1) * b] = taps[i % p, tau]
        for tau in range(i + 1, memory + 1):
            j = per + i - tau
            t1[i * a : (i + 1) * a, j * b : (j + 1) * b] = taps[i % p, tau]
    return t0, t1


def lift(
    channel: LptvChannel, noise: NoiseModel, per: int | None = None
) -> LiftedChannel:
    """Fold channel and noise shaping into a two-tap block system.

    The block length defaults to the smallest common multiple of the two
    periods that exceeds the joint memory.  A longer block length may be
    forced with ``per``; it must be a multiple of both periods and exceed
    the joint memory.  Output blocks depend on at most the current and
    previous input block, which is what makes two taps sufficient.
    """
    if noise.shaping.n != channel.n_out:
        raise ModelError(
            f"noise dimension {noise.shaping.n} does not match channel outputs "
            f"{channel.n_out}"
        )
    memory = max(channel.memory, noise.shaping.memory)
    base = math.lcm(channel.period, noise.shaping.period)
    if per is None:
        per = natural_block_length(channel, noise)
    else:
        per = int(per)
        if per <= memory:
            raise ModelError(f"block length {per} does not exceed memory {memory}")
        if per % base != 0:
            raise ModelError(
                f"block length {per} is not a multiple of the joint period {base}"
            )
    ch = _pad_memory(channel.taps, memory)
    sh = _pad_memory(noise.shaping.taps, memory)
    h0, h1 = _block_lift(ch, per, memory)
    f0, f1 = _block_lift(sh, per, memory)
    head_ok = channel.n_out == channel.n_in
    if head_ok:
        for i in range(channel.period):
            if _reciprocal_cond(channel.taps[i, 0]) <= HEAD_RCOND_MIN:
                head_ok = False
                break
    return LiftedChannel(
        per=per,
        h0=h0,
        h1=h1,
        f0=f0,
        f1=f1,
        n_out=channel.n_out,
        n_in=channel.n_in,
        sigma_u=noise.innovation.per_sample_covariance(),
        head_nonsingular=head_ok,
    )


def lifted_noise_autocorrelation(
    lifted: LiftedChannel, innovation_cov: np.ndarray | None = None
):
    """Block covariance (lag 0) and one-block cross-covariance (lag 1).

    With innovation covariance Sigma per sample (identity when omitted),
    the noise blocks W[k] = F0 U[k] + F1 U[k-1] have
    C0 = F0 S F0' + F1 S F1' and C1 = E{W[k] W[k-1]'} = F1 S F0',
    where S = I_per (x) Sigma.  Lags beyond one vanish.
    """
    dim = lifted.n_out
    if innovation_cov is None:
        sigma = np.eye(dim)
    else:
        sigma = np.asarray(innovation_cov, dtype=float)
        if sigma.shape != (dim, dim):
            raise ModelError("innovation covariance has wrong shape")
    big = np.kron(np.eye(lifted.per), sigma)
    c0 = lifted.f0 @ big @ lifted.f0.T + lifted.f1 @ big @ lifted.f1.T
    c1 = lifted.f1 @ big @ lifted.f0.T
    return c0, c1
