"""Water-filling capacity and capacity bounds for lifted block systems.

The Gaussian-noise capacity of the block system is a water-filling
problem over the whitened-channel eigenvalue field.  With non-Gaussian
noise that capacity is itself the first lower bound; adding the gap
between the Gaussian entropy rate and the true noise entropy rate turns
it into an upper bound, and an entropy-power style expression gives a
second lower bound that is tighter at high signal-to-noise ratio for
markedly non-Gaussian noise.  All rates are in bits; per-sample rates are
per-block rates divided by the block length.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._env import thread_cap
from .entropy import (
    EntropyInterval,
    NoiseEntropyRate,
    gaussian_entropy_rate,
    noise_entropy_rate,
)
from .model import (
    LiftedChannel,
    LptvChannel,
    NoiseModel,
    lift,
    lifted_noise_autocorrelation,
)
from .spectra import DEFAULT_N_OMEGA, SpectralGrid, build_grid

# lower2 needs every signal mode alive across the band; treat a mode as
# vanished when it falls this far below the largest one.
SIGNAL_MODE_REL_MIN = 1e-12


@dataclass(frozen=True)
class WaterfillResult:
    """Water-filling solution over an eigenvalue field.

    delta is the water level, capacity_bits the per-block rate,
    allocated the realized total power and residual the absolute
    allocation error.  degenerate marks an all-zero eigenvalue field.
    """

    delta: float
    capacity_bits: float
    allocated: float
    residual: float
    degenerate: bool = False


def waterfill(
    lambda_field, power: float, max_iter: int = 200
) -> WaterfillResult:
    """Solve the water-filling allocation for a sampled eigenvalue field.

    lambda_field has one row per frequency node and one column per mode;
    power is the total per-block input power.  The water level delta
    solves (1/2 pi) sum_k int (delta - 1/lambda_k)^+ = power by bisection;
    the capacity is (1/4 pi) sum_k int (log2 delta lambda_k)^+.
    """
    lam = np.asarray(lambda_field, dtype=float)
    if lam.ndim == 1:
        lam = lam[:, None]
    if lam.ndim != 2:
        raise ValueError("lambda field must be (nodes, modes)")
    if np.any(lam < 0) or not np.all(np.isfinite(lam)):
        raise ValueError("eigenvalue field must be finite and non-negative")
    if not (power > 0 and math.isfinite(power)):
        raise ValueError("power must be positive and finite")
    n_nodes = lam.shape[0]
    pos = lam > 0
    if not np.any(pos):
        warnings.warn(
            "all channel modes vanish; capacity is zero", RuntimeWarning
        )
        return WaterfillResult(
            delta=math.inf,
            capacity_bits=0.0,
            allocated=0.0,
            residual=power,
            degenerate=True,
        )
    inv = np.where(pos, 1.0 / np.where(pos, lam, 1.0), np.inf)
    inv_pos = inv[pos]

    def allocate(delta: float) -> float:
        return float(np.sum(np.maximum(delta - inv_pos, 0.0))) / n_nodes

    measure = inv_pos.size / n_nodes
    mean_inv = float(np.sum(inv_pos)) / n_nodes
    hi = max(float(np.max(inv_pos)), (power + mean_inv) / measure) + 1.0
    lo = 0.0
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if allocate(mid) >= power:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * max(1.0, hi):
            break
    delta = 0.5 * (lo + hi)
    allocated = allocate(delta)
    with np.errstate(divide="ignore"):
        gains = np.where(pos, np.log2(np.maximum(delta * lam, 1e-300)), 0.0)
    capacity = float(np.sum(np.maximum(gains, 0.0))) / (2.0 * n_nodes)
    return WaterfillResult(
        delta=delta,
        capacity_bits=capacity,
        allocated=allocated,
        residual=abs(allocated - power),
    )


@dataclass(frozen=True)
class BoundsReport:
    """Capacity bounds at one operating point, in bits per original sample.

    lower2 is None when its preconditions fail; flags records why, along
    with any other diagnostics.  h_rate is the noise entropy-rate interval
    per original sample that the bounds consumed; delta and residual come
    from the water-filling solution (per block).
    """

    snr_db: float | None
    p_tilde: float
    per: int
    n_omega: int
    upper: float
    lower1: float
    lower2: float | None
    c_gauss: float
    delta: float
    h_rate: EntropyInterval
    gaussian_rate: float
    residual: float
    flags: tuple


def bounds(
    lifted: LiftedChannel,
    grid: SpectralGrid,
    entropy_per_block: EntropyInterval,
    p_tilde: float,
    snr_db: float | None = None,
) -> BoundsReport:
    """Evaluate all capacity bounds at one input power.

    p_tilde is the average input power per original sample.  The upper
    bound consumes the lower entropy endpoint and the second lower bound
    the upper endpoint, so both stay valid when the noise entropy is only
    known to an interval.
    """
    if not (p_tilde > 0 and math.isfinite(p_tilde)):
        raise ValueError("average input power must be positive and finite")
    per = lifted.per
    flags = []
    wf = waterfill(grid.lambda_snr, p_tilde * per)
    if wf.degenerate:
        flags.append("all-lambda-zero")
    h_g_block = gaussian_entropy_rate(grid)
    c_gauss = wf.capacity_bits / per
    upper = (wf.capacity_bits + h_g_block - entropy_per_block.lower) / per
    lower1 = c_gauss
    lower2 = None
    n_r, n_t = lifted.n_out, lifted.n_in
    if n_r != n_t:
        flags.append("lower2-omitted:nonsquare")
    elif not lifted.head_nonsingular:
        flags.append("lower2-omitted:singular-head")
    else:
        lam_sig = grid.lambda_sig
        peak = float(np.max(lam_sig))
        if peak <= 0.0 or float(np.min(lam_sig)) <= SIGNAL_MODE_REL_MIN * peak:
            flags.append("lower2-omitted:vanishing-signal-mode")
        else:
            s_term = float(np.sum(np.log2(lam_sig))) / (
                lam_sig.shape[0] * per * n_t
            )
            h_up = entropy_per_block.upper
            a = math.log2(2.0 * math.pi * math.e * p_tilde / n_t) + s_term
            b = 2.0 * h_up / (per * n_r)
            lower2 = float(n_t / 2.0 * np.logaddexp2(a, b) - h_up / per)
    if lower1 > upper + 1e-9:
        flags.append("bound-order-violation")
    return BoundsReport(
        snr_db=snr_db,
        p_tilde=p_tilde,
        per=per,
        n_omega=grid.n_omega,
        upper=upper,
        lower1=lower1,
        lower2=lower2,
        c_gauss=c_gauss,
        delta=wf.delta,
        h_rate=entropy_per_block.scale(1.0 / per),
        gaussian_rate=h_g_block / per,
        residual=wf.residual,
        flags=tuple(flags),
    )


def _failed_report(
    snr_db, p_tilde, per, n_omega, h_rate, exc
) -> BoundsReport:
    nan = float("nan")
    return BoundsReport(
        snr_db=snr_db,
        p_tilde=p_tilde,
        per=per,
        n_omega=n_omega,
        upper=nan,
        lower1=nan,
        lower2=None,
        c_gauss=nan,
        delta=nan,
        h_rate=h_rate,
        gaussian_rate=nan,
        residual=nan,
        flags=(f"point-failed:{type(exc).__name__}",),
    )


@dataclass(frozen=True)
class SweepResult:
    """Bounds across a grid of signal-to-noise ratios."""

    reports: tuple
    per: int
    n_omega: int
    noise_power: float
    entropy: NoiseEntropyRate


def snr_sweep(
    channel: LptvChannel,
    noise: NoiseModel,
    snr_db,
    n_omega: int = DEFAULT_N_OMEGA,
    per: int | None = None,
    threads: int | None = None,
) -> SweepResult:
    """Evaluate bounds over a grid of signal-to-noise ratios in dB.

    The lift, spectral grid and entropy interval are built once; the
    input power at snr dB is 10^(snr/10) times the noise power per
    original sample.  Points are independent; with threads > 1 they are
    evaluated concurrently, in deterministic input order either way.  A
    failing point is reported with NaN bounds and a flag instead of
    aborting the sweep.
    """
    snr_list = [float(s) for s in np.atleast_1d(np.asarray(snr_db, dtype=float))]
    lifted = lift(channel, noise, per=per)
    grid = build_grid(lifted, n_omega)
    ent = noise_entropy_rate(noise, lifted, n_omega)
    c0, _ = lifted_noise_autocorrelation(lifted, lifted.sigma_u)
    noise_power = float(np.trace(c0)) / lifted.per
    h_rate = ent.per_block.scale(1.0 / lifted.per)

    def one(snr: float) -> BoundsReport:
        p_tilde = 10.0 ** (snr / 10.0) * noise_power
        try:
            return bounds(lifted, grid, ent.per_block, p_tilde, snr_db=snr)
        except Exception as exc:  # noqa: BLE001 - sweep must survive one bad point
            return _failed_report(snr, p_tilde, lifted.per, n_omega, h_rate, exc)

    if threads is None:
        threads = thread_cap(default=1)
    if threads > 1 and len(snr_list) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = tuple(pool.map(one, snr_list))
    else:
        reports = tuple(one(s) for s in snr_list)
    return SweepResult(
        reports=reports,
        per=lifted.per,
        n_omega=n_omega,
        noise_power=noise_power,
        entropy=ent,
    )
