"""Frequency-domain machinery for two-tap block systems.

Everything is evaluated on a uniform grid over [-pi, pi).  For the trig
polynomials produced by two-tap systems this rectangle rule is spectrally
accurate, and it keeps integrals bitwise reproducible: node order is
fixed and reductions run in index order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DivergentIntegralError, NumericalError, SingularNoiseError
from .model import LiftedChannel, lifted_noise_autocorrelation

DEFAULT_N_OMEGA = 512

# Eigenvalues of nominally PSD matrices may round slightly negative; values
# in [-1e-10, 0) are clamped to zero, anything below that is treated as a
# numerical failure rather than silently truncated.
EIG_CLAMP = 1e-10

# A noise spectral density counts as singular when its smallest eigenvalue
# falls at or below this fraction of its trace.
PSD_SINGULAR_REL = 1e-12


@dataclass(frozen=True)
class SpectralGrid:
    """Sampled spectra of a lifted system.

    nodes/weights define the quadrature; transfer and psd hold the channel
    transfer matrix and noise spectral density per node; lambda_sig are the
    eigenvalues of transfer @ transfer^H and lambda_snr those of
    transfer^H @ psd^{-1} @ transfer, both ascending per node.
    """

    nodes: np.ndarray
    weights: np.ndarray
    transfer: np.ndarray
    psd: np.ndarray
    lambda_sig: np.ndarray
    lambda_snr: np.ndarray

    @property
    def n_omega(self) -> int:
        return self.nodes.shape[0]


def band_nodes(n_omega: int):
    """Uniform nodes on [-pi, pi) with equal weights summing to 2 pi."""
    n_omega = int(n_omega)
    if n_omega < 2:
        raise ValueError("need at least two quadrature nodes")
    nodes = -np.pi + 2.0 * np.pi * np.arange(n_omega) / n_omega
    weights = np.full(n_omega, 2.0 * np.pi / n_omega)
    return nodes, weights


def integrate_band(values) -> float:
    """Integral over [-pi, pi) of a field sampled on the uniform grid."""
    values = np.asarray(values, dtype=float)
    if values.ndim != 1:
        raise ValueError("integrate_band expects one value per node")
    if not np.all(np.isfinite(values)):
        raise ValueError("integrand contains non-finite values")
    return float(2.0 * np.pi / values.shape[0] * np.add.reduce(values))


def szego_logdet(field, nodes=None) -> float:
    """(1/2 pi) integral of log2 |det M(omega)| for a sampled matrix field.

    Raises DivergentIntegralError at the first node whose determinant
    vanishes or fails to evaluate, carrying that node's frequency.
    """
    field = np.asarray(field)
    if field.ndim != 3 or field.shape[1] != field.shape[2]:
        raise ValueError("szego_logdet expects a (nodes, d, d) field")
    sign, logabs = np.linalg.slogdet(field)
    bad = ~np.isfinite(logabs) | (np.abs(sign) < 0.5)
    if np.any(bad):
        j = int(np.argmax(bad))
        omega = float(nodes[j]) if nodes is not None else None
        raise DivergentIntegralError(
            f"log-determinant diverges at node {j}"
            + (f" (omega={omega:.6f})" if omega is not None else ""),
            omega=omega,
        )
    return float(np.mean(logabs) / np.log(2.0))


def _clamped_eigvalsh(mats: np.ndarray, what: str) -> np.ndarray:
    lam = np.linalg.eigvalsh(mats)
    low = lam.min()
    if low < -EIG_CLAMP:
        raise NumericalError(
            f"{what} produced eigenvalue {low:.3e} below -{EIG_CLAMP:.0e}"
        )
    return np.maximum(lam, 0.0)


def build_grid(lifted: LiftedChannel, n_omega: int = DEFAULT_N_OMEGA) -> SpectralGrid:
    """Sample transfer, noise spectral density and both eigenvalue fields.

    The noise spectral density C(omega) = C1^T e^{j omega} + C0
    + C1 e^{-j omega} must be positive definite at every node; a singular
    density raises SingularNoiseError.  lambda_snr is computed by Cholesky
    whitening of the density followed by a Hermitian eigensolve.
    """
    nodes, weights = band_nodes(n_omega)
    c0, c1 = lifted_noise_autocorrelation(lifted, lifted.sigma_u)
    phase = np.exp(-1j * nodes)
    transfer = lifted.h0[None, :, :] + lifted.h1[None, :, :] * phase[:, None, None]
    psd = (
        c0[None, :, :]
        + c1[None, :, :] * phase[:, None, None]
        + c1.T[None, :, :] * np.conj(phase)[:, None, None]
    )
    traces = np.real(np.trace(psd, axis1=1, axis2=2))
    eig_psd = np.linalg.eigvalsh(psd)
    bad = eig_psd[:, 0] <= PSD_SINGULAR_REL * np.maximum(traces, 0.0)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise SingularNoiseError(
            f"noise spectral density is singular at omega={nodes[j]:.6f} "
            f"(min eigenvalue {eig_psd[j, 0]:.3e})"
        )
    lambda_sig = _clamped_eigvalsh(
        transfer @ np.conj(np.swapaxes(transfer, 1, 2)), "transfer gram"
    )
    chol = np.linalg.cholesky(psd)
    whitened = np.linalg.solve(chol, transfer)
    gram = np.conj(np.swapaxes(whitened, 1, 2)) @ whitened
    lambda_snr = _clamped_eigvalsh(gram, "whitened gram")
    for arr in (nodes, weights, transfer, psd, lambda_sig, lambda_snr):
        arr.setflags(write=False)
    return SpectralGrid(
        nodes=nodes,
        weights=weights,
        transfer=transfer,
        psd=psd,
        lambda_sig=lambda_sig,
        lambda_snr=lambda_snr,
    )
