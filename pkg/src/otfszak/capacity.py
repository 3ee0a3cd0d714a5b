"""Achievable spectral efficiency of the two DD receivers.

All rates are bits/s/Hz with the 1/(MN) normalization of the frame-level
log-determinant; rho = E/(M*N*N0) is the transmit-power to noise-power
ratio. The two-step receiver sees effectively white DD noise,

    C = (1/MN) * log2 det(I + rho * H^H H),

while the direct Zak receiver's noise picks up the correction-row coupling,
whitened analytically:

    C_zak = (1/MN) * log2 det(I + rho * H^H (K/(MN*N0))^{-1} H),

with the large-N approximation dropping the whitening (the coupling is
O(1/N)). The single-path integer-Doppler channel admits closed forms used
as analytic anchors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .channel import noise_cov_apply_inverse
from .grid import ChannelKind, EffectiveChannel, GridConfig

__all__ = [
    "SEKind",
    "SEResult",
    "SinglePathForms",
    "logdet_hpd",
    "se_two_step",
    "se_zak_exact",
    "se_zak_approx",
    "single_path_closed_forms",
]

# A Hermitian check looser than this would mask assembly bugs; tighter would
# trip on benign BLAS roundoff at these matrix scales.
HERMITIAN_TOL = 1e-10

# Eigenvalues this far below zero indicate genuinely invalid input rather
# than roundoff on a semidefinite matrix.
NEGATIVE_EIG_TOL = -1e-9


class SEKind(Enum):
    ZAK_EXACT = "zak_exact"
    ZAK_APPROX = "zak_approx"
    TWO_STEP = "two_step"
    CLOSED_FORM = "closed_form"


@dataclass(frozen=True)
class SEResult:
    """A spectral-efficiency value tagged with how it was computed."""

    se_bits_per_sec_per_hz: float
    kind: SEKind

    def __post_init__(self) -> None:
        if not np.isfinite(self.se_bits_per_sec_per_hz) or self.se_bits_per_sec_per_hz < 0:
            raise ValueError(f"SE must be finite and nonnegative, got {self.se_bits_per_sec_per_hz}")


def logdet_hpd(A: np.ndarray, method: str = "eig") -> float:
    """log2 det(A) for Hermitian positive-definite A.

    Two independent paths: ``eig`` (default) sums log2 of the Hermitian
    eigenvalues, ``cholesky`` sums log2 of the squared factor diagonal. They
    are cross-checked in the test suite; the eigen path is the default
    because the spectrum also feeds the eigenstructure checks.
    """
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.abs(A).max()))
    asym = float(np.abs(A - A.conj().T).max())
    if asym > HERMITIAN_TOL * scale:
        raise ValueError(f"matrix is not Hermitian: max asymmetry {asym:.3e}")
    if method == "eig":
        eigs = np.linalg.eigvalsh(A)
        smallest = float(eigs[0])
        if smallest <= 0.0:
            if smallest < NEGATIVE_EIG_TOL * scale:
                raise ValueError(f"matrix is not positive definite: min eigenvalue {smallest:.3e}")
            raise ValueError(f"matrix is numerically singular: min eigenvalue {smallest:.3e}")
        return float(np.sum(np.log2(eigs)))
    if method == "cholesky":
        try:
            L = np.linalg.cholesky(A)
        except np.linalg.LinAlgError as err:
            raise ValueError(f"matrix is not positive definite: {err}") from err
        return float(2.0 * np.sum(np.log2(np.real(np.diag(L)))))
    raise ValueError(f"unknown method {method!r}, expected 'eig' or 'cholesky'")


def _require_kind(H: EffectiveChannel, kind: ChannelKind) -> None:
    if H.kind is not kind:
        raise ValueError(f"expected a {kind.value} effective channel, got {H.kind.value}")


def _se_from_gram(G: np.ndarray, rho: float) -> float:
    n = G.shape[0]
    return logdet_hpd(np.eye(n) + rho * G) / n


def se_two_step(H_hat: EffectiveChannel, rho: float) -> SEResult:
    """SE of the two-step receiver: (1/MN) log2 det(I + rho * H^H H)."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    _require_kind(H_hat, ChannelKind.TWO_STEP)
    G = H_hat.matrix.conj().T @ H_hat.matrix
    return SEResult(_se_from_gram(G, rho), SEKind.TWO_STEP)


def se_zak_exact(H_tilde: EffectiveChannel, rho: float, cfg: GridConfig) -> SEResult:
    """SE of the direct receiver with the exact DD noise whitening."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    _require_kind(H_tilde, ChannelKind.ZAK)
    whitened = noise_cov_apply_inverse(H_tilde.matrix, cfg)
    G = H_tilde.matrix.conj().T @ whitened
    # The two-sided product is Hermitian analytically; remove the one-sided
    # evaluation's roundoff asymmetry before factorization.
    G = 0.5 * (G + G.conj().T)
    return SEResult(_se_from_gram(G, rho), SEKind.ZAK_EXACT)


def se_zak_approx(H_tilde: EffectiveChannel, rho: float, cfg: GridConfig) -> SEResult:
    """Large-N SE of the direct receiver (whitening dropped)."""
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    _require_kind(H_tilde, ChannelKind.ZAK)
    G = H_tilde.matrix.conj().T @ H_tilde.matrix
    return SEResult(_se_from_gram(G, rho), SEKind.ZAK_APPROX)


@dataclass(frozen=True)
class SinglePathForms:
    """Closed forms for a single path with integer Doppler q and zero delay."""

    c_zak: float
    c_two_step: float
    eigenvalues: np.ndarray


def single_path_closed_forms(q: int, M: int, h1: complex, rho: float) -> SinglePathForms:
    """Analytic SE anchors for the integer-Doppler single-path channel.

    The direct receiver sees a unitary-diagonal channel, so (in large N)
    C_zak = log2(1 + rho*|h1|^2). The two-step receiver loses the q highest
    subcarrier products per delay block: its Gram block has eigenvalue
    |h1|^2 with multiplicity M - q and 0 with multiplicity q (the DFT
    vectors are eigenvectors), giving C = (1 - q/M) * log2(1 + rho*|h1|^2).
    """
    if not (0 <= q < M):
        raise ValueError(f"integer Doppler q must lie in [0, M), got q={q}, M={M}")
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    gain_sq = abs(h1) ** 2
    per_bin = np.log2(1.0 + rho * gain_sq)
    eigs = np.concatenate([np.full(M - q, gain_sq), np.zeros(q)])
    return SinglePathForms(
        c_zak=float(per_bin),
        c_two_step=float((1.0 - q / M) * per_bin),
        eigenvalues=eigs,
    )
