"""Delay-Doppler kernels for rectangular transmit pulses.

The Zak transform of a time signal x is

    Z_x(tau, nu) = sqrt(T) * sum_k x(tau + k*T) * exp(-j*2*pi*k*nu*T),

quasi-periodic in tau with period T and periodic in nu with period delta_f.
For the unit rectangular pulse g(t) = 1/sqrt(T) on [0, T) the transform has
unit modulus everywhere, and finite frames turn into periodic Dirichlet
kernels along each DD axis. This module provides those kernels, the DD basis
function they induce, and the sampled Zak transform used by the direct
receiver (which sees the N+1 symbol intervals spanned by the receive window).
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .grid import DDGrid, GridConfig, TimeSamples

__all__ = [
    "DDPoint",
    "INTEGER_SNAP",
    "SINGULAR_SIN_THRESHOLD",
    "snapped_floor",
    "zak_rect_pulse",
    "dirichlet_doppler",
    "dirichlet_delay",
    "dd_basis",
    "discrete_zak",
]

# Floor arguments within this absolute distance of an integer snap to it, so
# on-grid delays hit the intended branch instead of falling one bin short.
INTEGER_SNAP = 1e-12

# Below this |sin| the Dirichlet ratio form loses accuracy; fall back to the
# direct finite sum (exact at the removable singularities).
SINGULAR_SIN_THRESHOLD = 1e-6


class DDPoint(NamedTuple):
    """A point in the delay-Doppler plane (seconds, Hz)."""

    tau: float
    nu: float


def snapped_floor(x):
    """floor(x) with a 1e-12 guard: near-integer arguments snap first.

    Keeps quantities like tau/T or l/M - tau/T from crossing a floor boundary
    because of representation error.
    """
    x = np.asarray(x, dtype=np.float64)
    nearest = np.round(x)
    snapped = np.where(np.abs(x - nearest) <= INTEGER_SNAP, nearest, np.floor(x))
    if snapped.ndim == 0:
        return float(snapped)
    return snapped


def _phase_sum(theta, count: int) -> np.ndarray:
    """sum_{n=0}^{count-1} exp(j*n*theta), elementwise over theta.

    Uses the closed geometric form exp(j*(count-1)*theta/2) *
    sin(count*theta/2) / sin(theta/2) away from the removable singularities
    and the direct sum where |sin(theta/2)| < SINGULAR_SIN_THRESHOLD.
    """
    theta = np.asarray(theta, dtype=np.float64)
    half = 0.5 * theta
    denom = np.sin(half)
    singular = np.abs(denom) < SINGULAR_SIN_THRESHOLD
    # Avoid division warnings on the singular entries; they are overwritten.
    safe_denom = np.where(singular, 1.0, denom)
    out = np.exp(1j * (count - 1) * half) * np.sin(count * half) / safe_denom
    if np.any(singular):
        t_sing = np.atleast_1d(theta)[np.atleast_1d(singular)]
        n = np.arange(count)
        direct = np.exp(1j * np.outer(n, t_sing)).sum(axis=0)
        if out.ndim == 0:
            out = direct[0]
        else:
            out[singular] = direct
    return out


def zak_rect_pulse(tau, nu, cfg: GridConfig):
    """Zak transform of the rectangular pulse: exp(j*2*pi*nu*floor(tau/T)*T).

    Unit modulus for every (tau, nu); equals 1 on the fundamental strip
    0 <= tau < T.
    """
    q = snapped_floor(np.asarray(tau, dtype=np.float64) / cfg.T)
    out = np.exp(2j * np.pi * np.asarray(nu, dtype=np.float64) * cfg.T * q)
    return complex(out) if np.ndim(out) == 0 else out


def dirichlet_doppler(nu, cfg: GridConfig):
    """Doppler-axis interpolation kernel (1/N) * sum_n exp(-j*2*pi*n*nu*T).

    Periodic with period delta_f; equals 1 at nu = 0 and vanishes at the
    other Doppler bin offsets nu = k*delta_f/N, 0 < k < N.
    """
    theta = -2.0 * np.pi * np.asarray(nu, dtype=np.float64) * cfg.T
    out = _phase_sum(theta, cfg.N) / cfg.N
    return complex(out) if np.ndim(out) == 0 else out


def dirichlet_delay(tau, cfg: GridConfig):
    """Delay-axis interpolation kernel (1/M) * sum_m exp(+j*2*pi*m*delta_f*tau).

    Periodic with period T; equals 1 at tau = 0 and vanishes at the other
    delay bin offsets tau = l*T/M, 0 < l < M.
    """
    theta = 2.0 * np.pi * np.asarray(tau, dtype=np.float64) * cfg.delta_f
    out = _phase_sum(theta, cfg.M) / cfg.M
    return complex(out) if np.ndim(out) == 0 else out


def dd_basis(k: int, l: int, tau, nu, cfg: GridConfig):
    """DD basis function for grid point (k, l) evaluated at (tau, nu).

    The Zak transform of one transmitted DD symbol: the rectangular-pulse
    phase times the two Dirichlet kernels centred on the grid point,

        phi_{k,l}(tau, nu) = exp(j*2*pi*(nu/delta_f)*floor(tau/T))
                             * dirichlet_doppler(nu - k*delta_f/N)
                             * dirichlet_delay(tau - l*T/M).
    """
    if not (0 <= k < cfg.N and 0 <= l < cfg.M):
        raise ValueError(f"basis index (k={k}, l={l}) outside grid {cfg.N}x{cfg.M}")
    return (
        zak_rect_pulse(tau, nu, cfg)
        * dirichlet_doppler(np.asarray(nu) - k * cfg.doppler_resolution, cfg)
        * dirichlet_delay(np.asarray(tau) - l * cfg.sample_period, cfg)
    )


def discrete_zak(y: TimeSamples, cfg: GridConfig) -> DDGrid:
    """Sample the Zak transform of the receive window on the DD grid.

    Y[k', l'] = sqrt(T) * sum_{n=0}^{N} y(nT + l'T/M) * exp(-j*2*pi*n*k'/N)

    evaluated as M length-N DFTs plus the n = N correction row (whose DFT
    phase is identically 1), so the cost is O(M*N*log N). The receive window
    covers N+1 symbol durations because a delay spread below T smears the
    frame into one extra symbol.
    """
    expected = cfg.M * (cfg.N + 1)
    if y.length != expected:
        raise ValueError(
            f"receive window must hold M*(N+1) = {expected} samples, got {y.length}"
        )
    if y.start_index != 0:
        raise ValueError(f"receive window must start at t = 0, got index {y.start_index}")
    if not np.isclose(y.sample_period, cfg.sample_period, rtol=1e-9, atol=0.0):
        raise ValueError(
            f"sample period {y.sample_period} does not match T/M = {cfg.sample_period}"
        )
    frame = y.samples.reshape(cfg.N + 1, cfg.M)
    vals = np.fft.fft(frame[: cfg.N], axis=0) + frame[cfg.N][None, :]
    return DDGrid(np.sqrt(cfg.T) * vals)
