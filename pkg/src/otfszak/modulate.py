"""OTFS modulation: DD symbols -> TF symbols -> time samples.

The symplectic Fourier pair used throughout:

    ISFFT:  X[n, m] = (1/(M*N)) * sum_{k,l} x[k, l] * exp(-j*2*pi*(m*l/M - n*k/N))
    SFFT:   x[k, l] = sum_{n,m} Y[n, m] * exp(+j*2*pi*(m*l/M - n*k/N))

so sfft(isfft(x)) == x and the SFFT carries no normalization factor
(Parseval: sum|sfft(Y)|^2 = M*N * sum|Y|^2). The Heisenberg transform uses
the unit rectangular pulse g(t) = 1/sqrt(T) on [0, T); with critical sampling
at t = n*T + p*T/M only the n-th TF row contributes to the n-th symbol
interval.
"""

from __future__ import annotations

import numpy as np

from .grid import DDGrid, GridConfig, TFGrid, TimeSamples
from .zak import INTEGER_SNAP

__all__ = ["isfft", "sfft", "heisenberg_samples", "transmit_waveform"]


def _check_shape(values: np.ndarray, cfg: GridConfig, what: str) -> None:
    if values.shape != (cfg.N, cfg.M):
        raise ValueError(f"{what} must have shape (N, M) = ({cfg.N}, {cfg.M}), got {values.shape}")


def isfft(x: DDGrid, cfg: GridConfig) -> TFGrid:
    """Inverse symplectic finite Fourier transform, DD -> TF.

    Implemented as a DFT along delay and an inverse DFT along Doppler; the
    1/(M*N) normalization folds into numpy's ifft (1/N) and an explicit 1/M.
    """
    _check_shape(x.values, cfg, "DD grid")
    return TFGrid(np.fft.ifft(np.fft.fft(x.values, axis=1), axis=0) / cfg.M)


def sfft(Y: TFGrid, cfg: GridConfig) -> DDGrid:
    """Symplectic finite Fourier transform, TF -> DD (unnormalized).

    Exact inverse of :func:`isfft`.
    """
    _check_shape(Y.values, cfg, "TF grid")
    return DDGrid(np.fft.fft(np.fft.ifft(Y.values, axis=1), axis=0) * cfg.M)


def heisenberg_samples(X: TFGrid, cfg: GridConfig) -> TimeSamples:
    """Critically sampled transmit signal, M*N samples at spacing T/M.

    x(nT + pT/M) = (1/sqrt(T)) * sum_m X[n, m] * exp(j*2*pi*m*p/M)

    i.e. an M-point inverse DFT per TF row, scaled by M/sqrt(T).
    """
    _check_shape(X.values, cfg, "TF grid")
    rows = np.fft.ifft(X.values, axis=1) * (cfg.M / np.sqrt(cfg.T))
    return TimeSamples(rows.reshape(-1), cfg.sample_period)


def transmit_waveform(X: TFGrid, t, cfg: GridConfig):
    """Evaluate the continuous transmit signal at arbitrary instants.

    x(t) = (1/sqrt(T)) * sum_m X[n, m] * exp(j*2*pi*m*delta_f*(t - nT)) for
    t inside symbol interval n (half-open [nT, (n+1)T)), zero outside the
    frame [0, NT). No interpolation: the finite subcarrier sum is exact.

    Instants within the integer-snap guard of a symbol boundary resolve to
    that boundary, so delayed sample grids land on the intended symbol.
    """
    _check_shape(X.values, cfg, "TF grid")
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    s = np.atleast_1d(t) / cfg.T
    nearest = np.round(s)
    s = np.where(np.abs(s - nearest) <= INTEGER_SNAP, nearest, s)
    inside = (s >= 0.0) & (s < cfg.N)
    n = np.floor(np.where(inside, s, 0.0)).astype(np.intp)
    frac = s - n
    phases = np.exp(2j * np.pi * np.outer(frac, np.arange(cfg.M)))
    out = np.einsum("tm,tm->t", X.values[n], phases) / np.sqrt(cfg.T)
    out = np.where(inside, out, 0.0 + 0.0j)
    return complex(out[0]) if scalar else out
