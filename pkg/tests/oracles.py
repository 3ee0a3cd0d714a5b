"""Deliberately naive reference implementations used to arbitrate the package.

Everything here is written as literal loops over the defining sums, with no
shared code or vectorization tricks, so agreement with the package is
evidence for both sides. Only used by tests; far too slow for real work.
"""

import math

import numpy as np

from otfszak.grid import GridConfig


def isfft_literal(x: np.ndarray, cfg: GridConfig) -> np.ndarray:
    """X[n, m] = (1/(MN)) sum_{k,l} x[k,l] exp(j2pi(nk/N - ml/M))."""
    M, N = cfg.M, cfg.N
    X = np.zeros((N, M), dtype=np.complex128)
    for n in range(N):
        for m in range(M):
            acc = 0.0 + 0.0j
            for k in range(N):
                for l in range(M):
                    acc += x[k, l] * np.exp(2j * np.pi * (n * k / N - m * l / M))
            X[n, m] = acc / (M * N)
    return X


def sfft_literal(Y: np.ndarray, cfg: GridConfig) -> np.ndarray:
    """x[k, l] = sum_{n,m} Y[n,m] exp(j2pi(ml/M - nk/N))."""
    M, N = cfg.M, cfg.N
    x = np.zeros((N, M), dtype=np.complex128)
    for k in range(N):
        for l in range(M):
            acc = 0.0 + 0.0j
            for n in range(N):
                for m in range(M):
                    acc += Y[n, m] * np.exp(2j * np.pi * (m * l / M - n * k / N))
            x[k, l] = acc
    return x


def transmit_literal(X: np.ndarray, t: float, cfg: GridConfig) -> complex:
    """Rectangular-pulse transmit signal at one instant, symbol by symbol."""
    T = cfg.T
    acc = 0.0 + 0.0j
    for n in range(cfg.N):
        if n * T <= t < (n + 1) * T:
            for m in range(cfg.M):
                acc += X[n, m] * np.exp(2j * np.pi * m * cfg.delta_f * (t - n * T))
    return acc / math.sqrt(T)


def discrete_zak_literal(samples: np.ndarray, cfg: GridConfig) -> np.ndarray:
    """Y[k', l'] = sqrt(T) sum_{n=0}^{N} y[n*M + l'] exp(-j2pi n k'/N)."""
    M, N = cfg.M, cfg.N
    out = np.zeros((N, M), dtype=np.complex128)
    for kp in range(N):
        for lp in range(M):
            acc = 0.0 + 0.0j
            for n in range(N + 1):
                acc += samples[n * M + lp] * np.exp(-2j * np.pi * n * kp / N)
            out[kp, lp] = acc * math.sqrt(cfg.T)
    return out
