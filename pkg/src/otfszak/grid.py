"""Grid geometry, domain containers, and RNG plumbing.

Conventions used throughout the package:

* The delay-Doppler (DD) grid has N Doppler rows and M delay columns; a DD
  symbol x[k, l] sits at Doppler k*delta_f/N and delay l*T/M, with
  0 <= k < N and 0 <= l < M.
* The time-frequency (TF) grid has N symbol rows and M subcarrier columns,
  X[n, m] at time nT and frequency m*delta_f.
* Vectorized DD quantities order the entry (k, l) at linear index k*M + l,
  i.e. C-order flattening of the (N, M) array.
* All arrays are complex128; single precision is never used.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "GridConfig",
    "DDGrid",
    "TFGrid",
    "TimeSamples",
    "ChannelPath",
    "PathSet",
    "ChannelKind",
    "EffectiveChannel",
    "LinkBudget",
    "vec_index",
    "unvec_index",
    "make_rng",
    "complex_normal",
    "db_to_lin",
    "lin_to_db",
]


def db_to_lin(x_db: float) -> float:
    """Power ratio in dB to linear scale."""
    return float(10.0 ** (np.asarray(x_db) / 10.0))


def lin_to_db(x: float) -> float:
    """Linear power ratio to dB."""
    if x <= 0:
        raise ValueError(f"dB undefined for nonpositive ratio {x}")
    return float(10.0 * np.log10(x))


@dataclass(frozen=True)
class GridConfig:
    """Geometry of one OTFS frame.

    M delay bins (subcarriers) and N Doppler bins (symbols) with subcarrier
    spacing ``delta_f``. The symbol duration is tied to the spacing by
    T * delta_f = 1, so only ``delta_f`` is stored and T is derived.
    """

    M: int = 15
    N: int = 46
    delta_f: float = 2000.0

    def __post_init__(self) -> None:
        if self.M < 1 or self.N < 1:
            raise ValueError(f"grid needs M >= 1 and N >= 1, got M={self.M}, N={self.N}")
        if not self.delta_f > 0:
            raise ValueError(f"subcarrier spacing must be positive, got {self.delta_f}")

    @classmethod
    def from_symbol_duration(cls, M: int, N: int, T: float) -> "GridConfig":
        """Build a config from the symbol duration instead of the spacing."""
        if not T > 0:
            raise ValueError(f"symbol duration must be positive, got {T}")
        return cls(M=M, N=N, delta_f=1.0 / T)

    @property
    def T(self) -> float:
        """Symbol duration in seconds (1/delta_f)."""
        return 1.0 / self.delta_f

    @property
    def size(self) -> int:
        """Number of DD grid points, M*N."""
        return self.M * self.N

    @property
    def bandwidth(self) -> float:
        """Occupied bandwidth M*delta_f in Hz."""
        return self.M * self.delta_f

    @property
    def frame_duration(self) -> float:
        """Frame duration N*T in seconds."""
        return self.N * self.T

    @property
    def sample_period(self) -> float:
        """Critical sample spacing T/M (also the delay resolution)."""
        return self.T / self.M

    @property
    def doppler_resolution(self) -> float:
        """Doppler bin spacing delta_f/N in Hz."""
        return self.delta_f / self.N


def vec_index(k: int, l: int, cfg: GridConfig) -> int:
    """Linear index of DD grid point (Doppler k, delay l): k*M + l."""
    if not (0 <= k < cfg.N and 0 <= l < cfg.M):
        raise ValueError(f"DD index (k={k}, l={l}) outside grid {cfg.N}x{cfg.M}")
    return k * cfg.M + l


def unvec_index(i: int, cfg: GridConfig) -> tuple[int, int]:
    """Inverse of :func:`vec_index`: linear index back to (k, l)."""
    if not (0 <= i < cfg.size):
        raise ValueError(f"linear index {i} outside [0, {cfg.size})")
    return divmod(i, cfg.M)


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic random stream for a 64-bit seed.

    Identical seeds give identical streams; Monte Carlo code derives per-trial
    generators as ``make_rng(base_seed + trial_index)``.
    """
    seed = int(seed)
    if not (0 <= seed < 2**64):
        raise ValueError(f"seed must fit in an unsigned 64-bit integer, got {seed}")
    return np.random.default_rng(seed)


def complex_normal(rng: np.random.Generator, shape=(), variance: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian CN(0, variance) samples.

    Real and imaginary parts are independent N(0, variance/2), so the total
    (complex) variance is ``variance``.
    """
    if variance < 0:
        raise ValueError(f"variance must be nonnegative, got {variance}")
    scale = np.sqrt(variance / 2.0)
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    return z * scale


@dataclass
class DDGrid:
    """DD-domain symbols: values[k, l], shape (N, M)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.ndim != 2:
            raise ValueError(f"DD grid must be 2-D (N, M), got shape {self.values.shape}")

    @classmethod
    def from_vec(cls, v: np.ndarray, cfg: GridConfig) -> "DDGrid":
        """Undo the k*M + l vectorization."""
        v = np.asarray(v, dtype=np.complex128)
        if v.shape != (cfg.size,):
            raise ValueError(f"expected vector of length {cfg.size}, got shape {v.shape}")
        return cls(v.reshape(cfg.N, cfg.M))

    def vec(self) -> np.ndarray:
        """Flatten with entry (k, l) at position k*M + l."""
        return self.values.reshape(-1).copy()


@dataclass
class TFGrid:
    """TF-domain symbols: values[n, m], shape (N, M)."""

    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.ndim != 2:
            raise ValueError(f"TF grid must be 2-D (N, M), got shape {self.values.shape}")


@dataclass
class TimeSamples:
    """Uniformly spaced baseband samples at t = (start_index + j) * sample_period."""

    samples: np.ndarray
    sample_period: float
    start_index: int = 0

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.complex128)
        if self.samples.ndim != 1:
            raise ValueError(f"time samples must be 1-D, got shape {self.samples.shape}")
        if not self.sample_period > 0:
            raise ValueError(f"sample period must be positive, got {self.sample_period}")

    @property
    def length(self) -> int:
        return self.samples.shape[0]

    def times(self) -> np.ndarray:
        """Sample instants in seconds."""
        return (self.start_index + np.arange(self.length)) * self.sample_period


@dataclass(frozen=True)
class ChannelPath:
    """One propagation path: complex gain, delay (s), Doppler shift (Hz)."""

    gain: complex
    delay_s: float
    doppler_hz: float

    def __post_init__(self) -> None:
        if self.delay_s < 0:
            raise ValueError(f"path delay must be nonnegative, got {self.delay_s}")


@dataclass(frozen=True)
class PathSet:
    """A finite multipath channel: L paths acting as DD-domain shifts."""

    paths: tuple[ChannelPath, ...]

    def __post_init__(self) -> None:
        if len(self.paths) < 1:
            raise ValueError("a channel needs at least one path")

    def __iter__(self):
        return iter(self.paths)

    def __len__(self) -> int:
        return len(self.paths)

    def validate_delays(self, cfg: GridConfig) -> None:
        """All analytic kernels assume 0 <= delay < T."""
        for p in self.paths:
            if not (0.0 <= p.delay_s < cfg.T):
                raise ValueError(
                    f"path delay {p.delay_s} s outside [0, T) with T={cfg.T} s"
                )


class ChannelKind(Enum):
    """Which receiver's effective channel a matrix describes."""

    TWO_STEP = "two_step"
    ZAK = "zak"


@dataclass
class EffectiveChannel:
    """Vectorized DD input-output map y = H x (+ noise), H of shape (MN, MN).

    Row k'*M + l' is the receive DD bin (k', l'); column k*M + l the transmit
    bin (k, l).
    """

    matrix: np.ndarray
    kind: ChannelKind

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=np.complex128)
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise ValueError(f"effective channel must be square, got {self.matrix.shape}")

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class LinkBudget:
    """Transmit-power to receiver-noise-power ratio bookkeeping.

    rho = E / (M*N*N0) where E is the frame symbol energy and N0 the noise
    scale; either specify rho directly or derive it from (E, N0).
    """

    rho: float
    symbol_energy: float | None = None
    noise_scale: float | None = None

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise ValueError(f"rho must be positive, got {self.rho}")

    @classmethod
    def from_energy(cls, symbol_energy: float, noise_scale: float, cfg: GridConfig) -> "LinkBudget":
        if not (symbol_energy > 0 and noise_scale > 0):
            raise ValueError("symbol energy and noise scale must be positive")
        rho = symbol_energy / (cfg.size * noise_scale)
        return cls(rho=rho, symbol_energy=symbol_energy, noise_scale=noise_scale)

    @property
    def rho_db(self) -> float:
        return lin_to_db(self.rho)
