"""Very-high-mobility UAS control-link scenario and Monte Carlo sweeps.

Two-path model of an unmanned-aircraft control and non-payload link: a
deterministic line-of-sight path (Rician factor K) at zero delay and full
Doppler nu1 = v*f_c/c, plus a diffuse ground reflection arriving 33 us later
from behind (Doppler nu1*cos(pi - omega*U), U uniform, omega the beamwidth),
with Rayleigh gain. Spectral-efficiency means are averaged over the
reflection's gain and Doppler.

Trials are independent with per-trial generators derived as base seed +
trial index, and the same trial seeds are reused at every sweep point so
curves are paired (common random numbers). Per-trial SE evaluation works on
the Kronecker-factored Gram matrices; the dense matrix route in
:mod:`otfszak.capacity` is the reference it is tested against.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import multiprocessing as mp

import numpy as np

from .channel import (
    factored_doppler_sum_gram,
    factored_gram,
    two_step_factors,
    zak_factors,
)
from .grid import ChannelPath, GridConfig, PathSet, complex_normal, db_to_lin, make_rng

__all__ = [
    "SPEED_OF_LIGHT",
    "DEFAULT_SPEED_GRID",
    "DEFAULT_RHO_DB_GRID",
    "UASConfig",
    "SweepResult",
    "sample_uas_channel",
    "sweep_speed",
    "sweep_rho",
    "resolve_workers",
]

SPEED_OF_LIGHT = 299_792_458.0

DEFAULT_SPEED_GRID = (0.0, 50.0, 100.0, 150.0, 200.0, 250.0, 300.0, 350.0, 400.0)
DEFAULT_RHO_DB_GRID = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 18.0, 20.0)


@dataclass(frozen=True)
class UASConfig:
    """Scenario parameters for the UAS control-link channel."""

    carrier_hz: float = 5.06e9
    speed_mps: float = 400.0
    k_db: float = 15.0
    beamwidth_deg: float = 3.5
    tau2_s: float = 33.0e-6
    c_mps: float = SPEED_OF_LIGHT
    grid: GridConfig = GridConfig()

    def __post_init__(self) -> None:
        if self.speed_mps < 0:
            raise ValueError(f"speed must be nonnegative, got {self.speed_mps}")
        if not (self.carrier_hz > 0 and self.c_mps > 0):
            raise ValueError("carrier frequency and propagation speed must be positive")
        if not (0.0 <= self.tau2_s < self.grid.T):
            raise ValueError(
                f"second-path delay {self.tau2_s} s must lie in [0, T) with T={self.grid.T} s"
            )
        if self.beamwidth_deg < 0:
            raise ValueError(f"beamwidth must be nonnegative, got {self.beamwidth_deg}")

    @property
    def nu1_hz(self) -> float:
        """Line-of-sight Doppler shift v*f_c/c."""
        return self.speed_mps * self.carrier_hz / self.c_mps

    @property
    def k_linear(self) -> float:
        return db_to_lin(self.k_db)


def sample_uas_channel(cfg: UASConfig, rng: np.random.Generator) -> PathSet:
    """Draw one realization of the two-path UAS channel.

    Path 1 is deterministic: gain sqrt(K/(K+1)), zero delay, Doppler nu1.
    Path 2 draws gain CN(0, 1/(K+1)) and Doppler nu1*cos(pi - omega*U) with
    U ~ Uniform[0, 1] (always negative, magnitude at most nu1). Total mean
    path power is 1.
    """
    k = cfg.k_linear
    los = ChannelPath(
        gain=math.sqrt(k / (k + 1.0)),
        delay_s=0.0,
        doppler_hz=cfg.nu1_hz,
    )
    gain2 = complex(complex_normal(rng, (), variance=1.0 / (k + 1.0)))
    u = rng.random()
    omega = math.radians(cfg.beamwidth_deg)
    reflection = ChannelPath(
        gain=gain2,
        delay_s=cfg.tau2_s,
        doppler_hz=cfg.nu1_hz * math.cos(math.pi - omega * u),
    )
    return PathSet((los, reflection))


# =========================================================================
# Per-trial SE evaluation on factored Grams
# =========================================================================

def _trial_se(paths: PathSet, grid: GridConfig, rhos: np.ndarray) -> np.ndarray:
    """SE triples for one channel draw at each rho.

    Returns shape (3, len(rhos)): rows are (zak exact, zak approx, two-step).
    For a single rho the three log-dets go through Cholesky; for a rho sweep
    each Gram is eigendecomposed once and every rho is read off the spectrum.
    """
    n = grid.size
    zfac = zak_factors(paths, grid)
    tfac = two_step_factors(paths, grid)
    gram_zak = factored_gram(zfac)
    gram_zak_white = gram_zak - factored_doppler_sum_gram(zfac) / (2.0 * grid.N)
    gram_two = factored_gram(tfac)
    grams = (gram_zak_white, gram_zak, gram_two)
    out = np.empty((3, len(rhos)))
    if len(rhos) == 1:
        rho = float(rhos[0])
        eye = np.eye(n)
        for row, G in enumerate(grams):
            L = np.linalg.cholesky(eye + rho * G)
            out[row, 0] = 2.0 * np.sum(np.log2(np.real(np.diag(L)))) / n
    else:
        for row, G in enumerate(grams):
            eigs = np.maximum(np.linalg.eigvalsh(G), 0.0)
            out[row] = np.log2(1.0 + np.outer(rhos, eigs)).sum(axis=1) / n
    return out


def _trial_chunk(cfg: UASConfig, rhos: tuple, seed: int, start: int, stop: int) -> np.ndarray:
    rho_arr = np.asarray(rhos, dtype=np.float64)
    vals = np.empty((stop - start, 3, len(rho_arr)))
    for t in range(start, stop):
        paths = sample_uas_channel(cfg, make_rng(seed + t))
        vals[t - start] = _trial_se(paths, cfg.grid, rho_arr)
    return vals


def resolve_workers(explicit: int | None = None) -> int:
    """Worker count: explicit argument, then OTFS_THREADS, then CPU count."""
    if explicit is not None:
        count = int(explicit)
    else:
        env = os.environ.get("OTFS_THREADS", "").strip()
        count = int(env) if env else (os.cpu_count() or 1)
    if count < 1:
        raise ValueError(f"worker count must be >= 1, got {count}")
    return count


def _run_trials(cfg: UASConfig, rhos: tuple, trials: int, seed: int, workers: int) -> np.ndarray:
    """All trial SE samples, shape (trials, 3, len(rhos)); order-stable."""
    if workers <= 1 or trials == 1:
        return _trial_chunk(cfg, rhos, seed, 0, trials)
    chunk = max(1, math.ceil(trials / (4 * workers)))
    bounds = [(s, min(s + chunk, trials)) for s in range(0, trials, chunk)]
    vals = np.empty((trials, 3, len(rhos)))
    ctx = mp.get_context("spawn")
    with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
        futures = [pool.submit(_trial_chunk, cfg, rhos, seed, s, e) for s, e in bounds]
        for (s, e), fut in zip(bounds, futures):
            vals[s:e] = fut.result()
    return vals


def _mean_and_stderr(samples: np.ndarray) -> tuple[float, float]:
    """Compensated mean and standard error of one sample column."""
    n = samples.shape[0]
    mean = math.fsum(samples) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum((x - mean) ** 2 for x in samples) / (n - 1)
    return mean, math.sqrt(var / n)


@dataclass
class SweepResult:
    """Monte Carlo sweep output: per-point means with standard errors.

    ``samples_*`` hold the per-trial SE values (shape points x trials), kept
    so paired statistics (e.g. the per-trial Zak-minus-two-step gap) do not
    have to be re-simulated.
    """

    axis_name: str
    axis: np.ndarray
    se_zak_exact: np.ndarray
    se_zak_exact_stderr: np.ndarray
    se_zak_approx: np.ndarray
    se_zak_approx_stderr: np.ndarray
    se_twostep: np.ndarray
    se_twostep_stderr: np.ndarray
    trials: int
    seed: int
    samples_zak_exact: np.ndarray
    samples_zak_approx: np.ndarray
    samples_twostep: np.ndarray

    def gap_mean(self) -> np.ndarray:
        """Mean per-trial gap (Zak exact minus two-step) at each point."""
        diffs = self.samples_zak_exact - self.samples_twostep
        return np.array([_mean_and_stderr(row)[0] for row in diffs])

    def gap_stderr(self) -> np.ndarray:
        """Standard error of the paired gap at each point."""
        diffs = self.samples_zak_exact - self.samples_twostep
        return np.array([_mean_and_stderr(row)[1] for row in diffs])


def _collect(axis_name: str, axis, per_point: list[np.ndarray], trials: int, seed: int) -> SweepResult:
    """Reduce per-point trial samples (each (trials, 3)) into a SweepResult."""
    stats = {0: ([], []), 1: ([], []), 2: ([], [])}
    for samples in per_point:
        for row in range(3):
            mean, err = _mean_and_stderr(samples[:, row])
            stats[row][0].append(mean)
            stats[row][1].append(err)
    return SweepResult(
        axis_name=axis_name,
        axis=np.asarray(axis, dtype=np.float64),
        se_zak_exact=np.array(stats[0][0]),
        se_zak_exact_stderr=np.array(stats[0][1]),
        se_zak_approx=np.array(stats[1][0]),
        se_zak_approx_stderr=np.array(stats[1][1]),
        se_twostep=np.array(stats[2][0]),
        se_twostep_stderr=np.array(stats[2][1]),
        trials=trials,
        seed=seed,
        samples_zak_exact=np.stack([s[:, 0] for s in per_point]),
        samples_zak_approx=np.stack([s[:, 1] for s in per_point]),
        samples_twostep=np.stack([s[:, 2] for s in per_point]),
    )


def sweep_speed(
    cfg: UASConfig,
    speeds=DEFAULT_SPEED_GRID,
    rho: float = 10.0,
    trials: int = 2000,
    seed: int = 0,
    workers: int | None = None,
) -> SweepResult:
    """Mean SE of both receivers versus UAS speed at fixed rho.

    For each speed, draws ``trials`` channels (reflection gain and Doppler
    redrawn per trial) and averages the three SE figures. Identical seed and
    config give bit-identical results regardless of worker count.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not rho > 0:
        raise ValueError(f"rho must be positive, got {rho}")
    speeds = [float(v) for v in speeds]
    if not speeds:
        raise ValueError("speed grid is empty")
    n_workers = resolve_workers(workers)
    per_point = []
    for v in speeds:
        samples = _run_trials(replace(cfg, speed_mps=v), (float(rho),), trials, seed, n_workers)
        per_point.append(samples[:, :, 0])
    return _collect("speed_mps", speeds, per_point, trials, seed)


def sweep_rho(
    cfg: UASConfig,
    rhos_db=DEFAULT_RHO_DB_GRID,
    trials: int = 2000,
    seed: int = 0,
    workers: int | None = None,
) -> SweepResult:
    """Mean SE of both receivers versus rho at the config's fixed speed.

    The channel ensemble does not depend on rho, so each trial's Grams are
    eigendecomposed once and evaluated on the whole rho grid.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    rhos_db = [float(r) for r in rhos_db]
    if not rhos_db:
        raise ValueError("rho grid is empty")
    rhos = tuple(db_to_lin(r) for r in rhos_db)
    n_workers = resolve_workers(workers)
    samples = _run_trials(cfg, rhos, trials, seed, n_workers)
    per_point = [samples[:, :, i] for i in range(len(rhos_db))]
    return _collect("rho_db", rhos_db, per_point, trials, seed)
