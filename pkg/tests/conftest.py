"""Shared fixtures: the expensive Monte Carlo runs, computed once per session.

All three runs use the default very-high-mobility scenario and a common base
seed, so per-trial channel draws are paired across sweep points.
"""

import pytest

from otfszak.uas import UASConfig, sweep_rho, sweep_speed

BASE_SEED = 0


@pytest.fixture(scope="session")
def anchor_point_400mps():
    """2000-trial mean SE at v = 400 m/s, rho = 10 dB."""
    return sweep_speed(UASConfig(), speeds=[400.0], rho=10.0, trials=2000, seed=BASE_SEED)


@pytest.fixture(scope="session")
def speed_sweep():
    """Default 0..400 m/s grid, 400 paired trials per point, rho = 10 dB."""
    return sweep_speed(UASConfig(), rho=10.0, trials=400, seed=BASE_SEED)


@pytest.fixture(scope="session")
def rho_sweep():
    """Default 0..20 dB grid at v = 400 m/s, 400 trials."""
    return sweep_rho(UASConfig(), trials=400, seed=BASE_SEED)
