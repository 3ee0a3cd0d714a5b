"""DD <-> TF transforms and the rectangular-pulse transmit waveform."""

import numpy as np
import pytest

from otfszak.grid import DDGrid, GridConfig, TFGrid, complex_normal, make_rng
from otfszak.modulate import heisenberg_samples, isfft, sfft, transmit_waveform

from oracles import isfft_literal, sfft_literal, transmit_literal

SMALL = GridConfig(M=4, N=6, delta_f=2000.0)


def test_isfft_matches_literal_double_sum():
    rng = make_rng(1)
    x = complex_normal(rng, (SMALL.N, SMALL.M))
    got = isfft(DDGrid(x), SMALL).values
    want = isfft_literal(x, SMALL)
    assert np.abs(got - want).max() < 1e-13


def test_sfft_matches_literal_double_sum():
    rng = make_rng(2)
    Y = complex_normal(rng, (SMALL.N, SMALL.M))
    got = sfft(TFGrid(Y), SMALL).values
    want = sfft_literal(Y, SMALL)
    assert np.abs(got - want).max() < 1e-12


def test_transform_round_trips():
    cfg = GridConfig()
    rng = make_rng(3)
    x = DDGrid(complex_normal(rng, (cfg.N, cfg.M)))
    assert np.abs(sfft(isfft(x, cfg), cfg).values - x.values).max() < 1e-12
    Y = TFGrid(complex_normal(rng, (cfg.N, cfg.M)))
    assert np.abs(isfft(sfft(Y, cfg), cfg).values - Y.values).max() < 1e-12


def test_isfft_scaling_convention():
    # one DD impulse spreads to constant-modulus TF samples of height 1/(MN)
    cfg = SMALL
    x = np.zeros((cfg.N, cfg.M), dtype=np.complex128)
    x[0, 0] = 1.0
    X = isfft(DDGrid(x), cfg).values
    assert np.abs(X - 1.0 / cfg.size).max() < 1e-15


def test_transform_shape_guards():
    cfg = SMALL
    with pytest.raises(ValueError):
        isfft(DDGrid(np.zeros((2, 2))), cfg)
    with pytest.raises(ValueError):
        sfft(TFGrid(np.zeros((cfg.M, cfg.N))), cfg)


def test_heisenberg_samples_match_waveform_at_grid_instants():
    cfg = GridConfig()
    rng = make_rng(4)
    X = TFGrid(complex_normal(rng, (cfg.N, cfg.M)))
    y = heisenberg_samples(X, cfg)
    assert y.length == cfg.size
    assert y.sample_period == pytest.approx(cfg.sample_period)
    vals = transmit_waveform(X, y.times(), cfg)
    assert np.abs(vals - y.samples).max() < 1e-10 * np.abs(y.samples).max()


def test_transmit_waveform_matches_literal_sum():
    cfg = SMALL
    rng = make_rng(5)
    X = TFGrid(complex_normal(rng, (cfg.N, cfg.M)))
    t = rng.random(40) * cfg.N * cfg.T
    got = transmit_waveform(X, t, cfg)
    want = np.array([transmit_literal(X.values, ti, cfg) for ti in t])
    assert np.abs(got - want).max() < 1e-12


def test_transmit_waveform_zero_outside_frame():
    cfg = SMALL
    rng = make_rng(6)
    X = TFGrid(complex_normal(rng, (cfg.N, cfg.M)))
    t = np.array([-0.5 * cfg.T, -1e-9, cfg.N * cfg.T, cfg.N * cfg.T + 0.3])
    assert np.all(transmit_waveform(X, t, cfg) == 0.0)


def test_transmit_waveform_symbol_boundary_is_half_open():
    cfg = SMALL
    rng = make_rng(7)
    X = TFGrid(complex_normal(rng, (cfg.N, cfg.M)))
    # at t = nT the sum must use symbol n, not n-1; subcarrier phases reset
    for n in (1, 3):
        got = transmit_waveform(X, np.array([n * cfg.T]), cfg)[0]
        want = X.values[n].sum() / np.sqrt(cfg.T)
        assert got == pytest.approx(want)
    # representation noise within the snap guard resolves to the boundary
    t = 2 * cfg.T * (1 + 1e-14)
    got = transmit_waveform(X, np.array([t]), cfg)[0]
    assert got == pytest.approx(X.values[2].sum() / np.sqrt(cfg.T))
