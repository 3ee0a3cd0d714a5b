"""Both TD -> DD receiver front ends and their operation-count models."""

import numpy as np
import pytest

from otfszak.channel import build_two_step_matrix, channel_waveform
from otfszak.grid import (
    ChannelPath,
    DDGrid,
    GridConfig,
    PathSet,
    TFGrid,
    TimeSamples,
    complex_normal,
    make_rng,
)
from otfszak.modulate import heisenberg_samples, isfft, transmit_waveform
from otfszak.receive import (
    op_counters,
    reset_op_counters,
    two_step_receive,
    two_step_receive_ops,
    wigner,
    zak_receive,
    zak_receive_ops,
)
from otfszak.zak import discrete_zak

SMALL = GridConfig(M=6, N=8, delta_f=2000.0)


def test_wigner_recovers_clean_tf_grid():
    cfg = SMALL
    rng = make_rng(20)
    X = TFGrid(complex_normal(rng, (cfg.N, cfg.M)))
    Y = wigner(lambda t: transmit_waveform(X, t, cfg), cfg, Q=64)
    scale = np.abs(X.values).max()
    assert np.abs(Y.values - X.values).max() < 1e-4 * scale


def test_wigner_zero_signal_gives_zero_grid():
    cfg = SMALL
    Y = wigner(lambda t: np.zeros(np.shape(t), dtype=np.complex128), cfg, Q=4)
    assert np.all(Y.values == 0.0)


def test_wigner_rejects_bad_oversampling():
    cfg = SMALL
    with pytest.raises(ValueError):
        wigner(lambda t: np.zeros(np.shape(t)), cfg, Q=0)


def test_two_step_identity_round_trip():
    cfg = SMALL
    rng = make_rng(21)
    x = DDGrid(complex_normal(rng, (cfg.N, cfg.M)))
    X = isfft(x, cfg)
    got = two_step_receive(lambda t: transmit_waveform(X, t, cfg), cfg, Q=64)
    scale = np.abs(x.values).max()
    assert np.abs(got.values - x.values).max() < 1e-4 * scale


def test_receive_chain_is_linear():
    cfg = SMALL
    rng = make_rng(22)
    Xa = TFGrid(complex_normal(rng, (cfg.N, cfg.M)))
    Xb = TFGrid(complex_normal(rng, (cfg.N, cfg.M)))

    def mix(a, b):
        return lambda t: a * transmit_waveform(Xa, t, cfg) + b * transmit_waveform(Xb, t, cfg)

    ya = two_step_receive(mix(1.0, 0.0), cfg, Q=4).values
    yb = two_step_receive(mix(0.0, 1.0), cfg, Q=4).values
    yab = two_step_receive(mix(2.0, 1j), cfg, Q=4).values
    assert np.abs(yab - (2.0 * ya + 1j * yb)).max() < 1e-12


def test_quadrature_error_contracts_with_oversampling():
    # smooth integrand (zero delay keeps kinks off the symbol interiors):
    # the midpoint rule is second order, so doubling Q cuts the error ~4x
    cfg = SMALL
    rng = make_rng(23)
    paths = PathSet((ChannelPath(1.0, 0.0, 0.3 * cfg.delta_f),))
    x = DDGrid(complex_normal(rng, (cfg.N, cfg.M)))
    ref = DDGrid.from_vec(build_two_step_matrix(paths, cfg).matrix @ x.vec(), cfg)
    y_eval = channel_waveform(isfft(x, cfg), paths, cfg)
    errs = {
        Q: np.abs(two_step_receive(y_eval, cfg, Q=Q).values - ref.values).max()
        for Q in (8, 16)
    }
    assert errs[8] > 1e-9  # well above the floor, so the ratio is meaningful
    assert errs[8] / errs[16] > 3.0


def test_breakpoints_restore_accuracy_for_delayed_paths():
    cfg = SMALL
    rng = make_rng(24)
    tau = 0.37 * cfg.T
    paths = PathSet((ChannelPath(1.0, tau, 0.4 * cfg.delta_f),))
    x = DDGrid(complex_normal(rng, (cfg.N, cfg.M)))
    ref = DDGrid.from_vec(build_two_step_matrix(paths, cfg).matrix @ x.vec(), cfg)
    y_eval = channel_waveform(isfft(x, cfg), paths, cfg)
    err_plain = np.abs(two_step_receive(y_eval, cfg, Q=16).values - ref.values).max()
    err_split = np.abs(
        two_step_receive(y_eval, cfg, Q=16, breakpoints=(tau,)).values - ref.values
    ).max()
    assert err_split < 0.2 * err_plain


def test_zak_receive_is_the_discrete_zak_transform():
    cfg = SMALL
    rng = make_rng(25)
    y = TimeSamples(complex_normal(rng, (cfg.M * (cfg.N + 1),)), cfg.sample_period)
    assert np.array_equal(zak_receive(y, cfg).values, discrete_zak(y, cfg).values)


def test_zak_receive_rejects_wrong_window():
    cfg = SMALL
    y = TimeSamples(np.zeros(cfg.size), cfg.sample_period)
    with pytest.raises(ValueError):
        zak_receive(y, cfg)


def test_op_counters_meter_each_route():
    cfg = GridConfig()
    rng = make_rng(26)
    X = TFGrid(complex_normal(rng, (cfg.N, cfg.M)))
    y = heisenberg_samples(X, cfg)
    window = TimeSamples(
        np.concatenate([y.samples, np.zeros(cfg.M)]), cfg.sample_period
    )
    reset_op_counters()
    zak_receive(window, cfg)
    zak_receive(window, cfg)
    two_step_receive(lambda t: transmit_waveform(X, t, cfg), cfg, Q=2)
    assert op_counters["zak"] == pytest.approx(2 * zak_receive_ops(cfg))
    assert op_counters["two_step"] == pytest.approx(two_step_receive_ops(cfg))
    reset_op_counters()
    assert op_counters == {"zak": 0.0, "two_step": 0.0}


def test_direct_route_is_cheaper_at_scale():
    for M, N in ((15, 46), (32, 64), (64, 128)):
        cfg = GridConfig(M=M, N=N, delta_f=2000.0)
        assert zak_receive_ops(cfg) < two_step_receive_ops(cfg)
