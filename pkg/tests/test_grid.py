"""Grid geometry, containers, and RNG plumbing."""

import numpy as np
import pytest

from otfszak.grid import (
    ChannelPath,
    DDGrid,
    EffectiveChannel,
    ChannelKind,
    GridConfig,
    LinkBudget,
    PathSet,
    TimeSamples,
    complex_normal,
    db_to_lin,
    lin_to_db,
    make_rng,
    unvec_index,
    vec_index,
)


def test_grid_defaults_and_derived_quantities():
    cfg = GridConfig()
    assert cfg.M == 15 and cfg.N == 46 and cfg.delta_f == 2000.0
    assert cfg.T * cfg.delta_f == 1.0
    assert cfg.size == 690
    assert cfg.bandwidth == 30000.0
    assert cfg.frame_duration == pytest.approx(46 * 5e-4)
    assert cfg.sample_period == pytest.approx(cfg.T / cfg.M)
    assert cfg.doppler_resolution == pytest.approx(cfg.delta_f / cfg.N)


def test_grid_from_symbol_duration():
    cfg = GridConfig.from_symbol_duration(M=8, N=16, T=1e-3)
    assert cfg.delta_f == pytest.approx(1000.0)
    with pytest.raises(ValueError):
        GridConfig.from_symbol_duration(M=8, N=16, T=0.0)


@pytest.mark.parametrize("kwargs", [
    dict(M=0), dict(N=0), dict(M=-2), dict(delta_f=0.0), dict(delta_f=-1.0),
])
def test_grid_rejects_bad_parameters(kwargs):
    with pytest.raises(ValueError):
        GridConfig(**kwargs)


def test_vec_index_round_trip():
    cfg = GridConfig(M=5, N=7, delta_f=1000.0)
    seen = set()
    for k in range(cfg.N):
        for l in range(cfg.M):
            i = vec_index(k, l, cfg)
            assert unvec_index(i, cfg) == (k, l)
            seen.add(i)
    assert seen == set(range(cfg.size))
    with pytest.raises(ValueError):
        vec_index(cfg.N, 0, cfg)
    with pytest.raises(ValueError):
        vec_index(0, -1, cfg)
    with pytest.raises(ValueError):
        unvec_index(cfg.size, cfg)


def test_vectorization_matches_c_order_reshape():
    cfg = GridConfig(M=4, N=3, delta_f=1000.0)
    values = np.arange(12, dtype=np.complex128).reshape(3, 4)
    grid = DDGrid(values)
    v = grid.vec()
    for k in range(cfg.N):
        for l in range(cfg.M):
            assert v[vec_index(k, l, cfg)] == values[k, l]
    back = DDGrid.from_vec(v, cfg)
    assert np.array_equal(back.values, values)


def test_ddgrid_validation():
    with pytest.raises(ValueError):
        DDGrid(np.zeros(5))
    with pytest.raises(ValueError):
        DDGrid.from_vec(np.zeros(7), GridConfig(M=2, N=3, delta_f=1.0))


def test_make_rng_determinism_and_range():
    a = make_rng(123).standard_normal(8)
    b = make_rng(123).standard_normal(8)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, make_rng(124).standard_normal(8))
    with pytest.raises(ValueError):
        make_rng(-1)
    with pytest.raises(ValueError):
        make_rng(2**64)


def test_complex_normal_statistics():
    rng = make_rng(7)
    z = complex_normal(rng, (200_000,), variance=3.0)
    assert abs(np.mean(np.abs(z) ** 2) - 3.0) < 0.05
    assert abs(np.mean(z)) < 0.02
    # real/imag parts uncorrelated
    assert abs(np.mean(z.real * z.imag)) < 0.02
    with pytest.raises(ValueError):
        complex_normal(rng, (4,), variance=-1.0)


def test_time_samples_container():
    y = TimeSamples(np.ones(6), 0.5, start_index=2)
    assert y.length == 6
    assert np.allclose(y.times(), 0.5 * np.arange(2, 8))
    with pytest.raises(ValueError):
        TimeSamples(np.ones((2, 3)), 0.5)
    with pytest.raises(ValueError):
        TimeSamples(np.ones(3), 0.0)


def test_path_containers():
    with pytest.raises(ValueError):
        ChannelPath(1.0, -1e-6, 0.0)
    with pytest.raises(ValueError):
        PathSet(())
    cfg = GridConfig()
    ps = PathSet((ChannelPath(1.0, 0.0, 100.0), ChannelPath(0.5j, 0.9 * cfg.T, -50.0)))
    assert len(ps) == 2
    ps.validate_delays(cfg)
    bad = PathSet((ChannelPath(1.0, cfg.T, 0.0),))
    with pytest.raises(ValueError):
        bad.validate_delays(cfg)


def test_effective_channel_shape_guard():
    H = EffectiveChannel(np.eye(4), ChannelKind.ZAK)
    assert H.size == 4
    with pytest.raises(ValueError):
        EffectiveChannel(np.zeros((3, 4)), ChannelKind.ZAK)


def test_db_conversions():
    assert db_to_lin(10.0) == pytest.approx(10.0)
    assert lin_to_db(db_to_lin(7.3)) == pytest.approx(7.3)
    with pytest.raises(ValueError):
        lin_to_db(0.0)


def test_link_budget():
    cfg = GridConfig()
    lb = LinkBudget.from_energy(symbol_energy=6900.0, noise_scale=1.0, cfg=cfg)
    assert lb.rho == pytest.approx(10.0)
    assert lb.rho_db == pytest.approx(10.0)
    with pytest.raises(ValueError):
        LinkBudget(rho=0.0)
    with pytest.raises(ValueError):
        LinkBudget.from_energy(symbol_energy=-1.0, noise_scale=1.0, cfg=cfg)
