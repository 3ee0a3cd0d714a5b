"""Delay-Doppler kernels and the sampled Zak transform."""

import numpy as np
import pytest

from otfszak.grid import GridConfig, TimeSamples, complex_normal, make_rng
from otfszak.zak import (
    dd_basis,
    dirichlet_delay,
    dirichlet_doppler,
    discrete_zak,
    snapped_floor,
    zak_rect_pulse,
)

from oracles import discrete_zak_literal

CFG = GridConfig()


def test_snapped_floor_scalars():
    assert snapped_floor(2.0) == 2.0
    assert snapped_floor(1.9999999999999) == 2.0   # within the snap guard
    assert snapped_floor(2.0000000000001) == 2.0
    assert snapped_floor(1.5) == 1.0
    assert snapped_floor(-0.3) == -1.0
    assert snapped_floor(-1e-13) == 0.0            # not -1
    assert isinstance(snapped_floor(0.7), float)


def test_snapped_floor_arrays():
    x = np.array([0.2, 0.99999999999999, -0.5, 3.0])
    out = snapped_floor(x)
    assert np.array_equal(out, [0.0, 1.0, -1.0, 3.0])


def test_rect_pulse_zak_values():
    # unity on the fundamental strip, pure phase elsewhere
    assert zak_rect_pulse(0.3 * CFG.T, 777.0, CFG) == pytest.approx(1.0)
    val = zak_rect_pulse(1.3 * CFG.T, 777.0, CFG)
    assert abs(abs(val) - 1.0) < 1e-14
    assert val == pytest.approx(np.exp(2j * np.pi * 777.0 * CFG.T))
    # quasi-periodic step across tau = T
    nu = 1234.5
    lhs = zak_rect_pulse(0.6 * CFG.T + CFG.T, nu, CFG)
    rhs = np.exp(2j * np.pi * nu * CFG.T) * zak_rect_pulse(0.6 * CFG.T, nu, CFG)
    assert lhs == pytest.approx(rhs)


def test_dirichlet_peaks_and_nulls():
    k = np.arange(-CFG.N, 2 * CFG.N)
    vals = dirichlet_doppler(k * CFG.doppler_resolution, CFG)
    assert np.abs(vals - (k % CFG.N == 0)).max() < 1e-12
    l = np.arange(-CFG.M, 2 * CFG.M)
    vals = dirichlet_delay(l * CFG.sample_period, CFG)
    assert np.abs(vals - (l % CFG.M == 0)).max() < 1e-12


def test_dirichlet_near_singular_branch():
    # arguments within the direct-sum window still evaluate smoothly; the
    # exact value carries a genuine O(eps) phase tilt, so only guard against
    # the closed form blowing up, not against that first-order term
    for eps in (0.0, 1e-12, 1e-9, -1e-9):
        assert dirichlet_doppler(eps, CFG) == pytest.approx(1.0, abs=1e-6)
        assert dirichlet_delay(eps * CFG.T, CFG) == pytest.approx(1.0, abs=1e-6)


def test_dirichlet_closed_form_vs_direct_sum():
    rng = make_rng(3)
    nu = (rng.random(200) - 0.5) * 5.0 * CFG.delta_f
    n = np.arange(CFG.N)
    direct = np.exp(-2j * np.pi * np.outer(n, nu * CFG.T)).sum(axis=0) / CFG.N
    assert np.abs(dirichlet_doppler(nu, CFG) - direct).max() < 1e-11
    tau = (rng.random(200) - 0.5) * 3.0 * CFG.T
    m = np.arange(CFG.M)
    direct = np.exp(2j * np.pi * np.outer(m, tau * CFG.delta_f)).sum(axis=0) / CFG.M
    assert np.abs(dirichlet_delay(tau, CFG) - direct).max() < 1e-11


def test_dd_basis_is_separable_product():
    rng = make_rng(5)
    tau = rng.random(50) * CFG.T
    nu = (rng.random(50) - 0.5) * 2 * CFG.delta_f
    k, l = 9, 4
    got = dd_basis(k, l, tau, nu, CFG)
    want = (
        zak_rect_pulse(tau, nu, CFG)
        * dirichlet_doppler(nu - k * CFG.doppler_resolution, CFG)
        * dirichlet_delay(tau - l * CFG.sample_period, CFG)
    )
    assert np.abs(got - want).max() < 1e-15


def test_dd_basis_peaks_on_its_grid_point():
    k, l = 12, 7
    val = dd_basis(k, l, l * CFG.sample_period, k * CFG.doppler_resolution, CFG)
    assert val == pytest.approx(1.0)
    other = dd_basis(k, l, 3 * CFG.sample_period, 5 * CFG.doppler_resolution, CFG)
    assert abs(other) < 1e-12


def test_dd_basis_index_validation():
    with pytest.raises(ValueError):
        dd_basis(CFG.N, 0, 0.0, 0.0, CFG)
    with pytest.raises(ValueError):
        dd_basis(0, -1, 0.0, 0.0, CFG)


def test_discrete_zak_matches_literal_sum():
    rng = make_rng(11)
    samples = complex_normal(rng, (CFG.M * (CFG.N + 1),))
    y = TimeSamples(samples, CFG.sample_period)
    got = discrete_zak(y, CFG).values
    want = discrete_zak_literal(samples, CFG)
    assert np.abs(got - want).max() < 1e-10 * np.abs(want).max()


def test_discrete_zak_linearity():
    rng = make_rng(13)
    a = complex_normal(rng, (CFG.M * (CFG.N + 1),))
    b = complex_normal(rng, (CFG.M * (CFG.N + 1),))
    lhs = discrete_zak(TimeSamples(2.0 * a + 1j * b, CFG.sample_period), CFG).values
    rhs = (
        2.0 * discrete_zak(TimeSamples(a, CFG.sample_period), CFG).values
        + 1j * discrete_zak(TimeSamples(b, CFG.sample_period), CFG).values
    )
    assert np.abs(lhs - rhs).max() < 1e-12 * np.abs(rhs).max()


def test_discrete_zak_input_validation():
    good = np.zeros(CFG.M * (CFG.N + 1))
    with pytest.raises(ValueError):
        discrete_zak(TimeSamples(np.zeros(CFG.size), CFG.sample_period), CFG)
    with pytest.raises(ValueError):
        discrete_zak(TimeSamples(good, CFG.sample_period, start_index=1), CFG)
    with pytest.raises(ValueError):
        discrete_zak(TimeSamples(good, 2 * CFG.sample_period), CFG)
