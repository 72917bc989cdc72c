"""Matched-filter ranging against dense-matrix and closed-form oracles."""

import numpy as np
import pytest

from acfshape import constellation as con
from acfshape import modulation as mod
from acfshape import pulse as pul
from acfshape import ranging as rng_mod
from acfshape.montecarlo import synthesize


def _waveform(n=16, l=2, kind="ofdm", const="qam16"):
    return con.from_name(const), mod.make_basis(kind, n), pul.rrc_spectrum(n, l, 0.35)


def _scenario(n=16, l=2, targets=(), roi=None, **kw):
    c, b, p = _waveform(n, l)
    roi = roi if roi is not None else (0, n * l - 1)
    return rng_mod.RangingScenario(c, b, p, tuple(targets), roi, **kw)


def test_grid_mapping_matches_paper_scale():
    # 200 MHz band at 10x oversampling: half-nanosecond samples
    assert rng_mod.sample_period_s(200e6, 10) == pytest.approx(0.5e-9)
    per_lag = rng_mod.range_per_lag_m(200e6, 10)
    assert per_lag == pytest.approx(0.07494811, abs=1e-8)
    assert rng_mod.lag_for_range(20.0, 200e6, 10) == 267
    assert rng_mod.lag_for_range(30.0, 200e6, 10) == 400
    assert rng_mod.range_for_lag(267, 200e6, 10) == pytest.approx(267 * per_lag)
    assert rng_mod.resolution_cell_m(200e6, 10) == pytest.approx(10 * per_lag)


def test_echo_trivial_cases():
    gen = np.random.default_rng(0)
    xt = gen.standard_normal(32) + 1j * gen.standard_normal(32)
    empty = _scenario(n=16, l=2, targets=())
    np.testing.assert_array_equal(rng_mod.synthesize_echo(empty, xt, gen), 0.0)
    one = _scenario(n=16, l=2, targets=[rng_mod.Target(0, 1.0)])
    np.testing.assert_allclose(rng_mod.synthesize_echo(one, xt, gen), xt)


def test_echo_matches_dense_shift_matrices():
    gen = np.random.default_rng(1)
    grid = 32
    xt = gen.standard_normal(grid) + 1j * gen.standard_normal(grid)
    t1 = rng_mod.Target(3, 0.8 * np.exp(0.4j))
    t2 = rng_mod.Target(17, 0.1 * np.exp(-1.1j))
    scene = _scenario(n=16, l=2, targets=[t1, t2])
    echo = rng_mod.synthesize_echo(scene, xt, gen)
    eye = np.eye(grid)
    dense = sum(
        t.amplitude * np.roll(eye, t.delay, axis=0) @ xt for t in (t1, t2)
    )
    np.testing.assert_allclose(echo, dense, atol=1e-12)


def test_matched_filter_brute_force_oracle():
    gen = np.random.default_rng(2)
    grid = 16
    xt = gen.standard_normal(grid) + 1j * gen.standard_normal(grid)
    y = gen.standard_normal(grid) + 1j * gen.standard_normal(grid)
    out = rng_mod.matched_filter(xt, y)
    brute = np.array(
        [sum(y[t] * np.conj(xt[(t - i) % grid]) for t in range(grid)) for i in range(grid)]
    )
    np.testing.assert_allclose(out, brute, atol=1e-12)


def test_matched_filter_peaks_at_target_delay():
    c, b, p = _waveform(16, 2)
    gen = np.random.default_rng(3)
    xt = synthesize(p, b, con.sample_symbols(c, 16, gen))
    scene = _scenario(n=16, l=2, targets=[rng_mod.Target(11, 1.0)])
    out = rng_mod.matched_filter(xt, rng_mod.synthesize_echo(scene, xt, gen))
    assert np.argmax(np.abs(out)) == 11
    energy = np.sum(np.abs(xt) ** 2)
    assert np.abs(out[11]) == pytest.approx(energy, rel=1e-12)


def test_matched_filter_is_linear_in_the_echo():
    gen = np.random.default_rng(4)
    xt = gen.standard_normal(24) + 1j * gen.standard_normal(24)
    y1 = gen.standard_normal(24) + 1j * gen.standard_normal(24)
    y2 = gen.standard_normal(24) + 1j * gen.standard_normal(24)
    lhs = rng_mod.matched_filter(xt, 2.0 * y1 - 1j * y2)
    rhs = 2.0 * rng_mod.matched_filter(xt, y1) - 1j * rng_mod.matched_filter(xt, y2)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_matched_filter_parseval_consistency():
    gen = np.random.default_rng(5)
    xt = gen.standard_normal(64) + 1j * gen.standard_normal(64)
    y = gen.standard_normal(64) + 1j * gen.standard_normal(64)
    out = rng_mod.matched_filter(xt, y)
    time_energy = np.sum(np.abs(out) ** 2)
    freq_energy = np.sum(np.abs(np.fft.fft(y) * np.fft.fft(xt).conj()) ** 2) / 64
    assert time_energy == pytest.approx(freq_energy, rel=1e-9)


def test_run_once_noiseless_single_target_is_exact():
    n, l = 16, 4
    # unit-modulus symbols on subcarriers keep every slot's energy at
    # exactly n, so the coherent average peaks at n^2 with no spread
    c, b, p = _waveform(n, l, kind="ofdm", const="psk8")
    scene = rng_mod.RangingScenario(
        c, b, p, (rng_mod.Target(23, 1.0),), roi=(16, 48), noise_var=0.0, m=3
    )
    profile = rng_mod.run_once(scene, np.random.default_rng(6))
    assert np.argmax(profile) == 23
    assert profile[23] == pytest.approx(n**2, rel=1e-9)
    est, peak_db = rng_mod.estimate_range(profile, scene.roi, scene.bandwidth_hz, l)
    truth = rng_mod.range_for_lag(23, scene.bandwidth_hz, l)
    assert est == pytest.approx(truth)
    assert peak_db == pytest.approx(0.0)
    assert rng_mod.detection_success(est, truth, scene.bandwidth_hz, l)


def test_noise_floor_drops_with_integration():
    # no targets: the averaged matched filter holds pure noise, whose level
    # must fall by the integration count
    n, l = 32, 4
    c, b, p = _waveform(n, l, kind="ofdm", const="psk16")
    levels = {}
    for m in (1, 64):
        scene = rng_mod.RangingScenario(
            c, b, p, (), roi=(0, n * l - 1), noise_var=0.5, m=m
        )
        gen = np.random.default_rng(7)
        acc = np.zeros(n * l)
        for _ in range(40):
            acc += rng_mod.run_once(scene, gen)
        levels[m] = acc.mean() / 40
    drop_db = 10 * np.log10(levels[1] / levels[64])
    assert drop_db == pytest.approx(10 * np.log10(64), abs=1.0)


def test_estimate_range_tie_breaks_to_smallest_lag():
    profile = np.ones(32)
    est, _ = rng_mod.estimate_range(profile, (10, 20), 200e6, 2)
    assert est == rng_mod.range_for_lag(10, 200e6, 2)


def test_scenario_validation():
    c, b, p = _waveform(8, 2)
    good = rng_mod.Target(3, 1.0)
    with pytest.raises(ValueError, match="delay"):
        rng_mod.RangingScenario(c, b, p, (rng_mod.Target(16, 1.0),), (0, 15))
    with pytest.raises(ValueError, match="distinct"):
        rng_mod.RangingScenario(c, b, p, (good, rng_mod.Target(3, 0.5)), (0, 15))
    with pytest.raises(ValueError, match="roi"):
        rng_mod.RangingScenario(c, b, p, (good,), (4, 16))
    with pytest.raises(ValueError, match="noise"):
        rng_mod.RangingScenario(c, b, p, (good,), (0, 15), noise_var=-1.0)
    with pytest.raises(ValueError, match="integration"):
        rng_mod.RangingScenario(c, b, p, (good,), (0, 15), m=0)
    with pytest.raises(ValueError, match="basis size"):
        rng_mod.RangingScenario(c, mod.make_basis("ofdm", 16), p, (good,), (0, 15))
    with pytest.raises(ValueError, match="roi"):
        rng_mod.estimate_range(np.ones(8), (5, 9), 200e6, 2)


def test_rmse_sweep_is_deterministic_and_well_formed():
    scene = _scenario(
        n=16, l=2, targets=[rng_mod.Target(9, 1.0)], roi=(5, 14), m=2
    )
    truth = rng_mod.range_for_lag(9, scene.bandwidth_hz, 2)
    first = rng_mod.rmse_sweep(scene, truth, [0.0, 20.0], runs=6, seed=42)
    again = rng_mod.rmse_sweep(scene, truth, [0.0, 20.0], runs=6, seed=42)
    assert first == again
    for row in first:
        assert set(row) == {"snr_db", "rmse_m", "rmse_hits_m", "success_rate"}
        assert 0.0 <= row["success_rate"] <= 1.0
        assert row["rmse_m"] >= 0.0
    # high SNR on an isolated target inside the roi: every run hits
    assert first[1]["success_rate"] == 1.0
    assert first[1]["rmse_hits_m"] == first[1]["rmse_m"]


def test_rmse_sweep_reports_nan_when_nothing_hits():
    # roi excludes the only target, so no estimate can land within a cell
    scene = _scenario(n=16, l=2, targets=[rng_mod.Target(25, 1.0)], roi=(2, 8))
    truth = rng_mod.range_for_lag(25, scene.bandwidth_hz, 2)
    rows = rng_mod.rmse_sweep(scene, truth, [30.0], runs=4, seed=1)
    assert rows[0]["success_rate"] == 0.0
    assert np.isnan(rows[0]["rmse_hits_m"])


def test_target_phase_redraw_keeps_magnitudes():
    scene = _scenario(
        n=16, l=2,
        targets=[rng_mod.Target(3, 2.0), rng_mod.Target(7, 0.25 * np.exp(1j))],
    )
    redrawn = rng_mod._with_phases(scene, np.random.default_rng(8))
    mags = [abs(t.amplitude) for t in redrawn.targets]
    assert mags == pytest.approx([2.0, 0.25])
    assert redrawn.targets[0].amplitude != scene.targets[0].amplitude
