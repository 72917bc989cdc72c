import itertools

import numpy as np
import pytest

from acfshape import acfstats as st
from acfshape import constellation as con
from acfshape import modulation as mod
from acfshape import montecarlo as mc
from acfshape import pulse as pul


def enumerated_acf_moments(spec, basis, pulse):
    """Exact ACF mean and second moment by enumerating every symbol block.

    Independent of the closed forms: goes the long way through time-domain
    synthesis and the FFT correlation, weighting each block by its
    probability.  Only tractable for tiny alphabets and block sizes.
    """
    pts, pr = spec.points, spec.probs
    assert pts.size ** pulse.n <= 1_000_000
    combos = np.array(list(itertools.product(range(pts.size), repeat=pulse.n)))
    syms = pts[combos]
    w = np.prod(pr[combos], axis=1)
    acf = np.fft.ifft(np.abs(mc.block_spectrum(pulse, basis, syms)) ** 2, axis=-1)
    mean = np.sum(w[:, None] * acf, axis=0)
    mean_sq = np.sum(w[:, None] * np.abs(acf) ** 2, axis=0)
    return mean, mean_sq


CASES = [
    (con.psk(4), 3, 2, 1),
    (con.psk(4), 3, 3, 2),
    (con.psk(8), 3, 2, 1),
    (con.qam(16), 2, 2, 1),
    (con.qam(16), 2, 3, 3),
    (con.two_ring_mix(2.5), 2, 2, 1),
]


@pytest.mark.parametrize("spec, n, l, m", CASES, ids=lambda c: getattr(c, "name", c))
@pytest.mark.parametrize("kind", ["sc", "ofdm", "haar"])
def test_expected_sq_acf_against_exact_enumeration(spec, n, l, m, kind):
    if kind == "haar":
        basis = mod.random_unitary(n, np.random.default_rng(42))
    else:
        basis = mod.make_basis(kind, n)
    pulse = pul.rrc_spectrum(n, l, 0.6)
    kurt = con.kurtosis(spec)
    mean, mean_sq = enumerated_acf_moments(spec, basis, pulse)
    # single-block second moment, then the m-block average: the mean part
    # stays put while the variance part shrinks by 1/m
    var = mean_sq - np.abs(mean) ** 2
    total = np.abs(mean) ** 2 + var / m
    stats = st.expected_sq_acf(pulse, basis, kurt, m=m)
    np.testing.assert_allclose(stats.total, total, atol=1e-12)
    np.testing.assert_allclose(st.mean_acf(pulse), mean, atol=1e-12)
    np.testing.assert_allclose(stats.squared_mean, np.abs(mean) ** 2, atol=1e-12)


@pytest.mark.parametrize("kind", ["sc", "ofdm"])
@pytest.mark.parametrize("kurt", [1.0, 1.32, 2.0, 2.5])
@pytest.mark.parametrize("m", [1, 10])
def test_special_cases_match_generic_formula(kind, kurt, m):
    n, l = 16, 4
    pulse = pul.rrc_spectrum(n, l, 0.35)
    basis = mod.make_basis(kind, n)
    generic = st.expected_sq_acf(pulse, basis, kurt, m=m)
    shortcut = (st.ofdm_sq_acf if kind == "ofdm" else st.sc_sq_acf)(pulse, kurt, m=m)
    np.testing.assert_allclose(shortcut.variance, generic.variance, atol=1e-12)
    np.testing.assert_allclose(shortcut.squared_mean, generic.squared_mean, atol=1e-12)


def test_zero_lag_identity():
    # E|R_0|^2 = n^2 + (kurt - 1) n / m whatever the pulse and basis
    n, l = 12, 3
    for alpha in (0.0, 0.4, 1.0):
        pulse = pul.rrc_spectrum(n, l, alpha)
        for kind in ("sc", "ofdm", "cdma"):
            if kind == "cdma" and (n & (n - 1)) != 0:
                continue
            basis = mod.make_basis(kind, n)
            for kurt in (1.0, 1.32, 2.0):
                for m in (1, 7):
                    stats = st.expected_sq_acf(pulse, basis, kurt, m=m, lags=0)
                    expect = n**2 + (kurt - 1.0) * n / m
                    assert stats.total[0] == pytest.approx(expect, rel=1e-12)


def test_gain_energy_closed_form():
    # ||gt_k||^2 = n - 2 (1 - cos(2 pi k / l)) sum g (1 - g)
    n, l = 32, 4
    pulse = pul.rrc_spectrum(n, l, 0.7)
    lags = np.arange(l * n)
    got = st.gain_energy(pulse, lags)
    cross = np.sum(pulse.g * (1.0 - pulse.g))
    expect = n - 2.0 * (1.0 - np.cos(2 * np.pi * lags / l)) * cross
    np.testing.assert_allclose(got, expect, atol=1e-10)


def test_mean_acf_endpoints():
    pulse = pul.rrc_spectrum(16, 4, 0.35)
    mean = st.mean_acf(pulse)
    assert mean[0] == pytest.approx(16.0, rel=1e-12)
    block_lags = np.arange(1, 16) * 4
    np.testing.assert_allclose(mean[block_lags], 0.0, atol=1e-10)


def enumerated_fourth_moment(spec, n):
    pts, pr = spec.points, spec.probs
    combos = np.array(list(itertools.product(range(pts.size), repeat=n)))
    syms = pts[combos]
    w = np.prod(pr[combos], axis=1)
    v = np.einsum("ki,kj->kji", syms.conj(), syms).reshape(-1, n * n)
    return np.einsum("k,ki,kj->ij", w, v, v.conj())


@pytest.mark.parametrize("spec", [con.psk(4), con.qam(16), con.two_ring_mix(2.5)])
@pytest.mark.parametrize("n", [1, 2])
def test_fourth_moment_matrix_against_enumeration(spec, n):
    expect = enumerated_fourth_moment(spec, n)
    got = st.fourth_moment_matrix(n, con.kurtosis(spec))
    np.testing.assert_allclose(got, expect, atol=1e-12)


def test_fourth_moment_matrix_qpsk_pattern():
    kurt = 1.0
    expect = np.array(
        [
            [1.0, 0, 0, 1],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [1, 0, 0, 1.0],
        ]
    )
    np.testing.assert_allclose(st.fourth_moment_matrix(2, kurt), expect, atol=1e-15)


def test_gaussian_symbols_make_basis_irrelevant():
    n, l = 16, 3
    pulse = pul.rrc_spectrum(n, l, 0.5)
    rng = np.random.default_rng(3)
    ofdm = st.expected_sq_acf(pulse, mod.make_basis("ofdm", n), 2.0)
    for _ in range(5):
        other = st.expected_sq_acf(pulse, mod.random_unitary(n, rng), 2.0)
        np.testing.assert_allclose(other.variance, ofdm.variance, atol=1e-10)


def test_basis_ordering_by_kurtosis():
    n, l = 12, 3
    pulse = pul.rrc_spectrum(n, l, 0.4)
    rng = np.random.default_rng(9)
    sc = mod.make_basis("sc", n)
    ofdm = mod.make_basis("ofdm", n)
    for _ in range(20):
        basis = mod.random_unitary(n, rng)
        sub = st.expected_sq_acf(pulse, basis, 1.32)
        assert np.all(sub.variance >= st.expected_sq_acf(pulse, ofdm, 1.32).variance - 1e-9)
        sup = st.expected_sq_acf(pulse, basis, 2.5)
        assert np.all(sup.variance >= st.expected_sq_acf(pulse, sc, 2.5).variance - 1e-9)


def test_to_db_of_peak():
    vals = np.array([16.0, 0.0, 1e-50])
    db = st.to_db_of_peak(vals, 4)
    assert db[0] == pytest.approx(0.0, abs=1e-12)
    assert db[1] == st.DB_FLOOR
    assert db[2] == st.DB_FLOOR
    with pytest.raises(ValueError):
        st.to_db_of_peak(np.array([-1.0]), 4)


def test_input_validation():
    pulse = pul.rrc_spectrum(8, 2, 0.5)
    basis = mod.make_basis("sc", 4)
    with pytest.raises(ValueError):
        st.expected_sq_acf(pulse, basis, 1.32)
    with pytest.raises(ValueError):
        st.expected_sq_acf(pulse, mod.make_basis("sc", 8), 1.32, m=0)
