import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acfshape import fourier


@pytest.mark.parametrize("n", [1, 2, 3, 8, 17])
def test_dft_matrix_is_unitary(n):
    f = fourier.dft_matrix(n)
    np.testing.assert_allclose(f.conj().T @ f, np.eye(n), atol=1e-12)


def test_dft_matrix_matches_numpy_fft():
    rng = np.random.default_rng(1)
    n = 12
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    np.testing.assert_allclose(
        np.sqrt(n) * fourier.dft_matrix(n) @ x, np.fft.fft(x), atol=1e-12
    )


def test_band_dft_columns_entries():
    n, l = 5, 3
    lags = np.array([0, 1, 7])
    f = fourier.band_dft_columns(n, l, lags)
    m = np.arange(n)
    for j, k in enumerate(lags):
        expect = np.exp(-2j * np.pi * k * m / (l * n)) / np.sqrt(n)
        np.testing.assert_allclose(f[:, j], expect, atol=1e-14)
    # every column has unit norm; the zero-lag column is flat
    np.testing.assert_allclose(np.sum(np.abs(f) ** 2, axis=0), 1.0, atol=1e-13)
    np.testing.assert_allclose(f[:, 0], 1 / np.sqrt(n), atol=1e-14)


def test_lag_rotation_values():
    lam = fourier.lag_rotation(4, np.array([0, 2, 4, 6]))
    np.testing.assert_allclose(lam, [1.0, -1.0, 1.0, -1.0], atol=1e-14)
    lam = fourier.lag_rotation(3, np.arange(7))
    np.testing.assert_allclose(np.abs(lam), 1.0, atol=1e-14)
    np.testing.assert_allclose(lam[np.array([0, 3, 6])], 1.0, atol=1e-14)


def test_circular_convolve_against_direct_sum():
    rng = np.random.default_rng(2)
    n = 9
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    h = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    direct = np.array(
        [sum(h[m] * x[(t - m) % n] for m in range(n)) for t in range(n)]
    )
    np.testing.assert_allclose(fourier.circular_convolve(x, h), direct, atol=1e-12)


def test_periodic_crosscorr_against_direct_sum():
    rng = np.random.default_rng(3)
    n = 8
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    direct = np.array(
        [sum(np.conj(x[m]) * y[(m + k) % n] for m in range(n)) for k in range(n)]
    )
    np.testing.assert_allclose(fourier.periodic_crosscorr(x, y), direct, atol=1e-12)


def test_periodic_autocorr_against_shift_matrix():
    rng = np.random.default_rng(4)
    n = 7
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    shift = np.roll(np.eye(n), -1, axis=0)  # (shift @ x)[m] = x[m+1 mod n]
    r = fourier.periodic_autocorr(x)
    mat = np.eye(n)
    for k in range(n):
        np.testing.assert_allclose(r[k], x.conj() @ (mat @ x), atol=1e-12)
        mat = shift @ mat
    np.testing.assert_allclose(r[0], np.sum(np.abs(x) ** 2), atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 32), st.integers(0, 2**31 - 1))
def test_autocorr_is_selfcrosscorr_and_parseval(n, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    r = fourier.periodic_autocorr(x)
    np.testing.assert_allclose(r, fourier.periodic_crosscorr(x, x), atol=1e-10)
    # lag-0 dominates every other lag in magnitude
    assert np.all(np.abs(r) <= r[0].real + 1e-10)
