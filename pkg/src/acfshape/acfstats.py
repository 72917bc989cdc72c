"""Closed-form statistics of the periodic ACF of random modulated signals.

For n i.i.d. unit-power proper symbols mapped through a unitary basis,
upsampled by l and shaped by a Nyquist pulse, the expected squared ACF
magnitude at each lag splits into a deterministic part (the squared mean,
set entirely by the pulse) and a variance part (driven by symbol
randomness, shrinking as 1/m when m independent blocks are averaged).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fourier import band_dft_columns
from .modulation import ModulationBasis
from .pulse import NyquistPulse, aliased_gain, pulse_acf

__all__ = [
    "AcfStats",
    "all_lags",
    "mean_acf",
    "gain_energy",
    "expected_sq_acf",
    "ofdm_sq_acf",
    "sc_sq_acf",
    "fourth_moment_matrix",
    "to_db_of_peak",
]

DB_FLOOR = -400.0


@dataclass(frozen=True)
class AcfStats:
    """Expected squared-magnitude ACF split into mean and variance parts."""

    lags: np.ndarray
    squared_mean: np.ndarray
    variance: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.squared_mean + self.variance


def all_lags(pulse: NyquistPulse) -> np.ndarray:
    return np.arange(pulse.l * pulse.n)


def _as_lags(pulse: NyquistPulse, lags) -> np.ndarray:
    if lags is None:
        return all_lags(pulse)
    return np.atleast_1d(np.asarray(lags))


def mean_acf(pulse: NyquistPulse, lags=None) -> np.ndarray:
    """Expected ACF value per lag; n times the pulse autocorrelation."""
    lags = _as_lags(pulse, lags)
    return pulse.n * pulse_acf(pulse, lags)


def gain_energy(pulse: NyquistPulse, lags=None) -> np.ndarray:
    """Squared norm of the lag-combined gain vector at each lag."""
    lags = _as_lags(pulse, lags)
    return np.sum(np.abs(aliased_gain(pulse, lags)) ** 2, axis=0)


def _squared_mean(pulse: NyquistPulse, lags: np.ndarray) -> np.ndarray:
    return np.abs(mean_acf(pulse, lags)) ** 2


def expected_sq_acf(
    pulse: NyquistPulse,
    basis: ModulationBasis,
    kurt: float,
    m: int = 1,
    lags=None,
) -> AcfStats:
    """Exact E|R_k|^2 for any unitary basis, split as mean^2 + variance.

    The variance at lag k is
        (1/m) * (||gt_k||^2 + (kurt - 2) * n * ||Vt (gt_k * conj(f_k))||^2)
    where gt_k are the lag-combined gains, f_k the in-band DFT column and
    Vt the basis energy-spreading matrix.  With kurt = 2 (Gaussian symbols)
    the basis term vanishes and every basis gives the same statistics.
    """
    if basis.n != pulse.n:
        raise ValueError(f"basis size {basis.n} != pulse block size {pulse.n}")
    if m < 1:
        raise ValueError(f"averaging count must be >= 1, got {m}")
    lags = _as_lags(pulse, lags)
    n = pulse.n
    f = band_dft_columns(n, pulse.l, lags)
    gt = aliased_gain(pulse, lags)
    energy = np.sum(np.abs(gt) ** 2, axis=0)
    spread = basis.v_tilde @ (gt * f.conj())
    basis_term = n * np.sum(np.abs(spread) ** 2, axis=0)
    variance = (energy + (kurt - 2.0) * basis_term) / m
    return AcfStats(lags, _squared_mean(pulse, lags), variance)


def ofdm_sq_acf(pulse: NyquistPulse, kurt: float, m: int = 1, lags=None) -> AcfStats:
    """Shortcut for the subcarrier basis: variance = (kurt - 1)/m * ||gt_k||^2."""
    if m < 1:
        raise ValueError(f"averaging count must be >= 1, got {m}")
    lags = _as_lags(pulse, lags)
    variance = (kurt - 1.0) / m * gain_energy(pulse, lags)
    return AcfStats(lags, _squared_mean(pulse, lags), variance)


def sc_sq_acf(pulse: NyquistPulse, kurt: float, m: int = 1, lags=None) -> AcfStats:
    """Shortcut for the identity basis.

    The energy-spreading matrix averages uniformly, so the basis term folds
    back onto the squared mean: variance =
    (1/m) * (||gt_k||^2 + (kurt - 2)/n * mean_sq_k).
    """
    if m < 1:
        raise ValueError(f"averaging count must be >= 1, got {m}")
    lags = _as_lags(pulse, lags)
    sq_mean = _squared_mean(pulse, lags)
    variance = (gain_energy(pulse, lags) + (kurt - 2.0) / pulse.n * sq_mean) / m
    return AcfStats(lags, sq_mean, variance)


def fourth_moment_matrix(n: int, kurt: float) -> np.ndarray:
    """Covariance-like matrix E[vec(s s^H) vec(s s^H)^H] for i.i.d. symbols.

    Proper unit-power symbols leave only three index pairings alive:
    identity everywhere, kurt on the n entries where all four indices
    coincide, and ones coupling distinct |s_i|^2 |s_k|^2 products.
    """
    s = np.eye(n * n)
    diag = np.arange(n) * (n + 1)
    s[np.ix_(diag, diag)] = 1.0
    s[diag, diag] = kurt
    return s


def to_db_of_peak(values: np.ndarray, n: int, floor_db: float = DB_FLOOR) -> np.ndarray:
    """10 log10(value / n^2), floored so exact zeros stay plottable.

    Cancellation in the variance formulas can leave residues a hair below
    zero where the true value is exactly zero, so negatives within 1e-9 of
    the peak count as zero; anything more negative is a real error.
    """
    values = np.asarray(values, dtype=float)
    ref = float(n) ** 2
    if np.any(values < -1e-9 * ref):
        raise ValueError("negative value cannot be expressed in dB")
    values = np.maximum(values, 0.0)
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(values / ref)
    return np.maximum(db, floor_db)
