"""Empirical ACF statistics for validating the closed forms.

Each trial draws m independent symbol blocks, synthesizes the shaped
signal for each, and averages the m periodic ACFs into one estimate.
Trial t uses its own generator seeded from (seed, stream tag, t), so
results do not depend on chunking or execution order.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .constellation import ConstellationSpec, sample_symbols
from .modulation import ModulationBasis, modulate
from .pulse import NyquistPulse, assemble_full_spectrum

__all__ = [
    "TrialConfig",
    "MonteCarloResult",
    "block_spectrum",
    "synthesize",
    "run_trials",
]

_TAG_SYMBOLS = 1


@dataclass(frozen=True)
class TrialConfig:
    """Everything needed to reproduce one Monte Carlo sweep."""

    constellation: ConstellationSpec
    basis: ModulationBasis
    pulse: NyquistPulse
    trials: int
    seed: int
    m: int = 1
    lags: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if self.basis.n != self.pulse.n:
            raise ValueError(
                f"basis size {self.basis.n} != pulse block size {self.pulse.n}"
            )
        if self.trials < 2:
            raise ValueError(f"need at least 2 trials, got {self.trials}")
        if self.m < 1:
            raise ValueError(f"averaging count must be >= 1, got {self.m}")


@dataclass(frozen=True)
class MonteCarloResult:
    """Per-lag sample statistics across trials."""

    lags: np.ndarray
    mean_sq: np.ndarray
    se: np.ndarray
    mean: np.ndarray
    var: np.ndarray
    trials: int
    m: int


def block_spectrum(
    pulse: NyquistPulse, basis: ModulationBasis, symbols: np.ndarray
) -> np.ndarray:
    """DFT of the shaped signal for symbol blocks of shape (..., n).

    Zero-insertion upsampling replicates the block spectrum l times, so the
    full transform is the tiled symbol spectrum times the pulse spectrum.
    """
    x = modulate(basis, symbols)
    xf = np.fft.fft(x, axis=-1)
    tiled = np.tile(xf, (1,) * (xf.ndim - 1) + (pulse.l,))
    return tiled * np.sqrt(pulse.l * assemble_full_spectrum(pulse))


def synthesize(
    pulse: NyquistPulse, basis: ModulationBasis, symbols: np.ndarray
) -> np.ndarray:
    """Time-domain shaped signal of length l*n per symbol block."""
    return np.fft.ifft(block_spectrum(pulse, basis, symbols), axis=-1)


def _chunk_trials(total: int, block_bytes: int) -> int:
    """Trials per batch, sized from an optional thread hint.

    Only memory layout depends on this; the per-trial generators make the
    numbers identical for any chunking.
    """
    threads = int(os.environ.get("ACFSHAPE_THREADS", "1") or "1")
    budget = 1 << 25  # 32 MiB of complex workspace per thread
    chunk = max(1, (budget * max(threads, 1)) // max(block_bytes, 1))
    return min(total, chunk)


def run_trials(config: TrialConfig) -> MonteCarloResult:
    """Monte Carlo estimate of the ACF mean and squared magnitude per lag."""
    pulse, basis = config.pulse, config.basis
    ln = pulse.l * pulse.n
    lags = np.arange(ln) if config.lags is None else np.atleast_1d(config.lags)
    spectrum_amp = np.sqrt(pulse.l * assemble_full_spectrum(pulse))
    acf_rows = np.empty((config.trials, lags.size), dtype=complex)
    chunk = _chunk_trials(config.trials, config.m * ln * 16)
    for start in range(0, config.trials, chunk):
        stop = min(start + chunk, config.trials)
        blocks = np.empty((stop - start, config.m, pulse.n), dtype=complex)
        for t in range(start, stop):
            rng = np.random.default_rng(
                np.random.SeedSequence((config.seed, _TAG_SYMBOLS, t))
            )
            blocks[t - start] = sample_symbols(
                config.constellation, (config.m, pulse.n), rng
            )
        xf = np.fft.fft(modulate(basis, blocks), axis=-1)
        xf = np.tile(xf, (1, 1, pulse.l)) * spectrum_amp
        # Averaging the m power spectra first saves m-1 inverse transforms.
        power = np.mean(np.abs(xf) ** 2, axis=1)
        acf_rows[start:stop] = np.fft.ifft(power, axis=-1)[:, lags]
    sq = np.abs(acf_rows) ** 2
    mean_sq = sq.mean(axis=0)
    resid = sq - mean_sq
    t = config.trials
    se = np.sqrt(np.sum(resid**2, axis=0) / (t * (t - 1)))
    mean = acf_rows.mean(axis=0)
    var = mean_sq - np.abs(mean) ** 2
    return MonteCarloResult(lags, mean_sq, se, mean, var, t, config.m)
