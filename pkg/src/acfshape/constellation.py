"""Constellation alphabets: geometry, validation, moments, and sampling.

A constellation is a finite complex alphabet with point probabilities (or the
continuous circular Gaussian).  Every alphabet accepted here is normalized to
unit average power and must have zero mean and zero pseudo-variance E(s^2);
those properties are what make the ACF statistics depend on the alphabet only
through its fourth moment E|s|^4.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ConstellationSpec",
    "psk",
    "qam",
    "gaussian",
    "custom",
    "ring_points",
    "two_ring_mix",
    "from_name",
    "from_text_file",
    "kurtosis",
    "classify",
    "sample_symbols",
]

_ATOL = 1e-12


@dataclass(frozen=True)
class ConstellationSpec:
    """A validated symbol alphabet.

    kind is one of "psk", "qam", "gaussian", "custom".  For "gaussian" the
    points/probs arrays are empty and sampling draws from the circular
    complex normal with unit power.
    """

    kind: str
    points: np.ndarray = field(default_factory=lambda: np.empty(0, complex))
    probs: np.ndarray = field(default_factory=lambda: np.empty(0, float))
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", np.asarray(self.points, dtype=complex))
        object.__setattr__(self, "probs", np.asarray(self.probs, dtype=float))
        if self.kind != "gaussian":
            _validate(self.points, self.probs)

    @property
    def size(self) -> int:
        return self.points.size


def _validate(points: np.ndarray, probs: np.ndarray) -> None:
    if points.size == 0:
        raise ValueError("constellation has no points")
    if points.shape != probs.shape:
        raise ValueError(
            f"points and probs shapes differ: {points.shape} vs {probs.shape}"
        )
    if not np.all(np.isfinite(points.view(float))) or not np.all(np.isfinite(probs)):
        raise ValueError("constellation contains non-finite entries")
    if np.any(probs < 0):
        idx = int(np.argmin(probs))
        raise ValueError(f"negative probability {probs[idx]} at index {idx}")
    total = probs.sum()
    if abs(total - 1.0) > _ATOL:
        raise ValueError(f"probabilities sum to {total!r}, expected 1 within {_ATOL}")
    power = float(np.dot(probs, np.abs(points) ** 2))
    if abs(power - 1.0) > _ATOL:
        raise ValueError(f"mean power is {power!r}, expected 1 within {_ATOL}")
    mean = complex(np.dot(probs, points))
    if abs(mean) > _ATOL:
        raise ValueError(f"mean is {mean!r}, expected 0 within {_ATOL}")
    pseudo = complex(np.dot(probs, points**2))
    if abs(pseudo) > _ATOL:
        raise ValueError(
            f"pseudo-variance E(s^2) is {pseudo!r}, expected 0 within {_ATOL}; "
            "alphabets without quadrant symmetry (e.g. BPSK) are not supported"
        )


def psk(m: int) -> ConstellationSpec:
    """Uniform m-ary phase-shift keying on the unit circle (m >= 3).

    m = 2 (BPSK) has E(s^2) = 1 and is rejected by validation.
    """
    if m < 3:
        raise ValueError("PSK order must be >= 3 (BPSK has nonzero pseudo-variance)")
    pts = np.exp(2j * np.pi * np.arange(m) / m)
    return ConstellationSpec("psk", pts, np.full(m, 1.0 / m), name=f"psk{m}")


def qam(m: int) -> ConstellationSpec:
    """Square Gray-ordered m-QAM scaled to unit average power.

    Only square grids (m a power of 4) are generated.  Cross shapes
    (128/512/2048) have no canonical grid here and raise.
    """
    side = int(round(np.sqrt(m)))
    if side * side != m or m < 4 or (m & (m - 1)) != 0:
        raise ValueError(
            f"only square QAM orders are supported (4, 16, 64, ...); got {m}"
        )
    levels = np.arange(-(side - 1), side, 2, dtype=float)
    grid = levels[None, :] + 1j * levels[:, None]
    pts = grid.reshape(-1)
    pts = pts / np.sqrt(np.mean(np.abs(pts) ** 2))
    return ConstellationSpec("qam", pts, np.full(m, 1.0 / m), name=f"qam{m}")


def gaussian() -> ConstellationSpec:
    """Circular complex Gaussian 'alphabet' with unit power (kurtosis 2)."""
    return ConstellationSpec("gaussian", name="gaussian")


def custom(points, probs=None, name: str = "custom") -> ConstellationSpec:
    """Validated custom alphabet; probs defaults to uniform."""
    points = np.asarray(points, dtype=complex)
    if probs is None:
        probs = np.full(points.size, 1.0 / max(points.size, 1))
    return ConstellationSpec("custom", points, np.asarray(probs, float), name=name)


def ring_points(radius: float, count: int, phase0: float = 0.0) -> np.ndarray:
    """count equally spaced points on a circle of the given radius."""
    return radius * np.exp(1j * (phase0 + 2 * np.pi * np.arange(count) / count))


def two_ring_mix(kurt: float = 2.5, inner_count: int = 16, outer_count: int = 4) -> ConstellationSpec:
    """Uniform two-ring alphabet with a prescribed fourth moment.

    With ring powers a (inner) and b (outer) and inner probability
    p = inner_count/(inner_count+outer_count), solve
        p*a + (1-p)*b = 1,   p*a^2 + (1-p)*b^2 = kurt.
    Useful as a super-Gaussian test alphabet (default kurt 2.5 > 2).
    """
    p = inner_count / (inner_count + outer_count)
    q = 1.0 - p
    # a = 1 - sqrt(q*(kurt-1)/p), b = (1 - p*a)/q  (smaller root keeps a > 0)
    disc = q * (kurt - 1.0) / p
    a = 1.0 - np.sqrt(disc)
    if a <= 0:
        raise ValueError(f"no two-ring solution for kurtosis {kurt} at p={p}")
    b = (1.0 - p * a) / q
    pts = np.concatenate(
        [
            ring_points(np.sqrt(a), inner_count, phase0=np.pi / inner_count),
            ring_points(np.sqrt(b), outer_count, phase0=np.pi / outer_count),
        ]
    )
    return custom(pts, name=f"rings{inner_count}+{outer_count}")


_NAME_RE = re.compile(r"^(psk|qam)(\d+)$")


def from_name(name: str) -> ConstellationSpec:
    """Parse CLI-style names: 'psk16', 'qam64', 'gaussian'."""
    low = name.strip().lower()
    if low == "gaussian":
        return gaussian()
    m = _NAME_RE.match(low)
    if m is None:
        raise ValueError(
            f"unknown constellation {name!r}; expected pskM, qamM, or gaussian"
        )
    order = int(m.group(2))
    return psk(order) if m.group(1) == "psk" else qam(order)


def from_text_file(path, name: str = "") -> ConstellationSpec:
    """Load a custom alphabet from a two-column (re, im) text file.

    Points get uniform probabilities.  The usual validation applies, so the
    file must describe a unit-power, zero-mean, zero-pseudo-variance alphabet.
    """
    data = np.loadtxt(path, ndmin=2)
    if data.shape[1] != 2:
        raise ValueError(f"expected two columns (re, im) in {path}, got {data.shape[1]}")
    pts = data[:, 0] + 1j * data[:, 1]
    return custom(pts, name=name or str(path))


def kurtosis(spec: ConstellationSpec) -> float:
    """Normalized fourth moment E|s|^4 (unit power makes this the kurtosis)."""
    if spec.kind == "gaussian":
        return 2.0
    return float(np.dot(spec.probs, np.abs(spec.points) ** 4))


def classify(spec: ConstellationSpec, eps: float = 1e-9) -> str:
    """'sub-gaussian', 'gaussian', or 'super-gaussian' by kurtosis vs 2."""
    k = kurtosis(spec)
    if abs(k - 2.0) <= eps:
        return "gaussian"
    return "sub-gaussian" if k < 2.0 else "super-gaussian"


def sample_symbols(
    spec: ConstellationSpec,
    count: int | tuple[int, ...],
    rng: np.random.Generator,
) -> np.ndarray:
    """Draw i.i.d. symbols from the alphabet; count may be a shape tuple."""
    if spec.kind == "gaussian":
        z = rng.standard_normal(count) + 1j * rng.standard_normal(count)
        return z / np.sqrt(2.0)
    cum = np.cumsum(spec.probs)
    cum[-1] = 1.0  # guard the last edge against rounding
    idx = np.searchsorted(cum, rng.random(count), side="right")
    return spec.points[idx]
