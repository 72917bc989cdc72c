"""Unitary modulation bases (single carrier, OFDM, CDMA, custom).

A basis maps a block of n symbols s to time samples x = U s with U unitary.
What the ACF statistics actually consume is the squared-magnitude matrix
Vt = |V|^2 of V = U^H F^H (F the unitary DFT): Vt is doubly stochastic and
captures how symbol energy spreads across subcarriers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fourier import dft_matrix

__all__ = [
    "ModulationBasis",
    "make_basis",
    "modulate",
    "random_unitary",
    "from_name",
    "from_text_file",
]

_UNITARY_TOL = 1e-10


@dataclass(frozen=True)
class ModulationBasis:
    """A validated n x n unitary basis with its derived spectral maps."""

    kind: str
    n: int
    u: np.ndarray
    v: np.ndarray = field(init=False, repr=False)
    v_tilde: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        u = np.ascontiguousarray(np.asarray(self.u, dtype=complex))
        if u.shape != (self.n, self.n):
            raise ValueError(f"basis matrix has shape {u.shape}, expected {(self.n, self.n)}")
        gram_err = np.linalg.norm(u.conj().T @ u - np.eye(self.n))
        if gram_err > _UNITARY_TOL:
            raise ValueError(
                f"basis is not unitary: ||U^H U - I||_F = {gram_err:.3e} > {_UNITARY_TOL}"
            )
        v = u.conj().T @ dft_matrix(self.n).conj().T
        vt = np.abs(v) ** 2
        row_err = np.max(np.abs(vt.sum(axis=1) - 1.0))
        col_err = np.max(np.abs(vt.sum(axis=0) - 1.0))
        if max(row_err, col_err) > _UNITARY_TOL:
            raise ValueError(
                f"derived |V|^2 is not doubly stochastic (row err {row_err:.3e}, "
                f"col err {col_err:.3e})"
            )
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "v_tilde", vt)


def _hadamard(n: int) -> np.ndarray:
    if n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"CDMA spreading needs a power-of-two block size, got {n}")
    h = np.ones((1, 1))
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    return h


def make_basis(kind: str, n: int, matrix: np.ndarray | None = None) -> ModulationBasis:
    """Construct a named basis: 'sc', 'ofdm', 'cdma', or 'custom' with matrix.

    sc   -> identity (symbols are the time samples)
    ofdm -> inverse unitary DFT (symbols live on subcarriers)
    cdma -> Sylvester Hadamard / sqrt(n), n a power of two
    """
    kind = kind.lower()
    if kind == "sc":
        u = np.eye(n, dtype=complex)
    elif kind == "ofdm":
        u = dft_matrix(n).conj().T
    elif kind == "cdma":
        u = _hadamard(n).astype(complex) / np.sqrt(n)
    elif kind == "custom":
        if matrix is None:
            raise ValueError("custom basis requires a matrix")
        u = matrix
    else:
        raise ValueError(f"unknown basis kind {kind!r}")
    return ModulationBasis(kind, n, u)


def modulate(basis: ModulationBasis, symbols: np.ndarray) -> np.ndarray:
    """Map symbol blocks (..., n) to time samples x = U s.

    SC and OFDM take O(n)/O(n log n) shortcuts; they agree with the dense
    product to working precision (covered by tests).
    """
    s = np.asarray(symbols, dtype=complex)
    if s.shape[-1] != basis.n:
        raise ValueError(f"symbol block length {s.shape[-1]} != basis size {basis.n}")
    if basis.kind == "sc":
        return s.copy()
    if basis.kind == "ofdm":
        # U = F^H, and F^H s = sqrt(n) * ifft(s) under numpy's scaling.
        return np.sqrt(basis.n) * np.fft.ifft(s, axis=-1)
    return s @ basis.u.T


def random_unitary(n: int, rng: np.random.Generator) -> ModulationBasis:
    """Haar-distributed random unitary basis (QR with phase correction)."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return ModulationBasis("custom", n, q)


def from_name(name: str, n: int) -> ModulationBasis:
    """CLI-style lookup for the built-in basis kinds."""
    return make_basis(name, n)


def from_text_file(path, n: int) -> ModulationBasis:
    """Load a custom unitary from a row-major text file of (re, im) pairs.

    The file holds n*n rows of two columns, row-major over the matrix.
    """
    data = np.loadtxt(path, ndmin=2)
    if data.shape != (n * n, 2):
        raise ValueError(
            f"expected {n * n} rows of (re, im) for an {n}x{n} basis, got {data.shape}"
        )
    u = (data[:, 0] + 1j * data[:, 1]).reshape(n, n)
    return make_basis("custom", n, u)
