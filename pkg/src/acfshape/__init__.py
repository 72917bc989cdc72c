"""acfshape: ACF statistics and pulse-shape design for random modulated signals.

The package is organized by pipeline stage:

    constellation  symbol alphabets and their fourth moments
    modulation     unitary bases (SC, OFDM, CDMA, custom)
    pulse          Nyquist pulses described by in-band spectral gains
    fourier        DFT-grid correlation helpers shared by the stages
    acfstats       closed-form mean/variance of the periodic ACF
    montecarlo     empirical validation of the closed forms
    qpsolver       scaled-dual ADMM solvers for small dense QPs
    shaping        sidelobe-shaping gain design (quadratic programs)
    ranging        matched-filter range estimation experiments
    tableio        deterministic CSV/JSON experiment outputs

The command-line surface lives in ``acfshape.cli`` and is installed as
the ``acfshape`` console script.
"""

__version__ = "0.1.0"

from . import (
    acfstats,
    constellation,
    fourier,
    modulation,
    montecarlo,
    pulse,
    qpsolver,
    ranging,
    shaping,
    tableio,
)

__all__ = [
    "__version__",
    "acfstats",
    "constellation",
    "fourier",
    "modulation",
    "montecarlo",
    "pulse",
    "qpsolver",
    "ranging",
    "shaping",
    "tableio",
]
