"""Verification engine for q-deformed Painleve III(D8) tau functions.

Submodules: ``scalars`` and ``series`` (arithmetic), ``partitions``
(conformal blocks), ``qspecial`` (q-special functions), ``tau``,
``bilinear``, ``symmetry``, ``limits``, ``checks`` and ``cli``.
"""

from .errors import (
    BackendMismatch,
    DenominatorVanishes,
    NegativeSize,
    NoConvergence,
    PoleAtResonance,
    PoleHit,
    QPIIIError,
    ResonantSigma,
    ResonantU,
    SingularLocus,
    UnitModulusBase,
    ZeroDenominator,
    ZeroTau,
)
from .report import VERSION, CheckReport

__version__ = VERSION

__all__ = [
    "BackendMismatch",
    "CheckReport",
    "DenominatorVanishes",
    "NegativeSize",
    "NoConvergence",
    "PoleAtResonance",
    "PoleHit",
    "QPIIIError",
    "ResonantSigma",
    "ResonantU",
    "SingularLocus",
    "UnitModulusBase",
    "ZeroDenominator",
    "ZeroTau",
    "__version__",
]
