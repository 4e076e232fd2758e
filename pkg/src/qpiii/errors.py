"""Exception hierarchy shared by all modules."""


class QPIIIError(Exception):
    """Base class for every error raised by the package."""


class ZeroDenominator(QPIIIError, ZeroDivisionError):
    pass


class DenominatorVanishes(QPIIIError, ZeroDivisionError):
    """An exact value was evaluated at one of its poles; resample the point."""


class BackendMismatch(QPIIIError, TypeError):
    pass


class NegativeSize(QPIIIError, ValueError):
    pass


class PoleHit(QPIIIError, ZeroDivisionError):
    pass


class PoleAtResonance(PoleHit):
    """Block evaluated at u = q^n where a Nekrasov factor vanishes."""


class ResonantU(PoleHit):
    pass


class ResonantSigma(QPIIIError, ValueError):
    pass


class UnitModulusBase(QPIIIError, ValueError):
    pass


class NoConvergence(QPIIIError, ArithmeticError):
    pass


class ZeroTau(QPIIIError, ZeroDivisionError):
    pass


class SingularLocus(QPIIIError, ZeroDivisionError):
    """A birational map hit one of its denominators."""
