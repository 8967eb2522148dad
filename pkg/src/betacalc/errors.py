"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command line front end:
2 for domain/validation problems, 3 for numerical failures.
"""


class BetaCalcError(Exception):
    exit_code = 2


class InvalidInterval(BetaCalcError):
    pass


class InvalidParameter(BetaCalcError):
    pass


class OutOfRange(BetaCalcError):
    pass


class DepthExceeded(BetaCalcError):
    pass


class LatticeMismatch(BetaCalcError):
    pass


class InvalidExponent(BetaCalcError):
    pass


class DegenerateBC(BetaCalcError):
    pass


class RealityViolation(BetaCalcError):
    pass


class NumericalError(BetaCalcError):
    exit_code = 3


class NonFiniteSample(NumericalError):
    pass


class NonFiniteValue(NumericalError):
    pass


class NoConvergence(NumericalError):
    pass


class SeriesDivergence(NumericalError):
    pass


class PoleEncountered(NumericalError):
    pass


class EigenNoConvergence(NumericalError):
    pass


class TruncationCapWarning(RuntimeWarning):
    """Orbit depth hit ``k_max`` before the tail criterion was met."""


class ConfigError(BetaCalcError):
    """Malformed run configuration; ``field`` names the offending entry."""

    exit_code = 1

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
