"""Exception types.

Every error carries an ``exit_code`` used by the command line front end:

====  ===========================================
code  meaning
====  ===========================================
2     configuration / contract error
3     out-of-band or band-edge request
4     convergence failure (root finding, fitting)
5     I/O failure
====  ===========================================
"""

from __future__ import annotations


class DTQWError(Exception):
    exit_code = 1


class ConfigError(DTQWError, ValueError):
    exit_code = 2


class EmptyPeriod(ConfigError):
    pass


class LengthMismatch(ConfigError):
    pass


class NonFiniteAngle(ConfigError):
    pass


class WrongPeriod(ConfigError):
    pass


class UnsupportedPeriod(ConfigError):
    pass


class InsufficientHistory(ConfigError):
    pass


class ZeroCoupling(ConfigError):
    pass


class ParseError(ConfigError):
    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class UnknownKey(ConfigError):
    pass


class MissingRequired(ConfigError):
    pass


class OutOfBand(DTQWError, ValueError):
    exit_code = 3


class BandEdgeDegeneracy(DTQWError, ArithmeticError):
    """Raised when sin(m*omega) is too close to zero for the eigenvector formula."""

    exit_code = 3


class Excluded(BandEdgeDegeneracy):
    pass


class UnresolvedRoot(DTQWError, ArithmeticError):
    exit_code = 4


class NoDipFound(DTQWError, RuntimeError):
    exit_code = 4


class IoError(DTQWError, OSError):
    exit_code = 5
