"""Exception hierarchy shared by every dunkl_analyzer module."""


class DunklAnalyzerError(Exception):
    """Base class for all toolkit errors"""


class UnsupportedArgumentError(DunklAnalyzerError):
    """Argument outside the range where a special function can be evaluated reliably"""


class PrecisionLossError(DunklAnalyzerError):
    """A fit or evaluation lost all significant digits"""


class InsufficientResolutionError(DunklAnalyzerError):
    """A quadrature rule cannot reach its declared tolerance"""


class UnboundedTailError(DunklAnalyzerError):
    """The decay metadata of a profile cannot certify a tail bound"""


class OutOfRangeError(DunklAnalyzerError):
    """Evaluation requested outside the certified domain of a sampled profile"""


class SingularMultiplierError(DunklAnalyzerError):
    """Spectral multiplier is singular where the spectrum does not vanish"""


class InvalidExponentsError(DunklAnalyzerError):
    """Exponent combination outside the range where an inequality applies"""


class TruncatedLevelSetError(DunklAnalyzerError):
    """A level set reaches the end of the grid, so its measure is unknown"""


class NotFoundError(DunklAnalyzerError):
    """A search over a bounded grid was exhausted"""


class InsufficientDecayError(DunklAnalyzerError):
    """A sum or series tail cannot be bounded from the available decay data"""


class InvalidWeightDirectionError(DunklAnalyzerError):
    """Weight direction vector violates the magnitude condition"""


class TypeTooLargeError(DunklAnalyzerError):
    """Exponential type is not strictly below the lattice parameter"""


class InvalidRangeError(DunklAnalyzerError):
    """Step parameters lie outside the admissible rectangle"""


class ConfigError(DunklAnalyzerError):
    """Malformed suite configuration"""

    def __init__(self, message: str, field: str = None, line: int = None, column: int = None):
        self.field = field
        self.line = line
        self.column = column
        location = []
        if line is not None:
            location.append(f"line {line}, column {column}")
        if field:
            location.append(f"field '{field}'")
        if location:
            message = f"{message} ({'; '.join(location)})"
        super().__init__(message)


class MissingBaselineError(DunklAnalyzerError):
    """No frozen band is registered for a check in non-recording mode"""


class RegistryError(DunklAnalyzerError):
    """The baseline registry cannot be read or written"""


class SequenceConstructionError(DunklAnalyzerError):
    """An avoidance sequence violates one of its construction postconditions"""
