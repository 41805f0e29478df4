"""
Exception hierarchy shared by every module of the package.
"""


class DiscontinuityError(Exception):
    """Base class for all errors raised by the library."""


class DimensionError(DiscontinuityError, ValueError):
    """Shapes that cannot be combined."""


class ParameterError(DiscontinuityError, ValueError):
    """A scalar parameter outside its allowed range, or an unknown kind."""


class DomainError(DiscontinuityError, ValueError):
    """Input values outside the domain of a function."""


class ContractError(DiscontinuityError, ValueError):
    """A violated precondition of an operation."""


class NumericError(DiscontinuityError, ArithmeticError):
    """An operation produced NaN or Inf."""


class InstabilityError(NumericError):
    """A degenerate denominator in an expansion measurement."""


class SweepError(DiscontinuityError):
    """Too many samples discarded at one step size."""

    def __init__(self, eta, discarded, total, noise_seed=None):
        self.eta = eta
        self.discarded = discarded
        self.total = total
        self.noise_seed = noise_seed
        where = f"eta={eta!r}" if noise_seed is None else f"eta={eta!r}, noise seed {noise_seed}"
        qualifier = "more than half" if noise_seed is None else "every sample"
        super().__init__(f"{discarded}/{total} samples discarded at {where} ({qualifier})")


class FormatError(DiscontinuityError, ValueError):
    """Malformed binary file (bad magic, bad header)."""


class LengthError(FormatError):
    """File is truncated or its size is not a whole number of records."""


class ChecksumError(FormatError):
    """Stored checksum does not match the payload."""


class UnsupportedVersionError(FormatError):
    """File format version this build cannot read."""


class ConsistencyError(DiscontinuityError, ValueError):
    """Counts or sizes that disagree between related inputs."""


class ConfigError(DiscontinuityError, ValueError):
    """Invalid experiment configuration."""


class UsageError(DiscontinuityError, ValueError):
    """Malformed command line."""
