"""Contains SMLAB exceptions."""


class SmlabError(Exception):
    """Base class of all laboratory errors."""


class ParameterError(SmlabError, ValueError):
    """Parameter outside of its admissible range."""


class ConfigurationError(ParameterError):
    """Invalid or incomplete experiment configuration."""


class DomainError(ParameterError):
    """Multiplier evaluated outside of (0, inf)."""


class TailTruncation(SmlabError, ValueError):
    """Grid function does not decay at the grid ends."""


class GridCoverage(SmlabError, ValueError):
    """Requested windows are not covered by the grid or the partition."""


class PartitionConstruction(SmlabError, ValueError):
    """Window does not produce a partition of unity."""


class SpectrumError(SmlabError, ValueError):
    """Spectrum of a model leaves (0, inf)."""


class CertificateError(SmlabError, ArithmeticError):
    """Resolvent is singular on the sampled sector boundary."""


class UnsupportedStructure(SmlabError, TypeError):
    """Operation is not available for the structure of the model."""


class SmoothnessError(SmlabError, ArithmeticError):
    """Multiplier is not smooth enough at the eigenvalue of a Jordan model."""


class PreconditionError(SmlabError, ValueError):
    """Multiplier does not satisfy the assumptions of a calculus engine."""


class QuadratureError(SmlabError, ArithmeticError):
    """Estimated quadrature error is above the tolerance."""
