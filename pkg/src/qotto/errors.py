"""Exception types shared across the package.

The split mirrors how failures should be handled: bad inputs are the
caller's problem (``ParameterError``), physically degenerate
configurations are recoverable in sweeps (``DegeneracyError``), and
numerical failures mean a result cannot be trusted (``NumericsError``).
"""


class EngineError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(EngineError, ValueError):
    """Invalid argument: out of range, wrong domain, or misuse."""


class DegeneracyError(EngineError, ValueError):
    """Degenerate configuration: level crossing, equal populations,
    or a vanishing denominator in a closed form."""


class NumericsError(EngineError, RuntimeError):
    """Numerical failure: unitarity loss, convergence failure, or a
    broken internal invariant."""
