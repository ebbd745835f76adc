"""Exception hierarchy shared by all frameflow modules.

Every error raised by the library derives from :class:`FrameflowError`, so
callers (and the command line front end) can map failures to distinct exit
codes without string matching.
"""

from __future__ import annotations

__all__ = [
    "FrameflowError",
    "InvalidSpecError",
    "DegenerateGraphError",
    "FileParseError",
    "NotSymmetricError",
    "NoConvergenceError",
    "DimensionMismatchError",
    "OutOfRangeError",
    "VariantNotTightError",
    "BandMismatchError",
    "NumericOverflowError",
    "IllegalRenormalizeError",
    "ZeroStateError",
    "TraceNotNormalizedError",
    "ConfigError",
]


class FrameflowError(Exception):
    """Base class for all frameflow errors."""


class InvalidSpecError(FrameflowError):
    """A graph specification has inconsistent sizes, probabilities, or kind."""


class DegenerateGraphError(FrameflowError):
    """A graph has (or a random draw could not avoid) a degree-0 node."""


class FileParseError(FrameflowError):
    """An edge-list or signal file is malformed."""


class NotSymmetricError(FrameflowError):
    """A matrix that must be symmetric is not (beyond tolerance)."""


class NoConvergenceError(FrameflowError):
    """The eigensolver did not converge within its sweep budget."""


class DimensionMismatchError(FrameflowError):
    """Operands have incompatible shapes."""


class OutOfRangeError(FrameflowError):
    """A scalar argument lies outside its admissible interval."""


class VariantNotTightError(FrameflowError):
    """An identity that requires a tight filter bank was requested on a non-tight one."""


class BandMismatchError(FrameflowError):
    """Coefficient bands do not match the transform system's index set."""


class NumericOverflowError(FrameflowError):
    """A flow state grew beyond the overflow guard without renormalization."""


class IllegalRenormalizeError(FrameflowError):
    """Per-step renormalization requested for a non-homogeneous scheme."""


class ZeroStateError(FrameflowError):
    """An operation on the normalized state received an all-zero state."""


class TraceNotNormalizedError(FrameflowError):
    """Dominance classification requires a renormalized trace."""


class ConfigError(FrameflowError):
    """An experiment configuration is malformed or inconsistent."""
