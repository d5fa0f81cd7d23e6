"""Exception hierarchy.

Three families map onto the CLI exit codes: :class:`ParseError` (2),
:class:`ValidationError` (3) and :class:`ComputationError` (4).
"""


class SpeedLimitError(Exception):
    """Base class for every error raised by orthotime."""


class ParseError(SpeedLimitError):
    """A state file could not be read or does not follow the schema."""


class ValidationError(SpeedLimitError, ValueError):
    """Input data breaks a type invariant."""


class ZeroNorm(ValidationError):
    pass


class NonPositiveDispersion(ValidationError):
    pass


class ComputationError(SpeedLimitError, ArithmeticError):
    """A well-formed request that the requested computation cannot serve."""


class ZeroDispersion(ComputationError):
    """All probability sits on a single energy, so the state never orthogonalizes."""


class DegenerateSpectrum(ComputationError):
    pass


class MissingLowerBound(ComputationError):
    pass


class MinorantViolation(ComputationError):
    pass


class TailUncertifiable(ComputationError):
    pass


class SlackViolation(ComputationError):
    pass


class DomainMismatch(ComputationError):
    pass
