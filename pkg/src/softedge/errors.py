"""Exception hierarchy.

Validation errors (bad inputs, malformed files, broken invariants) derive
from :class:`ValidationError`; genuine I/O failures wrap the OS error in
:class:`IoFailure`. The CLI maps these onto exit codes 2 and 1.
"""


class SoftEdgeError(Exception):
    """Base class for all library errors."""


class ValidationError(SoftEdgeError):
    """Invalid input data, configuration, or file contents."""


class IoFailure(SoftEdgeError):
    """An underlying OS-level read/write failure."""


# file formats
class BadMagic(ValidationError):
    pass


class VersionMismatch(ValidationError):
    pass


class TruncatedPayload(ValidationError):
    pass


class InvalidConfig(ValidationError):
    pass


# tensor contents
class NonFiniteValue(ValidationError):
    """A NaN or infinity where a finite value is required; carries the index."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NonFiniteInput(NonFiniteValue):
    pass


class EmptyTensor(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


# calibration
class PercentileOutOfRange(ValidationError):
    pass


class DegenerateRange(ValidationError):
    pass


# codec
class NonCanonicalCode(ValidationError):
    pass


# metrics
class ZeroSignal(ValidationError):
    pass


# synth / ssm
class InvalidSpec(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass
