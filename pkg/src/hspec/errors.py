"""Exception hierarchy shared by all hspec modules.

Numerical failures (singular scalars, contour violations, divergence) are
kept distinct from usage/format problems so the command line driver can map
them onto stable exit codes.
"""


class HspecError(Exception):
    """Base class for all package errors."""


class FormatError(HspecError):
    """Malformed input document or value outside the serialization schema."""


class DimensionMismatchError(HspecError):
    """Operands whose shapes cannot be combined."""


class SingularScalarError(HspecError):
    """Inversion of the zero quaternion."""


class DomainError(HspecError):
    """Function evaluated outside its domain (e.g. log of 0, or a branch
    point with no branch unit supplied)."""


class SpectrumMembershipError(HspecError):
    """A resolvent was requested at a point of the spectrum.

    Carries the reciprocal condition estimate that triggered the rejection.
    """

    def __init__(self, message, rcond=None):
        super().__init__(message)
        self.rcond = rcond


class DivergenceError(HspecError):
    """A series iteration was started outside its guaranteed contraction
    region."""


class ContourError(HspecError):
    """Contour geometry violates an enclosure or conditioning requirement."""


class PreconditionError(HspecError):
    """An operator-level precondition failed (non-self-adjoint input,
    negative spectrum for a square root, non-triangular input, ...)."""


class MethodError(HspecError):
    """Requested spectrum method is not applicable to the given matrix."""


class EmptySpectralSetError(HspecError):
    """No spectrum where some was required (inside a disc, or at all)."""


class InconclusiveError(HspecError):
    """An order search exhausted its budget without an answer."""


class StoneViolationError(HspecError):
    """Generator recovered from a unitary group is not self-adjoint within
    tolerance."""


class InvariantViolationError(HspecError):
    """Two routes that must agree disagreed beyond tolerance."""
