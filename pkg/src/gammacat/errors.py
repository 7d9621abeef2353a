"""Exception types raised by the validators and solvers.

Every validation error carries the first failing witness (lexicographic order
over element indices) in ``witness``.
"""


class GammacatError(Exception):
    """Base class for all library errors."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness


class ValidationError(GammacatError, ValueError):
    """Input fails an algebraic law."""


class ShapeError(ValidationError):
    """A table has the wrong dimensions or non-integer entries."""


class NotClosed(ValidationError):
    pass


class NoIdentity(ValidationError):
    pass


class NoInverse(ValidationError):
    pass


class NotAssociative(ValidationError):
    pass


class NotBijective(ValidationError):
    pass


class NotHomomorphic(ValidationError):
    pass


class NotAnAction(ValidationError):
    pass


class IdentityActsNontrivially(ValidationError):
    pass


class NotEquivariant(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class NotACocycle(ValidationError):
    pass


class XiMismatch(ValidationError):
    pass


class NotEnoughStrict(ValidationError):
    pass


class ObjectMismatch(ValidationError):
    pass


class NotComposable(ValidationError):
    pass


class GradeMismatch(ValidationError):
    pass


class DegreeMismatch(ValidationError):
    pass


class ModuleMismatch(ValidationError):
    pass


class NotCoboundaryRelated(ValidationError):
    pass


class CapExceeded(GammacatError):
    """An enumeration would visit more candidates than the configured cap."""


class SNFOverflow(GammacatError, ArithmeticError):
    """An entry grew past the configured bound during integer elimination."""
