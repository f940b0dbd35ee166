"""Exception hierarchy shared by all modules."""


class U11Error(Exception):
    """Base class; the CLI maps every subclass to exit code 3."""


class DomainError(U11Error, ValueError):
    """Input outside the documented range, or a failed precondition."""


class UnitError(U11Error, ArithmeticError):
    """Inverse requested for a non-unit."""


class RingMismatchError(U11Error, TypeError):
    """Operands live over different coefficient rings."""


class CapacityError(U11Error):
    """An enumeration would exceed its configured size bound."""


class NotGaugeError(DomainError):
    """Matrix matches none of the three gauge patterns."""


class HeightError(DomainError):
    """Determinant is not a unit multiple of (v + p)."""


class SolvabilityError(DomainError):
    """The ring has no points of the requested shape (e.g. shape w over Z/p^2)."""
