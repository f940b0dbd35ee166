"""Mod-p Langlands combinatorics for U(1,1)(Q_{p^2}/Q_p)."""
from .errors import (
    CapacityError, DomainError, HeightError, NotGaugeError, RingMismatchError,
    SolvabilityError, U11Error, UnitError,
)

__version__ = "0.1.0"
