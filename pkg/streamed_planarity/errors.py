"""Exception types raised by the streamed planarity engine.

Every domain failure derives from ``ValueError`` so that callers which only
know the stdlib contract keep working.
"""

from __future__ import annotations


class StreamedPlanarityError(ValueError):
    """Base class for all domain errors."""


class BudgetExceeded(StreamedPlanarityError):
    """Raised when an exhaustive enumeration would exceed its budget."""

    def __init__(self, required: int, budget: int) -> None:
        super().__init__(f"Enumeration needs {required} candidates, budget is {budget}.")
        self.required = required
        self.budget = budget


class EdgeNotFound(StreamedPlanarityError):
    """Raised when an operation names an edge that is not in the graph."""


class DisconnectedUnion(StreamedPlanarityError):
    """Raised when an operation requires a connected union graph."""


class UnsupportedOmega(StreamedPlanarityError):
    """Raised when an operation is only defined for a specific window size."""


class WrongCategory(StreamedPlanarityError):
    """Raised when an instance does not belong to the required category."""


class WrongShape(StreamedPlanarityError):
    """Raised when an instance does not have the shape a split requires."""


class MalformedCertificate(StreamedPlanarityError):
    """Raised when a certificate does not fit the instance it is checked against."""


class FaceIdOutOfRange(StreamedPlanarityError):
    """Raised when a certificate references a face id that does not exist."""


class ShapeViolation(StreamedPlanarityError):
    """Raised when a SEFE instance does not fit the gadget construction."""


class UnsupportedInstance(StreamedPlanarityError):
    """Raised when no decision procedure covers the instance."""


class InstanceFormatError(StreamedPlanarityError):
    """Raised when serialized data does not match the expected schema."""
