"""Exceptions raised by strata-lab."""
from typing import Optional
from lib.types import CONTEXT_TYPE, ErrorDocType


class StrataLabError(RuntimeError):
    """Base class for errors that carry a machine-readable code."""

    def __init__(self, code: str, message: str, context: Optional[CONTEXT_TYPE] = None) -> None:
        """
        :param code: A dotted code naming the module and the failure, e.g. `surface.self_paired`.
        :param message: A human-readable explanation.
        :param context: Extra data that locates the failure.
        """
        super().__init__(message)
        self.code = code
        self.message = message
        self.context: CONTEXT_TYPE = context or {}

    def to_document(self) -> ErrorDocType:
        """Convert the error to the JSON document printed by the command line."""
        return {"code": self.code, "message": self.message, "context": self.context}


class InputError(StrataLabError):
    """The caller supplied something the operation cannot accept."""

    pass


class SurfaceFormatError(InputError):
    """A surface document does not follow the schema."""

    pass


class InvalidSurfaceError(InputError):
    """A surface breaks one of its geometric invariants."""

    pass


class PreconditionError(InputError):
    """An operation was called outside of its domain."""

    pass


class NumericalError(StrataLabError):
    """A numerical method did not reach its tolerance."""

    pass
