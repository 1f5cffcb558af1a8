import sys
from typing import Optional, TextIO
from .config import ERROR_MESSAGES
from .logging_handler import StructuredLogger

logger = StructuredLogger(__name__)


class StabLabError(Exception):
    """Base class for domain errors; carries its exit code and message kind."""
    kind = "general"
    exit_code = 1

    def __init__(self, **details):
        self.details = details
        template = ERROR_MESSAGES.get(self.kind, ERROR_MESSAGES["general"])
        try:
            message = template.format(**details)
        except (KeyError, IndexError, ValueError):
            message = template
        super().__init__(message)


class InvalidQuiverError(StabLabError):
    kind = "invalid_quiver"


class UnknownVertexError(StabLabError):
    kind = "unknown_vertex"


class UnknownArrowError(StabLabError):
    kind = "unknown_arrow"


class NonReducibleError(StabLabError):
    kind = "non_reducible"


class GinzburgPreconditionError(StabLabError):
    kind = "ginzburg_precondition"


class InvalidRepresentationError(StabLabError):
    kind = "invalid_representation"


class EnumerationBoundError(StabLabError):
    kind = "enumeration_bound"


class InvalidCentralChargeError(StabLabError):
    kind = "invalid_central_charge"


class ZeroClassError(StabLabError):
    kind = "zero_class"


class ProportionalClassesError(StabLabError):
    kind = "proportional_classes"


class InvalidHeartError(StabLabError):
    kind = "invalid_heart"


class InvalidTriangulationError(StabLabError):
    kind = "invalid_triangulation"


class OutOfRangeError(StabLabError):
    kind = "out_of_range"


class DegenerateDifferentialError(StabLabError):
    kind = "degenerate_differential"


class CollinearZeroError(StabLabError):
    kind = "collinear_zero"


class QuadratureError(StabLabError):
    kind = "quadrature"


class HNUniquenessError(StabLabError):
    kind = "hn_uniqueness"


class FormatError(StabLabError):
    kind = "format"


class UsageError(StabLabError):
    kind = "usage"
    exit_code = 2


class ErrorHandler:
    @staticmethod
    def handle_error(error: Exception, stream: Optional[TextIO] = None) -> int:
        """
        Report an error as a single diagnostic line and return the exit code.

        Never raises: unexpected exceptions are reported with the generic
        message and exit code 1.
        """
        stream = stream or sys.stderr
        if isinstance(error, StabLabError):
            kind, exit_code, message = error.kind, error.exit_code, str(error)
        else:
            kind, exit_code = "general", 1
            message = f"{ERROR_MESSAGES['general']} ({type(error).__name__}: {error})"
        try:
            logger.error("Run failed", error=error, kind=kind, exit_code=exit_code)
        except Exception:
            pass
        print(f"error: {kind}: {' '.join(message.split())}", file=stream)
        return exit_code

    @staticmethod
    def handle_usage_error(detail: str, stream: Optional[TextIO] = None) -> int:
        """Report an invocation argparse rejected; the caller exits with the returned code"""
        return ErrorHandler.handle_error(UsageError(detail=detail), stream)
