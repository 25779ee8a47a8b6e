"""
Exception hierarchy for the FCA engine
"""

from typing import Optional


class FcaError(Exception):
    """Base class for every error raised by the engine"""


class ContextFormatError(FcaError, ValueError):
    """A context file (.cxt or binary CSV) could not be parsed"""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        row: Optional[str] = None,
        column: Optional[str] = None
    ):
        self.line = line
        self.row = row
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if row is not None:
            where.append(f"row {row!r}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class DimensionError(FcaError, ValueError):
    """Set dimension does not match the context (or the other operand)"""


class ContextMismatchError(FcaError, ValueError):
    """Concepts from different contexts were combined"""


class EmptyContextError(FcaError, ValueError):
    """Operation needs at least one object"""


class CapacityError(FcaError, RuntimeError):
    """Enumeration exceeded its configured limit"""

    def __init__(self, message: str, found: int = 0):
        self.message = message
        self.found = found
        super().__init__(f"{message} (found {found} so far)")

    def __reduce__(self):
        # raised inside pool workers and re-raised in the parent
        return (type(self), (self.message, self.found))


class SchemaError(FcaError, ValueError):
    """Trait table, role config or binarization schema problem"""

    def __init__(self, message: str, column: Optional[str] = None):
        self.column = column
        prefix = f"column {column!r}: " if column is not None else ""
        super().__init__(f"{prefix}{message}")


class EmptyClassError(FcaError, ValueError):
    """A labeled dataset has no objects in one of the classes"""


class AttributeMismatchError(FcaError, ValueError):
    """Two concept lists were mined over different attribute sets"""


class SupportRangeError(FcaError, ValueError):
    """Support threshold outside [0, 100]"""


class PipelineError(FcaError):
    """A contrast pipeline stage failed"""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {cause}")


class LatticeError(FcaError, ValueError):
    """Concept set cannot form the requested order structure"""
