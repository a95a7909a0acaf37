"""Exception types raised by the library.

Every validator failure carries a stable ``code`` (used by the CLI and in
JSON output) and a human readable ``clause`` naming the violated condition.
"""

from __future__ import annotations


class EllimodError(Exception):
    """Base class for all library errors."""

    code = "error"

    def __init__(self, message: str, code: str | None = None, clause: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.clause = clause or message

    def as_dict(self) -> dict:
        return {"code": self.code, "message": str(self), "clause": self.clause}


class InvalidRootSystem(EllimodError):
    code = "invalid_root_system"


class NotSimplyLaced(EllimodError):
    code = "not_simply_laced"


class NotClosed(EllimodError):
    code = "subset_not_closed"


class SystemMismatch(EllimodError):
    code = "system_mismatch"


class RootNotInSystem(EllimodError):
    code = "root_not_in_system"


class ParseError(EllimodError):
    code = "parse_error"


class ValidationError(EllimodError):
    """A bundle decomposition does not have the required shape."""

    code = "validation_error"


class DegreeZeroError(EllimodError):
    code = "degree_zero"


class ExcludedType(EllimodError):
    code = "excluded_type"


class OrbitBoundExceeded(EllimodError):
    code = "orbit_bound_exceeded"
