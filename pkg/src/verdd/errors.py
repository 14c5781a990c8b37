"""Exception hierarchy shared across the package.

Every error carries a stable ``code`` (used verbatim in API error bodies)
and an optional ``locus`` describing where in the input the problem sits
(line number, row, element path).
"""

from __future__ import annotations


class VerddError(Exception):
    code = "error"

    def __init__(self, message: str, locus: str | None = None):
        super().__init__(message)
        self.message = message
        self.locus = locus


class ValidationError(VerddError):
    code = "validation"


class NotFoundError(VerddError):
    code = "not_found"


class ConflictError(VerddError):
    code = "conflict"


class QueryError(VerddError):
    code = "bad_query"


class AuthError(VerddError):
    code = "unauthorized"


class ParseError(VerddError):
    """Malformed input file (transducer, XML, CSV, checklist)."""

    code = "parse"

    def __init__(self, message: str, line: int | None = None, locus: str | None = None):
        if locus is None and line is not None:
            locus = f"line {line}"
        super().__init__(message, locus=locus)
        self.line = line


class TokenizeError(VerddError):
    """Input string cannot be segmented into transducer symbols."""

    code = "tokenize"

    def __init__(self, message: str, offset: int):
        super().__init__(message, locus=f"offset {offset}")
        self.offset = offset


class CycleLimitError(VerddError):
    """Transducer traversal exceeded the epsilon-cycle depth bound."""

    code = "cycle_limit"
