"""Exception hierarchy shared by all dgonlab modules."""

from __future__ import annotations

from typing import Any


class DgonlabError(Exception):
    """Base class; carries a machine-readable context dict."""

    code = "error"

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.context = context

    def to_json(self) -> dict:
        return {
            "code": self.code,
            "message": str(self),
            "context": {k: repr(v) for k, v in sorted(self.context.items())},
        }


class SurfaceError(DgonlabError):
    code = "surface"


class ParseError(SurfaceError):
    code = "parse"


class AlgebraError(DgonlabError):
    code = "algebra"


class MutationError(DgonlabError):
    code = "mutation"


class ReductionError(DgonlabError):
    code = "reduction"


class CapExceeded(DgonlabError):
    code = "cap-exceeded"
