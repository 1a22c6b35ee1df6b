"""Exception types shared across the package."""

from __future__ import annotations


class DataprioError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(DataprioError):
    """Input bytes are not syntactically valid (e.g. broken JSON)."""


class SchemaError(DataprioError):
    """Input parsed, but its shape does not match the document schema."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")


class InvariantError(DataprioError):
    """A document or judgment violates a domain invariant.

    Carries the full list of violations so callers can surface every
    problem at once instead of failing on the first.
    """

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = "; ".join(f"{v.location}: {v.message}" for v in self.violations)
        super().__init__(lines or "invariant violation")


class IncompleteScenarioError(DataprioError):
    """A scenario is missing judgments needed to compute a result."""

    def __init__(self, missing_groups=(), missing_supports=()):
        self.missing_groups = tuple(missing_groups)
        self.missing_supports = tuple(missing_supports)
        parts = []
        if self.missing_groups:
            parts.append(f"groups without judgments: {', '.join(self.missing_groups)}")
        if self.missing_supports:
            parts.append(
                f"decisions without support judgments: {', '.join(self.missing_supports)}"
            )
        super().__init__("; ".join(parts) or "incomplete scenario")
