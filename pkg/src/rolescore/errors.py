"""Shared exception bases so the CLI and service can map failures to codes."""


class RoleScoreError(Exception):
    """Base class for all errors raised by this package."""


class ValidationFailure(RoleScoreError):
    """Invalid input: bad file, bad schema, bad profile, bad request."""


class DegenerateInput(RoleScoreError):
    """Structurally valid input that cannot be analyzed (empty cohort, nothing scoreable)."""
