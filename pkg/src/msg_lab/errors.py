"""Shared exception types.

Budget violations and construction-bound violations are distinct from
ordinary ValueError so callers (and the CLI) can surface them per-row
instead of aborting a whole run.
"""


class MsgLabError(Exception):
    """Base class for library-specific failures."""


class BudgetError(MsgLabError):
    """An enumeration or search would exceed its declared budget."""


class UnsupportedCaseError(MsgLabError):
    """Input is valid mathematics but outside the supported regime."""


class BoundViolationError(MsgLabError):
    """A constructed object violated a guaranteed rank bound.

    Carries a `payload` dict with enough data to reproduce the instance.
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = dict(payload or {})
