"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """An enumeration hit its element budget.

    Carries the number of elements found before the cap, and optionally the
    partial result object, so callers can report instead of silently truncate.
    """

    def __init__(self, message, partial_count=None, partial=None):
        super().__init__(message)
        self.partial_count = partial_count
        self.partial = partial
