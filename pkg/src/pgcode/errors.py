"""Exception hierarchy shared by all pgcode modules."""


class PGCodeError(Exception):
    """Base class for every error raised by pgcode."""


class PreconditionError(PGCodeError, ValueError):
    """An operation was called outside its documented domain."""


class BudgetExceeded(PreconditionError):
    """Exact enumeration would exceed the configured codeword budget."""


class TheoremViolation(PGCodeError, AssertionError):
    """A computed object contradicts a proven statement.

    This is never expected to happen; it signals either a bug or a
    counterexample and maps to CLI exit code 3.
    """
