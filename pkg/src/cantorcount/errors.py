"""Shared exception types, mapped to CLI exit codes."""


class DomainError(ValueError):
    """Input outside an operation's domain (exit code 2)."""


class BudgetError(RuntimeError):
    """An enumeration or factorization budget was exceeded (exit code 3)."""


class CoverageError(RuntimeError):
    """A count was requested over denominators missing from the record set."""


class IntegrityError(RuntimeError):
    """Conflicting or corrupt persisted records (exit code 4)."""
