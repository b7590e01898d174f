"""Exception types raised across the package."""


class CentextError(Exception):
    """Base class for all package errors."""


class InvalidInputError(CentextError, ValueError):
    """An argument violates an operation's precondition."""


class GroupMismatchError(InvalidInputError):
    """Two values live over different groups."""


class StructuralError(InvalidInputError):
    """A table or file is malformed (missing entries, wrong shape)."""


class CapacityError(CentextError):
    """The requested computation exceeds a configured size bound."""


class VerificationError(CentextError):
    """An internal consistency check failed; indicates a bug or a false claim."""
