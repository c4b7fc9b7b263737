"""Exception types shared across the package."""


class RelCurrError(Exception):
    """Base class for all errors raised by relcurr."""


class InputError(RelCurrError, ValueError):
    """Malformed or out-of-contract input (bad letters, trivial subgroup, ...)."""


class MalnormalityError(RelCurrError):
    """The subgroup system is not malnormal.

    ``witness`` is a nontrivial word lying in an intersection that malnormality
    requires to be trivial.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ZeroCurrentError(RelCurrError):
    """A current vanishes where a nonzero one is required."""


class NotStabilizingError(RelCurrError):
    """An automorphism does not preserve the subgroup system."""


class InvariantError(RelCurrError, AssertionError):
    """An internal invariant that the mathematics guarantees has failed."""
