"""Exception types shared across the package.

The CLI maps these to exit codes: invalid input 2, cap exceeded 3,
invariant breach 4.
"""


class FactorComplexError(Exception):
    """Base class for all package errors."""


class CapExceeded(FactorComplexError):
    """A requested computation is larger than the configured desk-scale caps."""


class InvariantError(FactorComplexError):
    """An internal consistency check failed.

    ``witness`` carries a JSON-serialisable description of the failing object.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
