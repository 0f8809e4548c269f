"""Exception hierarchy shared across the package.

Two failure families matter to callers: bad input data (wrong shapes,
violated invariants, insufficient caps) and broken mathematical
identities (residuals that the construction guarantees to vanish).
The command-line driver maps them to exit codes 2 and 1 respectively.
"""


class StarquantError(Exception):
    """Base class for all package errors."""


class InputError(StarquantError):
    """Invalid or inconsistent input data, including cap budget violations."""


class VerificationError(StarquantError):
    """A mathematical identity that must hold exactly failed to hold."""
