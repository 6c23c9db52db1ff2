"""Exception types shared across the package.

Each class carries the process exit code the command-line client uses
when the error surfaces there.
"""


class SharingError(Exception):
    """Base class for every error this package raises on purpose."""

    exit_code = 1


class ParameterError(SharingError):
    """Arguments outside an operation's domain (bad sizes, mixed fields)."""

    exit_code = 2


class FormatError(SharingError):
    """A byte stream does not decode as a valid share file."""

    exit_code = 3


class CapacityError(SharingError):
    """The request exceeds what the chosen parameters can support."""

    exit_code = 4


class VerificationError(SharingError):
    """An internal cross-check disagreed; the result cannot be trusted."""

    exit_code = 5
