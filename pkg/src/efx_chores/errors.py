"""Exception hierarchy shared by all modules."""


class EfxError(Exception):
    """Base class for every error raised by this package."""


class InputError(EfxError, ValueError):
    """Malformed instance/allocation data or out-of-range ids."""


class PreconditionError(EfxError, ValueError):
    """A solver or graph operation was called outside its contract."""


class InvariantViolation(EfxError, RuntimeError):
    """An internal guarantee failed. Always a bug, never a valid outcome."""


class CapExceeded(EfxError):
    """Brute-force enumeration refused because n**m is above the cap."""
