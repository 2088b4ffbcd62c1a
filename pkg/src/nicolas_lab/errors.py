"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: domain errors are usage errors (2),
range/resource/precision errors are resource errors (3).
"""


class NicolasLabError(Exception):
    """Base class for all errors raised by nicolas_lab."""


class DomainError(NicolasLabError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class RangeError(NicolasLabError, IndexError):
    """Argument beyond the range covered by the sieve or a prime list."""


class ResourceError(NicolasLabError):
    """Requested work exceeds a configured hard cap."""


class PrecisionError(NicolasLabError, ValueError):
    """A certified radius would be too large to be useful."""


class CacheFormatError(NicolasLabError):
    """Prime cache file is malformed."""
