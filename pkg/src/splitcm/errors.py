"""Exception hierarchy shared by every module.

Exit-code mapping used by the CLI:
  2 -> bad input or unsupported request (InputError, SplitError, UnsupportedError)
  3 -> resource exhaustion (ResourceError, IncompleteClassListError)
  4 -> internal inconsistency (InternalError, ConventionError)
"""


class SplitCMError(Exception):
    """Base class for all package errors."""


class InputError(SplitCMError):
    """Invalid argument: bad discriminant, non-primitive form, zero element, ..."""


class SplitError(InputError):
    """The level N does not split in the target field."""


class UnsupportedError(SplitCMError):
    """Requested computation is outside the supported range (e.g. h(D) > 1)."""


class ResourceError(SplitCMError):
    """A truncation or enumeration budget was exceeded; message reports the need."""


class InternalError(SplitCMError):
    """An internal cross-check failed; indicates a bug, not bad input."""


class ConventionError(InternalError):
    """Two convention-sensitive computation paths disagreed beyond tolerance."""


class IncompleteClassListError(ResourceError):
    """Class discovery stopped before the mass formula was exhausted."""
