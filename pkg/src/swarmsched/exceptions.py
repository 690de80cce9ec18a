"""Exception types raised by swarmsched."""


class SwarmSchedError(Exception):
    """Base class for all package errors."""


class InvalidWorkload(SwarmSchedError, ValueError):
    """Raised when a workload has no tasks or no VMs."""


class TimeoutExceeded(SwarmSchedError):
    """Raised when an evaluation batch runs past the configured wall-clock limit.

    ``partial`` carries the result accumulated before the abort; it is
    always flagged ``valid=False``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class EmptyTrace(SwarmSchedError, ValueError):
    """Raised when a workload trace yields no usable records."""


class UnsupportedKind(SwarmSchedError, ValueError):
    """Raised for algorithm names that are not implemented."""


class InstanceTooLarge(SwarmSchedError, ValueError):
    """Raised when exhaustive enumeration would exceed the size guard."""


class InvalidReference(SwarmSchedError, ValueError):
    """Raised when a hypervolume reference point does not bound the front."""
