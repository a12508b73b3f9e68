"""Exception types raised across the package."""


class InvalidStop(ValueError):
    """A sequence is not one the design could have terminated with."""


class SequenceTooShort(ValueError):
    """A sequence ends before the design's stopping condition is met."""


class DegenerateScenario(ValueError):
    """A well-formed scenario for which the requested quantity is undefined."""


class BoundaryUnreachable(DegenerateScenario):
    """A boundary or cutoff cannot be attained within the available steps."""


# Both names are in use by callers; they refer to the same condition.
UnreachableBoundary = BoundaryUnreachable


class HorizonTooLarge(ValueError):
    """Exhaustive enumeration was requested beyond its supported horizon."""
