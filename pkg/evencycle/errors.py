"""Exception hierarchy for evencycle."""


class EvenCycleError(Exception):
    pass


class GraphError(EvenCycleError, ValueError):
    """Malformed graph or edge-list input."""


class CapExceeded(EvenCycleError):
    """A combinatorial guard refused the input."""


class PreconditionError(EvenCycleError, ValueError):
    """The stated hypothesis of an operation does not hold."""


class DecodeError(EvenCycleError, ValueError):
    """Word stream does not follow the path framing."""


class SimulationFault(EvenCycleError, RuntimeError):
    """The node program broke a model constraint; the run is aborted."""


class DoubleBroadcast(SimulationFault):
    pass


class BandwidthExceeded(SimulationFault):
    pass


class CongestionViolation(SimulationFault):
    """Per-origin family size, word cost or phase budget exceeded."""


class VerdictTimeout(EvenCycleError):
    """Undecided nodes remain, so no global verdict exists."""


class InvariantViolation(EvenCycleError, AssertionError):
    """A fact the construction guarantees did not hold. Always a bug."""


def check(condition, message):
    """Raise InvariantViolation unless condition holds. Survives python -O."""
    if not condition:
        raise InvariantViolation(message)
