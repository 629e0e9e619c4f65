"""Exception hierarchy shared by all netcode modules."""


class NetcodeError(Exception):
    """Base class for every error raised by this package."""


class FieldError(NetcodeError):
    """Invalid field parameters (non-prime characteristic, size overflow)."""


class FieldMismatchError(FieldError):
    """Arithmetic attempted between elements of different fields."""


class PoleError(NetcodeError):
    """A rational function was evaluated at a root of its denominator."""


class NetworkError(NetcodeError):
    """Malformed network description."""


class CycleError(NetworkError):
    """The network graph contains a directed cycle."""


class MincutError(NetcodeError):
    """Some sink has fewer edge-disjoint paths than required."""

    def __init__(self, sinks, required):
        self.sinks = tuple(sinks)
        self.required = required
        super().__init__(f"mincut below {required} at sinks {list(self.sinks)}")


class NodeDisjointnessError(NetcodeError):
    """No node-disjoint flow decomposition exists for some sink."""

    def __init__(self, sinks, required):
        self.sinks = tuple(sinks)
        self.required = required
        super().__init__(f"fewer than {required} node-disjoint paths to sinks {list(self.sinks)}")


class FieldTooSmallError(NetcodeError):
    """The coefficient field is too small for the requested construction step."""


class CodeError(NetcodeError):
    """A network code violates its mode discipline or adjacency structure."""


class InfeasibleCodeError(NetcodeError):
    """A code expected to be feasible failed verification."""


class SearchCapExceeded(NetcodeError):
    """Exhaustive search space larger than the configured cap."""

    def __init__(self, size, cap):
        self.size = size
        self.cap = cap
        super().__init__(f"search space {size} exceeds cap {cap}")


class HorizonTooShortError(NetcodeError):
    """Simulation horizon too short for a meaningful decode check."""

    def __init__(self, horizon, required):
        self.horizon = horizon
        self.required = required
        super().__init__(f"horizon {horizon} too short, need at least {required}")
