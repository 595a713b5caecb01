"""Exception types shared across the package."""


class FrankError(Exception):
    """Base class for all errors raised by franknum."""


class GraphFormatError(FrankError, ValueError):
    """Malformed graph6 input; ``offset`` is the byte position of the problem."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at byte {offset})"
        super().__init__(message)
        self.offset = offset


class PreconditionViolated(FrankError, ValueError):
    pass


class NotCubic(PreconditionViolated):
    pass


class NotSnark(PreconditionViolated):
    pass


class NotPerfectMatching(PreconditionViolated):
    pass


class DegreeTooSmall(PreconditionViolated):
    pass


class AdjacentEdges(PreconditionViolated):
    pass


class NotCircuitDecomposition(PreconditionViolated):
    pass


class SuppressionCreatesLoop(FrankError):
    pass


class SuppressionCreatesParallel(FrankError):
    pass


class NotStrong(FrankError, ValueError):
    pass


class ZeroEdge(FrankError, ValueError):
    pass


class CancellationToZero(FrankError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} sums to zero in the combination")
        self.edge = edge


class ValueNotTwo(FrankError, ValueError):
    pass


class InternalContradiction(FrankError, AssertionError):
    pass


class LiftContradiction(InternalContradiction):
    pass


class BudgetExceeded(FrankError):
    def __init__(self, message, nodes=0):
        super().__init__(message)
        self.nodes = nodes


class CapExceeded(FrankError, ValueError):
    pass
