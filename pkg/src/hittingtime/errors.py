"""Exception types raised across the package."""


class HittingTimeError(Exception):
    """Base class for all package errors."""


class GraphError(HittingTimeError):
    pass


class MalformedLine(GraphError):
    def __init__(self, lineno, text=""):
        self.lineno = lineno
        super().__init__(f"malformed edge-list line {lineno}: {text!r}")


class SelfLoop(GraphError):
    def __init__(self, u):
        self.u = u
        super().__init__(f"self-loop on node {u}")


class DuplicateEdge(GraphError):
    def __init__(self, u, v):
        self.u, self.v = u, v
        super().__init__(f"duplicate edge ({u}, {v})")


class NonPositiveWeight(GraphError):
    def __init__(self, u, v, w):
        self.u, self.v, self.w = u, v, w
        super().__init__(f"edge ({u}, {v}) has non-positive weight {w!r}")


class InvalidDegree(GraphError):
    pass


class DisconnectedAfterRetries(GraphError):
    def __init__(self, attempts, last_seed):
        self.attempts = attempts
        self.last_seed = last_seed
        super().__init__(
            f"no connected sample after {attempts} attempts (last seed {last_seed})"
        )


class GraphNotConnected(HittingTimeError):
    pass


class TargetOutOfRange(HittingTimeError):
    pass


class EmptyReduction(HittingTimeError):
    """Every non-target node is adherent to the target.

    Not a failure of the input: the hitting time from each adherent is
    exactly one step.
    """

    def __init__(self, target, adherents=()):
        self.target = target
        self.adherents = tuple(adherents)
        super().__init__(
            f"all non-target nodes are adherent to target {target}"
        )


class UnsupportedOrder(HittingTimeError):
    pass


class TargetInSources(HittingTimeError):
    pass


class TooFewNodes(HittingTimeError):
    pass
