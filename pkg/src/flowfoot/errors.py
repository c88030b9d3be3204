"""Exception hierarchy.

Every error raised by the library derives from :class:`FlowError`, so callers
that only care about "something about these graphs is wrong" can catch one
type.  Composition failures derive from :class:`CompositionUndefined`; method
capability failures derive from :class:`MethodUnsupported`.
"""

from __future__ import annotations


class FlowError(Exception):
    pass


class TagMismatch(FlowError):
    def __init__(self, left, right):
        super().__init__(f"monoid mismatch: {left} vs {right}")
        self.left = left
        self.right = right


# -- graph construction ----------------------------------------------------


class GraphError(FlowError):
    pass


class EdgeSourceOutside(GraphError):
    def __init__(self, edge):
        super().__init__(f"edge {edge} starts outside the node set")
        self.edge = edge


class InflowSourceInside(GraphError):
    def __init__(self, edge):
        super().__init__(f"inflow {edge} comes from inside the node set")
        self.edge = edge


class InflowTargetOutside(GraphError):
    def __init__(self, edge):
        super().__init__(f"inflow {edge} targets a node outside the node set")
        self.edge = edge


class NodeOutside(GraphError):
    def __init__(self, node):
        super().__init__(f"node {node} is not in the graph")
        self.node = node


class NonTermination(FlowError):
    def __init__(self, cap):
        super().__init__(f"flow iteration did not stabilize within {cap} rounds")
        self.cap = cap


# -- composition -----------------------------------------------------------


class CompositionUndefined(FlowError):
    """h1 * h2 is undefined; subclasses say which stage failed."""


class NodesOverlap(CompositionUndefined):
    def __init__(self, shared):
        super().__init__(f"node sets overlap on {sorted(shared)}")
        self.shared = frozenset(shared)


class BoundaryMismatch(CompositionUndefined):
    def __init__(self, x, y, expected, actual):
        super().__init__(
            f"boundary ({x},{y}): outflow {actual} does not match inflow {expected}"
        )
        self.x = x
        self.y = y
        self.expected = expected
        self.actual = actual


class VanishingFlow(CompositionUndefined):
    def __init__(self, node, before, after):
        super().__init__(f"flow of node {node} vanishes: {before} -> {after}")
        self.node = node
        self.before = before
        self.after = after


# -- paths -----------------------------------------------------------------


class NotAPath(FlowError):
    pass


class ExitNotBoundary(FlowError):
    def __init__(self, exit_):
        super().__init__(f"{exit_} is not a nonzero boundary edge")
        self.exit = exit_


class MethodUnsupported(FlowError):
    """The graphs lack a property an algorithm needs."""


class CyclicGraph(MethodUnsupported):
    pass


class CyclicRestriction(CyclicGraph):
    pass


class RequiresIdempotent(MethodUnsupported):
    pass


class RequiresDecreasing(MethodUnsupported):
    pass


# -- footprints and oracle -------------------------------------------------


class NodeSetMismatch(FlowError):
    pass


class NoFootprintByDefinition(FlowError):
    pass


class OracleInfeasible(FlowError):
    pass


# -- harness ---------------------------------------------------------------


class ParseError(FlowError):
    def __init__(self, reason, line=None, where=None):
        loc = []
        if line is not None:
            loc.append(f"line {line}")
        if where:
            loc.append(where)
        prefix = f"{', '.join(loc)}: " if loc else ""
        super().__init__(prefix + reason)
        self.line = line
        self.where = where
        self.reason = reason


class PreconditionViolation(FlowError):
    pass


class BadParams(FlowError):
    pass
