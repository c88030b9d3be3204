"""Flow graphs, their least flows, restriction, and composition."""

from __future__ import annotations

import heapq
import threading
from types import MappingProxyType
from typing import Iterable, Mapping

import networkx as nx

from .errors import (
    BoundaryMismatch,
    CompositionUndefined,
    EdgeSourceOutside,
    InflowSourceInside,
    InflowTargetOutside,
    NodeOutside,
    NodesOverlap,
    NonTermination,
    TagMismatch,
    VanishingFlow,
)
from .monoid import (
    INF,
    Count,
    EdgeFn,
    FnClass,
    Monoid,
    Value,
    fn_apply,
    fn_class,
    mon_add,
    zero,
)

DEFAULT_ROUNDS = 10_000

Edge = tuple  # (source, target)


def _check_tag(monoid: Monoid, item) -> None:
    if item.monoid is not monoid:
        raise TagMismatch(monoid, item.monoid)


class FlowGraph:
    """An immutable flow graph ``(X, E, in)`` over one monoid.

    ``edges`` maps ``(x, y)`` with ``x ∈ X`` to an edge function; ``inflow``
    maps ``(y, x)`` with ``y ∉ X`` and ``x ∈ X`` to a value.  Missing entries
    are the zero function / zero value, and zero entries are never stored.
    The flow is computed on first access and cached.
    """

    __slots__ = ("monoid", "nodes", "edges", "inflow", "_cache", "_lock")

    def __init__(
        self,
        monoid: Monoid,
        nodes: Iterable[int] = (),
        edges: Mapping[Edge, EdgeFn] | None = None,
        inflow: Mapping[Edge, Value] | None = None,
    ):
        monoid = Monoid(monoid)
        node_set = frozenset(nodes)
        clean_edges = {}
        for (x, y), f in (edges or {}).items():
            _check_tag(monoid, f)
            if x not in node_set:
                raise EdgeSourceOutside((x, y))
            if not f.is_zero():
                clean_edges[(x, y)] = f
        clean_in = {}
        for (y, x), v in (inflow or {}).items():
            _check_tag(monoid, v)
            if y in node_set:
                raise InflowSourceInside((y, x))
            if x not in node_set:
                raise InflowTargetOutside((y, x))
            if not v.is_zero():
                clean_in[(y, x)] = v
        self.monoid = monoid
        self.nodes = node_set
        self.edges = MappingProxyType(dict(sorted(clean_edges.items())))
        self.inflow = MappingProxyType(dict(sorted(clean_in.items())))
        self._cache = {}
        self._lock = threading.RLock()

    @classmethod
    def empty(cls, monoid: Monoid) -> FlowGraph:
        return cls(monoid)

    # structural queries ----------------------------------------------------

    def _memo(self, key, compute):
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = compute()
            return self._cache[key]

    @property
    def internal_edges(self) -> Mapping[Edge, EdgeFn]:
        return self._memo(
            "internal",
            lambda: {e: f for e, f in self.edges.items() if e[1] in self.nodes},
        )

    @property
    def boundary_edges(self) -> Mapping[Edge, EdgeFn]:
        return self._memo(
            "boundary",
            lambda: {e: f for e, f in self.edges.items() if e[1] not in self.nodes},
        )

    def successors(self, x: int) -> list:
        succ = self._memo("succ", self._build_succ)
        return succ.get(x, [])

    def _build_succ(self):
        succ: dict = {}
        for (x, y) in self.edges:
            succ.setdefault(x, []).append(y)
        return succ

    def digraph(self) -> nx.DiGraph:
        def build():
            g = nx.DiGraph()
            g.add_nodes_from(sorted(self.nodes))
            g.add_edges_from(self.internal_edges)
            return g

        return self._memo("digraph", build)

    def is_acyclic(self) -> bool:
        return self._memo("acyclic", lambda: nx.is_directed_acyclic_graph(self.digraph()))

    def fn_class(self) -> FnClass:
        return fn_class(self.monoid, self.edges.values())

    def inflow_at(self, x: int) -> Value:
        return inflow_at(self, x)

    @property
    def node_inflow(self) -> Mapping[int, Value]:
        """``in_x`` for every node (zero where nothing flows in)."""

        def build():
            acc = {x: zero(self.monoid) for x in self.nodes}
            for (_, x), v in self.inflow.items():
                acc[x] = mon_add(acc[x], v)
            return MappingProxyType(acc)

        return self._memo("node_inflow", build)

    # derived flows ---------------------------------------------------------

    @property
    def flow(self) -> Mapping[int, Value]:
        return self._memo("flow", lambda: MappingProxyType(_least_flow(self, DEFAULT_ROUNDS)))

    @property
    def outflow(self) -> Mapping[Edge, Value]:
        def build():
            fl = self.flow
            out = {}
            for (x, y), f in self.boundary_edges.items():
                v = fn_apply(f, fl[x])
                if not v.is_zero():
                    out[(x, y)] = v
            return MappingProxyType(out)

        return self._memo("outflow", build)

    def with_inflow(self, inflow: Mapping[Edge, Value]) -> FlowGraph:
        return FlowGraph(self.monoid, self.nodes, self.edges, inflow)

    def restrict(self, keep: Iterable[int]) -> FlowGraph:
        return restrict(self, keep)

    # equality ----------------------------------------------------------------

    def _key(self):
        return (self.monoid, self.nodes, tuple(self.edges.items()), tuple(self.inflow.items()))

    def __eq__(self, other):
        if not isinstance(other, FlowGraph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        edges = ", ".join(f"{x}->{y}:{f}" for (x, y), f in self.edges.items())
        inflow = ", ".join(f"{y}->{x}:{v}" for (y, x), v in self.inflow.items())
        return f"FlowGraph({self.monoid}, nodes={sorted(self.nodes)}, edges=[{edges}], in=[{inflow}])"


def mk_graph(monoid, nodes=(), edges=None, inflow=None) -> FlowGraph:
    return FlowGraph(monoid, nodes, edges, inflow)


def empty_graph(monoid: Monoid) -> FlowGraph:
    return FlowGraph.empty(monoid)


def inflow_at(h: FlowGraph, x: int) -> Value:
    if x not in h.nodes:
        raise NodeOutside(x)
    return h.node_inflow[x]


# ---------------------------------------------------------------------------
# the fixpoint engine


def _scc_order(h: FlowGraph) -> list:
    """Strongly connected components in a deterministic topological order."""
    g = h.digraph()
    cond = nx.condensation(g)
    members = cond.graph["mapping"]
    comp_nodes: dict = {}
    for node, c in members.items():
        comp_nodes.setdefault(c, []).append(node)
    order = nx.lexicographical_topological_sort(cond, key=lambda c: min(comp_nodes[c]))
    return [sorted(comp_nodes[c]) for c in order]


def _least_flow(h: FlowGraph, max_rounds: int) -> dict:
    """Least solution of ``fl(x) = in_x + Σ_y E(y,x)(fl(y))``.

    Components are solved in topological order.  Inside a cyclic component
    of the counting monoid the solution is known in closed form (any nonzero
    entry circulates and diverges to ∞); every other cyclic component is
    solved by worklist Kleene iteration, which terminates because edge
    functions only ever intersect/cap values drawn from a finite set.
    """
    monoid = h.monoid
    preds: dict = {x: [] for x in h.nodes}
    for (y, x), f in h.internal_edges.items():
        preds[x].append((y, f))
    node_in = h.node_inflow
    fl: dict = {}
    budget = max_rounds

    for comp in _scc_order(h):
        members = set(comp)
        cyclic = len(comp) > 1 or any(y == comp[0] for y, _ in preds[comp[0]])
        base = {}
        for x in comp:
            acc = node_in[x]
            for y, f in preds[x]:
                if y not in members:
                    acc = mon_add(acc, fn_apply(f, fl[y]))
            base[x] = acc
        if not cyclic:
            fl[comp[0]] = base[comp[0]]
            continue
        if monoid is Monoid.COUNTING:
            fed = any(not v.is_zero() for v in base.values())
            for x in comp:
                fl[x] = Count(INF) if fed else Count(0)
            continue
        budget = _kleene_component(comp, members, preds, base, fl, monoid, budget, max_rounds)
    return {x: fl[x] for x in sorted(fl)}


def _kleene_component(comp, members, preds, base, fl, monoid, budget, cap) -> int:
    succ: dict = {x: [] for x in comp}
    for x in comp:
        for y, _ in preds[x]:
            if y in members:
                succ[y].append(x)
    for x in comp:
        fl[x] = zero(monoid)
    heap = list(comp)
    heapq.heapify(heap)
    queued = set(comp)
    while heap:
        x = heapq.heappop(heap)
        queued.discard(x)
        budget -= 1
        if budget < 0:
            raise NonTermination(cap)
        acc = base[x]
        for y, f in preds[x]:
            if y in members:
                acc = mon_add(acc, fn_apply(f, fl[y]))
        if acc != fl[x]:
            fl[x] = acc
            for s in succ[x]:
                if s not in queued:
                    queued.add(s)
                    heapq.heappush(heap, s)
    return budget


def kleene_flow(h: FlowGraph, max_rounds: int = DEFAULT_ROUNDS) -> dict:
    """Plain worklist Kleene iteration over the whole graph.

    No component decomposition and no divergence shortcut, so a fed cycle of
    the counting monoid exhausts ``max_rounds`` and raises
    :class:`NonTermination`.
    """
    preds: dict = {x: [] for x in h.nodes}
    for (y, x), f in h.internal_edges.items():
        preds[x].append((y, f))
    comp = sorted(h.nodes)
    fl: dict = {}
    _kleene_component(comp, set(comp), preds, dict(h.node_inflow), fl, h.monoid,
                      max_rounds, max_rounds)
    return {x: fl[x] for x in comp}


def compute_flow(h: FlowGraph, max_rounds: int | None = None) -> Mapping[int, Value]:
    if max_rounds is None or max_rounds == DEFAULT_ROUNDS:
        return h.flow
    return MappingProxyType(_least_flow(h, max_rounds))


def outflow(h: FlowGraph) -> Mapping[Edge, Value]:
    return h.outflow


def transfer_eval(h: FlowGraph, inflow: Mapping[Edge, Value]) -> Mapping[Edge, Value]:
    """The transfer function of ``h`` applied to ``inflow``."""
    return h.with_inflow(inflow).outflow


def restrict(h: FlowGraph, keep: Iterable[int]) -> FlowGraph:
    """``h|Y``: keep ``X ∩ Y`` and turn edges from the dropped nodes into inflow."""
    kept = h.nodes & frozenset(keep)
    if kept == h.nodes:
        return h
    edges = {e: f for e, f in h.edges.items() if e[0] in kept}
    inflow = {e: v for e, v in h.inflow.items() if e[1] in kept}
    if h.edges:
        fl = h.flow
        for (x, y), f in h.edges.items():
            if y in kept and x not in kept:
                inflow[(x, y)] = fn_apply(f, fl[x])
    return FlowGraph(h.monoid, kept, edges, inflow)


# ---------------------------------------------------------------------------
# composition


def _check_boundary(h1: FlowGraph, h2: FlowGraph) -> None:
    z = zero(h1.monoid)
    out1 = h1.outflow
    pairs = {e for e in out1 if e[1] in h2.nodes}
    pairs |= {e for e in h2.inflow if e[0] in h1.nodes}
    for e in sorted(pairs):
        expected = h2.inflow.get(e, z)
        actual = out1.get(e, z)
        if expected != actual:
            raise BoundaryMismatch(e[0], e[1], expected, actual)


def disjoint_union(h1: FlowGraph, h2: FlowGraph) -> FlowGraph:
    """``h1 ⊎ h2`` without the vanishing-flow check (nodes must be disjoint)."""
    nodes = h1.nodes | h2.nodes
    edges = {**h1.edges, **h2.edges}
    inflow = {e: v for e, v in (*h1.inflow.items(), *h2.inflow.items()) if e[0] not in nodes}
    return FlowGraph(h1.monoid, nodes, edges, inflow)


def compose(h1: FlowGraph, h2: FlowGraph) -> FlowGraph:
    """``h1 * h2``; raises a :class:`CompositionUndefined` subclass if undefined."""
    if h1.monoid is not h2.monoid:
        raise TagMismatch(h1.monoid, h2.monoid)
    shared = h1.nodes & h2.nodes
    if shared:
        raise NodesOverlap(shared)
    _check_boundary(h1, h2)
    _check_boundary(h2, h1)
    joined = disjoint_union(h1, h2)
    fl = joined.flow
    for part in (h1, h2):
        for x, before in part.flow.items():
            if fl[x] != before:
                raise VanishingFlow(x, before, fl[x])
    return joined


def composable(h1: FlowGraph, h2: FlowGraph) -> bool:
    """``h1 # h2``."""
    try:
        compose(h1, h2)
    except CompositionUndefined:
        return False
    return True


def graphs_equal(h1: FlowGraph, h2: FlowGraph) -> bool:
    return h1 == h2


def out_diff(h1: FlowGraph, h2: FlowGraph) -> frozenset:
    """Nodes of ``h1`` whose outgoing edge functions differ in ``h2``."""
    changed = set()
    for e in set(h1.edges) | set(h2.edges):
        if h1.edges.get(e) != h2.edges.get(e) and e[0] in h1.nodes:
            changed.add(e[0])
    return frozenset(changed)
