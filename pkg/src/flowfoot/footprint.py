"""Footprint inference.

Given two graphs over the same nodes and inflow, a footprint is a node set
``Y`` such that the part outside ``Y`` is untouched and the part inside ``Y``
is contextually equivalent before and after: for every inflow below the
current one it sends the same outflow to the rest of the world.

:func:`compute_footprint` starts from the nodes whose outgoing edges changed
and repeatedly adds the targets whose received outflow might differ, until
nothing new is added (a footprint) or a target lies outside the graph
(``TOP``: no footprint exists inside ``X``).  The three methods differ only
in how they summarise the transfer function of a restriction.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import networkx as nx

from .errors import (
    CyclicRestriction,
    NodeOutside,
    NodeSetMismatch,
    NoFootprintByDefinition,
    RequiresDecreasing,
    RequiresIdempotent,
    TagMismatch,
)
from .graph import FlowGraph, out_diff, restrict
from .monoid import fn_compose, fn_eq_below, fn_sum, identity_fn, zero_fn
from .paths import _simple_sums, enum_paths, path_fn

__all__ = [
    "Method",
    "TOP",
    "FootprintResult",
    "out_diff",
    "transfer_failure",
    "extend_step",
    "compute_footprint",
    "verify_footprint",
    "contextually_equivalent",
]


class Method(str, enum.Enum):
    NAIVE = "naive"  # transfer-function summary by topological propagation
    DIST = "dist"    # sum over all paths (acyclic only)
    NEW = "new"      # sum over simple paths, from relevant sources only

    def __str__(self):
        return self.value


class _Top:
    """No footprint exists inside the node set."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "TOP"

    def __reduce__(self):
        return (_Top, ())


TOP = _Top()


@dataclass(frozen=True)
class FootprintResult:
    footprint: frozenset | _Top
    trace: tuple = ()
    method: Method = Method.NEW
    micros: int | None = field(default=None, compare=False)

    @property
    def is_top(self) -> bool:
        return self.footprint is TOP


# ---------------------------------------------------------------------------
# per-method summaries of a restriction


def _naive(g: FlowGraph, sources) -> dict:
    if not g.is_acyclic():
        raise CyclicRestriction("naive summaries need an acyclic restriction")
    order = list(nx.lexicographical_topological_sort(g.digraph()))
    preds: dict = {}
    for (a, b), f in g.internal_edges.items():
        preds.setdefault(b, []).append((a, f))
    ident = identity_fn(g.monoid)
    out = {}
    # every node is summarised, whether or not the caller asked for it
    for s in sorted(g.nodes):
        reach = {s: ident}
        for n in order:
            if n == s:
                continue
            acc = None
            for p, f in preds.get(n, ()):
                r = reach.get(p)
                if r is not None:
                    c = fn_compose(r, f)
                    acc = c if acc is None else fn_sum(acc, c)
            if acc is not None:
                reach[n] = acc
        for (y, z), f in g.boundary_edges.items():
            if y in reach:
                out[(s, (y, z))] = fn_compose(reach[y], f)
    return out


def _dist(g: FlowGraph, sources) -> dict:
    if not g.is_acyclic():
        raise CyclicRestriction("path sums need an acyclic restriction")
    out = {}
    for s in sorted(g.nodes):
        for ex in g.boundary_edges:
            paths = enum_paths(g, s, ex).paths
            if paths:
                acc = zero_fn(g.monoid)
                for p in paths:
                    acc = fn_sum(acc, path_fn(g, p))
                out[(s, ex)] = acc
    return out


def _new(g: FlowGraph, sources) -> dict:
    if not g.is_acyclic():
        if not g.monoid.idempotent:
            raise RequiresIdempotent(f"cyclic restriction over {g.monoid}")
        if not g.fn_class().decreasing:
            raise RequiresDecreasing("cyclic restriction with non-decreasing edges")
    out = {}
    for s in sources:
        for ex, f in _simple_sums(g, s).items():
            out[(s, ex)] = f
    return out


_SUMMARY = {Method.NAIVE: _naive, Method.DIST: _dist, Method.NEW: _new}


# ---------------------------------------------------------------------------
# the extension loop


def _check_pair(h1: FlowGraph, h2: FlowGraph) -> None:
    if h1.monoid is not h2.monoid:
        raise TagMismatch(h1.monoid, h2.monoid)
    if h1.nodes != h2.nodes:
        raise NodeSetMismatch("footprints compare graphs over the same nodes")
    if h1.inflow != h2.inflow:
        raise NoFootprintByDefinition("the graphs have different inflows")


def transfer_failure(
    h1: FlowGraph, h2: FlowGraph, zone: Iterable[int], method: Method | str = Method.NEW
) -> frozenset:
    """Targets outside ``zone`` whose received outflow may differ.

    A target ``x`` fails when some exit ``(z, x)`` of the restrictions to
    ``zone`` carries different contributions from some source ``s``, for an
    inflow of ``s`` at or below its current inflow.
    """
    method = Method(method)
    zone = frozenset(zone)
    r1 = restrict(h1, zone)
    r2 = restrict(h2, zone)
    bounds = r1.node_inflow
    sources = [s for s in sorted(zone) if not bounds[s].is_zero()]
    summarise = _SUMMARY[method]
    s1 = summarise(r1, sources)
    s2 = summarise(r2, sources)
    z0 = zero_fn(h1.monoid)
    failed = set()
    for ex in sorted(set(r1.boundary_edges) | set(r2.boundary_edges)):
        target = ex[1]
        if target in failed:
            continue
        for s in sources:
            f1 = s1.get((s, ex), z0)
            f2 = s2.get((s, ex), z0)
            if not fn_eq_below(f1, f2, bounds[s]):
                failed.add(target)
                break
    return frozenset(failed)


def extend_step(
    h1: FlowGraph, h2: FlowGraph, zone: Iterable[int], method: Method | str = Method.NEW
) -> frozenset | _Top:
    """One round: ``zone ∪ out_diff ∪ failures``, or ``TOP`` if a failure leaves the graph."""
    zone = frozenset(zone)
    failed = transfer_failure(h1, h2, zone, method)
    if not failed <= h1.nodes:
        return TOP
    return zone | out_diff(h1, h2) | failed


def compute_footprint(
    h1: FlowGraph, h2: FlowGraph, method: Method | str = Method.NEW
) -> FootprintResult:
    method = Method(method)
    _check_pair(h1, h2)
    zone = out_diff(h1, h2)
    trace = [zone]
    while True:
        nxt = extend_step(h1, h2, zone, method)
        if nxt is TOP:
            return FootprintResult(TOP, tuple(trace), method)
        if nxt == zone:
            return FootprintResult(zone, tuple(trace), method)
        zone = nxt
        trace.append(zone)


# ---------------------------------------------------------------------------
# checking a candidate


def _exact_summaries(g: FlowGraph) -> dict:
    if g.is_acyclic():
        return _naive(g, g.nodes)
    return _new(g, sorted(g.nodes))


def contextually_equivalent(r1: FlowGraph, r2: FlowGraph) -> bool:
    """Same inflow, and the same outflow for every inflow below it.

    Decided per source: the summaries of each source must agree below that
    source's inflow.  Cyclic counting graphs are rejected.
    """
    if r1.nodes != r2.nodes or r1.inflow != r2.inflow:
        return False
    s1 = _exact_summaries(r1)
    s2 = _exact_summaries(r2)
    z0 = zero_fn(r1.monoid)
    bounds = r1.node_inflow
    for key in set(s1) | set(s2):
        if not fn_eq_below(s1.get(key, z0), s2.get(key, z0), bounds[key[0]]):
            return False
    return True


def verify_footprint(
    h1: FlowGraph, h2: FlowGraph, candidate: Iterable[int], mode: str = "algebraic", budget=None
) -> bool:
    """Whether ``candidate`` is a footprint of the update ``h1 → h2``.

    ``mode="oracle"`` delegates to the explicit-state oracle instead.
    """
    _check_pair(h1, h2)
    y = frozenset(candidate)
    for n in y - h1.nodes:
        raise NodeOutside(n)
    if mode == "oracle":
        from .oracle import oracle_is_footprint

        return oracle_is_footprint(h1, h2, y, budget)
    if mode != "algebraic":
        raise ValueError(f"unknown verification mode {mode!r}")
    rest = h1.nodes - y
    if restrict(h1, rest) != restrict(h2, rest):
        return False
    return contextually_equivalent(restrict(h1, y), restrict(h2, y))
