"""Paths through flow graphs and the path-sum view of transfer functions.

With distributive edge functions the transfer function of ``h`` has the
closed form

    tf(h)(in)(y, z) = Σ_x Σ_{p ∈ Paths(h, x → y, z)} E_p(in_x)

where ``E_p`` composes the edge functions along ``p``.  On acyclic graphs the
path sets are finite.  On cyclic graphs with decreasing edge functions and an
idempotent addition, simple paths suffice: the detour through a cycle is
always dominated by the path that skips it.
"""

from __future__ import annotations

from typing import Iterable, Mapping, NamedTuple

from .errors import (
    CyclicGraph,
    ExitNotBoundary,
    NodeOutside,
    NodeSetMismatch,
    NotAPath,
    RequiresDecreasing,
    RequiresIdempotent,
)
from .graph import Edge, FlowGraph, out_diff
from .monoid import (
    EdgeFn,
    Value,
    fn_apply,
    fn_compose,
    fn_leq,
    fn_sum,
    identity_fn,
    mon_add,
    zero,
    zero_fn,
)

Path = tuple  # (x0, ..., xn, z): interior nodes in X, last node outside


class PathEnumeration(NamedTuple):
    paths: frozenset
    complete: bool  # False when max_len cut off at least one branch


def path_fn(h: FlowGraph, p: Path) -> EdgeFn:
    """``E_p``: the edge functions along ``p``, first edge applied first."""
    if len(p) < 2 or p[-1] in h.nodes or any(x not in h.nodes for x in p[:-1]):
        raise NotAPath(f"{p} is not a path of the graph")
    f = identity_fn(h.monoid)
    for a, b in zip(p, p[1:]):
        e = h.edges.get((a, b))
        if e is None:
            raise NotAPath(f"{p} uses the zero edge ({a},{b})")
        f = fn_compose(f, e)
    return f


def _check_exit(h: FlowGraph, x: int, exit_: Edge) -> None:
    if x not in h.nodes:
        raise NodeOutside(x)
    if exit_ not in h.boundary_edges:
        raise ExitNotBoundary(exit_)


def enum_paths(h: FlowGraph, x: int, exit_: Edge, max_len: int | None = None) -> PathEnumeration:
    """All nonzero-edge paths from ``x`` leaving ``h`` along ``exit_``.

    ``max_len`` bounds the number of edges.  Without a bound the enumeration
    is exhaustive on acyclic graphs; on cyclic graphs it defaults to
    ``2·|X| + 1`` edges and the result is flagged incomplete if anything was
    cut off.
    """
    _check_exit(h, x, exit_)
    if max_len is None:
        max_len = len(h.nodes) + 1 if h.is_acyclic() else 2 * len(h.nodes) + 1
    y, z = exit_
    found = set()
    complete = True
    stack = [(x,)]
    while stack:
        prefix = stack.pop()
        last = prefix[-1]
        if last == y and len(prefix) <= max_len:
            found.add(prefix + (z,))
        for s in h.successors(last):
            if s not in h.nodes:
                continue
            if len(prefix) + 1 > max_len:
                complete = False
                continue
            stack.append(prefix + (s,))
    return PathEnumeration(frozenset(found), complete)


def enum_simple_paths(h: FlowGraph, x: int, exit_: Edge) -> frozenset:
    """All node-repetition-free paths from ``x`` leaving along ``exit_``."""
    _check_exit(h, x, exit_)
    y, z = exit_
    found = set()
    stack = [(x,)]
    while stack:
        prefix = stack.pop()
        last = prefix[-1]
        if last == y:
            found.add(prefix + (z,))
        for s in h.successors(last):
            if s in h.nodes and s not in prefix:
                stack.append(prefix + (s,))
    return frozenset(found)


# ---------------------------------------------------------------------------
# capability gates


def require_acyclic(h: FlowGraph, exc=CyclicGraph) -> None:
    if not h.is_acyclic():
        raise exc("the graph has a cycle of nonzero edges")


def require_simple_paths_exact(h: FlowGraph) -> None:
    """Simple-path sums equal all-path sums on ``h``.

    Always true on acyclic graphs (every path is simple).  On cyclic graphs
    it needs an idempotent addition and decreasing edge functions.
    """
    if h.is_acyclic():
        return
    if not h.monoid.idempotent:
        raise RequiresIdempotent(f"{h.monoid} addition is not idempotent and the graph is cyclic")
    if not h.fn_class().decreasing:
        raise RequiresDecreasing("the graph is cyclic and has non-decreasing edge functions")


# ---------------------------------------------------------------------------
# summaries and transfer


def _simple_sums(h: FlowGraph, x: int) -> dict:
    """Per exit, Σ of E_p over simple paths from ``x``; prefixes are shared."""
    sums: dict = {}
    boundary = h.boundary_edges
    stack = [(x, identity_fn(h.monoid), frozenset((x,)))]
    while stack:
        node, f, seen = stack.pop()
        for s in h.successors(node):
            e = h.edges[(node, s)]
            g = fn_compose(f, e)
            if (node, s) in boundary:
                prev = sums.get((node, s))
                sums[(node, s)] = g if prev is None else fn_sum(prev, g)
            elif s not in seen and not g.is_zero():
                stack.append((s, g, seen | {s}))
    return sums


def source_summaries(h: FlowGraph, mode: str = "all") -> dict:
    """``(x, (y, z)) ↦ Σ_p E_p`` for every node ``x`` and boundary edge ``(y, z)``.

    Pairs with no connecting path map to the zero function.
    """
    if mode == "all":
        require_acyclic(h)
    elif mode == "simple":
        require_simple_paths_exact(h)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    z0 = zero_fn(h.monoid)
    out = {}
    for x in sorted(h.nodes):
        sums = _simple_sums(h, x)
        for ex in h.boundary_edges:
            out[(x, ex)] = sums.get(ex, z0)
    return out


def _node_inflow(h: FlowGraph, inflow) -> Mapping[int, Value]:
    return h.with_inflow(inflow).node_inflow


def _path_transfer(h: FlowGraph, inflow, paths_of) -> dict:
    node_in = _node_inflow(h, inflow)
    out = {}
    for ex in h.boundary_edges:
        acc = zero(h.monoid)
        for x in sorted(h.nodes):
            m = node_in[x]
            if m.is_zero():
                continue
            for p in paths_of(x, ex):
                acc = mon_add(acc, fn_apply(path_fn(h, p), m))
        if not acc.is_zero():
            out[ex] = acc
    return out


def closed_form_transfer(h: FlowGraph, inflow) -> dict:
    """Outflow for ``inflow`` as a sum over all paths (acyclic graphs only)."""
    require_acyclic(h)
    return _path_transfer(h, inflow, lambda x, ex: enum_paths(h, x, ex).paths)


def simple_path_transfer(h: FlowGraph, inflow) -> dict:
    """Outflow for ``inflow`` as a sum over simple paths."""
    require_simple_paths_exact(h)
    return _path_transfer(h, inflow, lambda x, ex: enum_simple_paths(h, x, ex))


def summary_transfer(h: FlowGraph, inflow, mode: str = "simple") -> dict:
    """Recombine source summaries: ``out(y,z) = Σ_x summary(x,(y,z))(in_x)``."""
    summaries = source_summaries(h, mode)
    node_in = _node_inflow(h, inflow)
    out = {}
    for ex in h.boundary_edges:
        acc = zero(h.monoid)
        for x in sorted(h.nodes):
            acc = mon_add(acc, fn_apply(summaries[(x, ex)], node_in[x]))
        if not acc.is_zero():
            out[ex] = acc
    return out


# ---------------------------------------------------------------------------
# path replacement


def path_replacement_holds(
    h1: FlowGraph,
    h2: FlowGraph,
    sources: Iterable[int] | None = None,
    mode: str = "simple",
) -> bool:
    """Whether every path of ``h1`` from ``sources`` is dominated by ``h2``.

    For each source ``x`` and exit ``(y, z)``, each path ``p`` of ``h1`` must
    satisfy ``E_p ≤ Σ_q E_q`` over the paths ``q`` of ``h2`` from ``x`` to the
    same exit.  ``sources`` defaults to the nodes whose outgoing edges differ.
    Checking both directions decides ``tf(h1) = tf(h2)``.
    """
    if h1.nodes != h2.nodes:
        raise NodeSetMismatch("path replacement needs equal node sets")
    if not h1.monoid.idempotent:
        raise RequiresIdempotent(f"{h1.monoid} addition is not idempotent")
    if mode == "simple":
        require_simple_paths_exact(h1)
        require_simple_paths_exact(h2)
        paths_of = lambda x, ex: enum_simple_paths(h1, x, ex)  # noqa: E731
    elif mode == "all":
        require_acyclic(h1)
        require_acyclic(h2)
        paths_of = lambda x, ex: enum_paths(h1, x, ex).paths  # noqa: E731
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if sources is None:
        sources = out_diff(h1, h2)
    z0 = zero_fn(h1.monoid)
    targets = source_summaries(h2, mode)
    for x in sorted(sources):
        for ex in h1.boundary_edges:
            bound = targets.get((x, ex), z0)
            for p in paths_of(x, ex):
                if not fn_leq(path_fn(h1, p), bound):
                    return False
    return True


def transfer_equal(h1: FlowGraph, h2: FlowGraph, mode: str = "simple") -> bool:
    """``tf(h1) = tf(h2)`` via path replacement in both directions."""
    return path_replacement_holds(h1, h2, mode=mode) and path_replacement_holds(h2, h1, mode=mode)
