"""Random graphs, updates and list-manipulation benchmarks.

All generators take a :class:`random.Random` (or a seed) and are
deterministic in it.  Node ids ``0..n-1`` are internal; external ids start at
:data:`EXT`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping

from .errors import BadParams
from .graph import FlowGraph, restrict
from .monoid import (
    INF,
    Cap,
    Count,
    EdgeFn,
    Intersect,
    KeySet,
    Monoid,
    Peak,
    Scale,
    Value,
    lam,
    top,
)
from .serialize import Instance

EXT = 100  # first external node id
KEY_LO, KEY_HI = 0, 7


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


# ---------------------------------------------------------------------------
# values and functions


def random_keyset(rng: random.Random, lo: int = KEY_LO, hi: int = KEY_HI) -> KeySet:
    out = KeySet()
    for _ in range(rng.choice((0, 1, 1, 2))):
        a = rng.choice((-INF, *range(lo - 1, hi + 2)))
        b = rng.choice((*range(lo - 1, hi + 2), INF))
        out = out.union(KeySet.interval(min(a, b), max(a, b), rng.random() < 0.3, rng.random() < 0.3))
    return out


def random_value(rng: random.Random, monoid: Monoid, small: bool = True,
                 key_hi: int = KEY_HI) -> Value:
    if monoid is Monoid.KEYSET:
        return random_keyset(rng, KEY_LO, key_hi)
    if monoid is Monoid.COUNTING:
        return Count(rng.choice((0, 1, 1, 2) if small else (0, 1, 2, 3, INF)))
    return Peak(rng.choice((0, 1, 2, 3, 4, 5, INF)))


def random_fn(rng: random.Random, monoid: Monoid, decreasing: bool = False,
              key_hi: int = KEY_HI) -> EdgeFn:
    if monoid is Monoid.KEYSET:
        r = rng.random()
        if r < 0.45:
            return lam(rng.choice((-INF, *range(KEY_LO - 1, key_hi + 1))))
        if r < 0.55:
            return Intersect(KeySet.full())
        return Intersect(random_keyset(rng, KEY_LO, key_hi))
    if monoid is Monoid.COUNTING:
        return Scale(rng.choice((0, 1, 1, 1) if decreasing else (0, 1, 1, 2)))
    return Cap(rng.choice((0, 1, 2, 3, 4, 5, INF, INF)))


# ---------------------------------------------------------------------------
# graphs and updates


def random_graph(
    rng: random.Random,
    monoid: Monoid,
    n: int,
    *,
    acyclic: bool = False,
    density: float = 0.4,
    n_ext: int = 2,
    inflow_p: float = 0.6,
    decreasing: bool = False,
    key_hi: int = KEY_HI,
) -> FlowGraph:
    """``n`` internal nodes, external sources ``EXT`` and targets ``EXT+1..``."""
    nodes = list(range(n))
    targets = [EXT + 1 + i for i in range(n_ext)]
    edges = {}
    for x in nodes:
        for y in nodes:
            if (acyclic and y <= x) or rng.random() >= density:
                continue
            edges[(x, y)] = random_fn(rng, monoid, decreasing, key_hi)
        for t in targets:
            if rng.random() < density / 2:
                edges[(x, t)] = random_fn(rng, monoid, decreasing, key_hi)
    inflow = {}
    for x in nodes:
        if rng.random() < inflow_p or (x == 0 and not inflow):
            v = random_value(rng, monoid, key_hi=key_hi)
            inflow[(EXT, x)] = v
    return FlowGraph(monoid, nodes, edges, inflow)


def mutate(rng: random.Random, h: FlowGraph, changes: int = 1, acyclic: bool = False,
           decreasing: bool = False, key_hi: int = KEY_HI) -> FlowGraph:
    """Change the outgoing edges of ``changes`` random nodes."""
    edges = dict(h.edges)
    nodes = sorted(h.nodes)
    targets = sorted({y for _, y in h.edges if y not in h.nodes} | {EXT + 1})
    for _ in range(changes):
        x = rng.choice(nodes)
        options = [y for y in nodes if not acyclic or y > x] + targets
        y = rng.choice(options)
        if (x, y) in edges and rng.random() < 0.4:
            del edges[(x, y)]
        else:
            edges[(x, y)] = random_fn(rng, h.monoid, decreasing, key_hi)
    return FlowGraph(h.monoid, h.nodes, edges, h.inflow)


def random_instance(seed, monoid: Monoid, n: int, *, acyclic: bool = False,
                    decreasing: bool = False, changes: int | None = None,
                    key_hi: int = KEY_HI, label: str = "") -> Instance:
    """A random graph and a mutated copy; ``key_hi`` narrows keyset constants."""
    rng = _rng(seed)
    before = random_graph(rng, monoid, n, acyclic=acyclic, decreasing=decreasing, key_hi=key_hi)
    after = mutate(rng, before, changes or rng.choice((1, 1, 2)), acyclic, decreasing, key_hi)
    return Instance(monoid, before, after, label or f"{monoid}-{n}")


def add_dominated_shortcut(rng: random.Random, h: FlowGraph) -> FlowGraph | None:
    """Add an edge ``x → y`` no stronger than some existing two-edge path.

    In an idempotent monoid the new paths are dominated by old ones, so the
    transfer function is unchanged.  Returns ``None`` if there is no spot.
    """
    spots = []
    for (x, m), f in h.internal_edges.items():
        for (m2, y), g in h.edges.items():
            if m2 == m and y != m and (x, y) not in h.edges:
                spots.append((x, y, f.then(g)))
    if not spots:
        return None
    x, y, bound = rng.choice(spots)
    if isinstance(bound, Intersect):
        weaker = Intersect(bound.keys.intersection(random_keyset(rng)))
        f = rng.choice((bound, weaker))
    elif isinstance(bound, Cap):
        f = Cap(rng.choice((bound.c, min(bound.c, rng.randint(0, 5)))))
    else:
        return None
    return FlowGraph(h.monoid, h.nodes, {**h.edges, (x, y): f}, h.inflow)


def random_split(rng: random.Random, h: FlowGraph, parts: int = 3) -> list:
    """Partition ``h`` into restrictions; these always compose back."""
    buckets: list = [set() for _ in range(parts)]
    for x in sorted(h.nodes):
        buckets[rng.randrange(parts)].add(x)
    return [restrict(h, b) for b in buckets]


def random_triple(seed, monoid: Monoid) -> tuple:
    """Three graphs for the composition laws.

    Most triples come from splitting one graph (so composition is defined);
    the rest are independent graphs over disjoint nodes, where definedness
    is the interesting part.
    """
    rng = _rng(seed)
    n = rng.randint(1, 6)
    if rng.random() < 0.7:
        h = random_graph(rng, monoid, n, density=0.35)
        return tuple(random_split(rng, h, 3))
    out = []
    base = 0
    for _ in range(3):
        k = rng.randint(0, 3)
        nodes = list(range(base, base + k))
        others = [y for y in range(0, 10) if y not in nodes] + [EXT]
        edges = {}
        for x in nodes:
            for y in rng.sample(others + nodes, k=min(2, len(others))):
                edges[(x, y)] = random_fn(rng, monoid)
        inflow = {}
        for x in nodes:
            if rng.random() < 0.6:
                inflow[(rng.choice(others), x)] = random_value(rng, monoid)
        out.append(FlowGraph(monoid, nodes, edges, inflow))
        base += k
    return tuple(out)


# ---------------------------------------------------------------------------
# list manipulations


@dataclass(frozen=True)
class ListNodeSpec:
    """A list node: its key, its mark bit and its successor (``None``: the tail)."""

    key: float
    mark: bool = False
    next: int | None = None


def list_edge(spec: ListNodeSpec) -> Intersect:
    """Searches for ``k`` pass an unmarked node only if ``k > key``; marked nodes let all through."""
    return lam(-INF) if spec.mark else lam(spec.key)


def list_graph(specs: Mapping[int, ListNodeSpec], inflow: Mapping, tail: int) -> FlowGraph:
    edges = {
        x: (s.next if s.next is not None else tail, list_edge(s)) for x, s in specs.items()
    }
    return FlowGraph(
        Monoid.KEYSET, specs, {(x, y): f for x, (y, f) in edges.items()}, inflow
    )


LIST_ROOT_SRC = EXT
LIST_TAIL = EXT + 1
KINDS = ("insert", "mark", "unlink")


def list_update(kind: str, specs: Mapping[int, ListNodeSpec], at: int,
                root_inflow: KeySet | None = None, fresh_key=None,
                label: str = "") -> Instance:
    """Apply one list operation to the list starting at node ``0``.

    ``at`` is the predecessor for insert/unlink and the target for mark.
    For insert, the fresh node is allocated in both graphs and already points
    at its successor; only the predecessor's link changes.
    """
    specs = dict(specs)
    root_inflow = KeySet.integers() if root_inflow is None else root_inflow
    inflow = {(LIST_ROOT_SRC, 0): root_inflow}
    if at not in specs:
        raise BadParams(f"node {at} is not in the list")
    before_specs = dict(specs)
    after_specs = dict(specs)
    if kind == "insert":
        fresh = max(specs) + 1
        succ = specs[at].next
        key = fresh_key
        if key is None:
            raise BadParams("insert needs a key for the fresh node")
        before_specs[fresh] = after_specs[fresh] = ListNodeSpec(key, False, succ)
        a = specs[at]
        after_specs[at] = ListNodeSpec(a.key, a.mark, fresh)
    elif kind == "mark":
        a = specs[at]
        if a.mark:
            raise BadParams(f"node {at} is already marked")
        after_specs[at] = ListNodeSpec(a.key, True, a.next)
    elif kind == "unlink":
        a = specs[at]
        t = a.next
        if t is None or not specs[t].mark:
            raise BadParams("unlink needs a marked successor")
        after_specs[at] = ListNodeSpec(a.key, a.mark, specs[t].next)
    else:
        raise BadParams(f"unknown list operation {kind!r}")
    before = list_graph(before_specs, inflow, LIST_TAIL)
    after = list_graph(after_specs, inflow, LIST_TAIL)
    names = {LIST_ROOT_SRC: "root", LIST_TAIL: "tail"}
    return Instance(Monoid.KEYSET, before, after, label or kind, names)


def gen_list_update(kind: str, length: int, seed) -> Instance:
    """A sorted list of ``length`` nodes and one insert, mark or unlink on it.

    Keys are spaced so that a fresh key always fits between neighbours.  The
    chosen position keeps the affected successor inside the list where the
    length allows it.
    """
    if kind not in KINDS:
        raise BadParams(f"unknown list operation {kind!r}")
    if not isinstance(length, int) or length < 2:
        raise BadParams("a list update needs at least two nodes")
    rng = _rng(seed)
    keys = sorted(rng.sample(range(1, 20 * length), length))
    keys = [k * 2 for k in keys]  # even keys leave odd gaps
    marks = [False] + [rng.random() < 0.25 for _ in range(length - 1)]
    if kind == "insert":
        at = rng.randrange(length - 1)
        lo, hi = keys[at], keys[at + 1]
        fresh_key = rng.randrange(lo + 1, hi)
    elif kind == "mark":
        at = rng.randrange(1, length)
        marks[at] = False
        fresh_key = None
    else:
        at = rng.randrange(length - 2) if length > 2 else 0
        marks[at + 1] = True
        fresh_key = None
    specs = {
        i: ListNodeSpec(keys[i], marks[i], i + 1 if i + 1 < length else None)
        for i in range(length)
    }
    label = f"{kind}-{length}-{seed if not isinstance(seed, random.Random) else 'rng'}"
    return list_update(kind, specs, at, fresh_key=fresh_key, label=label)


def gen_cyclic_update(seed, n: int = 4) -> Instance:
    """A keyset ring with chords, one node's label changed.

    Used to exercise methods on cyclic restrictions.
    """
    if n < 2:
        raise BadParams("a ring needs at least two nodes")
    rng = _rng(seed)
    edges = {(i, (i + 1) % n): random_fn(rng, Monoid.KEYSET) for i in range(n)}
    for _ in range(rng.randint(0, n // 2)):
        x, y = rng.randrange(n), rng.randrange(n)
        if x != y:
            edges[(x, y)] = random_fn(rng, Monoid.KEYSET)
    edges[(rng.randrange(n), LIST_TAIL)] = random_fn(rng, Monoid.KEYSET)
    inflow = {(LIST_ROOT_SRC, 0): KeySet.integers()}
    before = FlowGraph(Monoid.KEYSET, range(n), edges, inflow)
    x = rng.randrange(n)
    changed = dict(edges)
    changed[(x, (x + 1) % n)] = random_fn(rng, Monoid.KEYSET)
    after = FlowGraph(Monoid.KEYSET, range(n), changed, inflow)
    return Instance(Monoid.KEYSET, before, after, f"ring-{n}-{seed}")


def full_inflow(monoid: Monoid, nodes) -> dict:
    """One top-valued entry per node from a fresh external source."""
    return {(EXT, x): top(monoid) for x in nodes}
