"""Brute-force ground truth.

Everything here works on explicit values: keysets become ``frozenset``s over
a finite key universe, counting and max values stay plain numbers.  Flows
are computed by naive round-robin iteration, restriction is rebuilt from the
definition, and every "for all inflows below" quantifier is discharged by
listing the inflows.  The only thing shared with the engine is the graph
data itself (node ids, edge-function parameters, inflow values).

Enumeration is always exhaustive; when the requested down-set is infinite or
larger than the budget, :class:`OracleInfeasible` is raised instead.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import (
    CompositionUndefined,
    NonTermination,
    OracleInfeasible,
    TagMismatch,
)
from .graph import FlowGraph, compose, empty_graph
from .monoid import (
    INF,
    Cap,
    Count,
    Intersect,
    KeySet,
    Monoid,
    Peak,
    Scale,
    Value,
)

DEFAULT_KEYS = (-INF, *range(8), INF)
DEFAULT_MAX_VALUE = 6
DEFAULT_MAX_INFLOWS = 1 << 16
MAX_ROUNDS = 100_000


@dataclass(frozen=True)
class EnumBudget:
    """Finite universe plus a cap on the number of enumerated inflows.

    ``keys`` is the key universe for keysets; ``max_value`` bounds the finite
    counting/max values (``∞`` is always included).
    """

    keys: tuple = DEFAULT_KEYS
    max_value: int = DEFAULT_MAX_VALUE
    max_inflows: int = DEFAULT_MAX_INFLOWS

    @classmethod
    def covering(cls, *graphs: FlowGraph, max_inflows: int = DEFAULT_MAX_INFLOWS) -> EnumBudget:
        """A universe in which the given graphs lose no information.

        For keysets, one representative key per atom of the partition cut out
        by every interval endpoint in the graphs, plus both sentinels.  Every
        keyset appearing in the graphs is a union of atoms, and the edge
        functions act on each key independently, so the projection is exact.
        For counting and max, ``max_value`` is the largest finite constant.
        """
        starts: set = set()
        top = 0
        for h in graphs:
            items = [*h.inflow.values(), *h.edges.values()]
            for it in items:
                ks = it.keys if isinstance(it, Intersect) else it
                if isinstance(ks, KeySet):
                    for a, b in ks.runs:
                        if a != -INF:
                            starts.add(a)
                        if b != INF:
                            starts.add(b + 1)
                elif not isinstance(it, Scale):
                    n = it.c if isinstance(it, Cap) else it.n
                    if n != INF:
                        top = max(top, n)
        if starts:
            keys = {min(starts) - 1, *starts}
        else:
            keys = {0}
        return cls(
            keys=(-INF, *sorted(keys), INF),
            max_value=max(top, 1),
            max_inflows=max_inflows,
        )


def _budget_for(budget: EnumBudget | None, *graphs: FlowGraph) -> EnumBudget:
    return budget if budget is not None else EnumBudget.covering(*graphs)


# ---------------------------------------------------------------------------
# explicit carriers


class _Domain:
    """Explicit values and edge-function application for one monoid."""

    def __init__(self, monoid: Monoid, budget: EnumBudget):
        self.monoid = monoid
        self.budget = budget
        self._fn_cache: dict = {}

    @property
    def zero(self):
        return frozenset() if self.monoid is Monoid.KEYSET else 0

    def value(self, v: Value):
        if v.monoid is not self.monoid:
            raise TagMismatch(self.monoid, v.monoid)
        if self.monoid is Monoid.KEYSET:
            return frozenset(k for k in self.budget.keys if k in v)
        return v.n

    def back(self, e) -> Value:
        if self.monoid is Monoid.KEYSET:
            return KeySet.from_points(e)
        return Count(e) if self.monoid is Monoid.COUNTING else Peak(e)

    def add(self, a, b):
        if self.monoid is Monoid.KEYSET:
            return a | b
        if self.monoid is Monoid.MAXCAP:
            return max(a, b)
        return a + b

    def apply(self, f, m):
        if self.monoid is Monoid.KEYSET:
            keys = self._fn_cache.get(f)
            if keys is None:
                keys = self._fn_cache[f] = frozenset(k for k in self.budget.keys if k in f.keys)
            return m & keys
        if self.monoid is Monoid.MAXCAP:
            return min(m, f.c)
        if f.k == 0 or m == 0:
            return 0
        return f.k * m

    def below(self, e) -> list:
        """Every explicit value ``≤ e``."""
        if self.monoid is Monoid.KEYSET:
            items = sorted(e)
            return [
                frozenset(c)
                for r in range(len(items) + 1)
                for c in itertools.combinations(items, r)
            ]
        cap = self.budget.max_value
        if e == INF:
            return [*range(cap + 1), INF]
        if e > cap:
            raise OracleInfeasible(f"value {e} exceeds the finite universe 0..{cap}")
        return list(range(e + 1))

    def everything(self) -> list:
        if self.monoid is Monoid.KEYSET:
            return self.below(frozenset(self.budget.keys))
        return self.below(INF)


@dataclass
class _EGraph:
    nodes: frozenset
    edges: dict  # (x, y) -> EdgeFn; zero functions are absent
    inflow: dict = field(default_factory=dict)  # (y, x) -> explicit value, zeros absent


def _explicit(h: FlowGraph, dom: _Domain) -> _EGraph:
    inflow = {}
    for e, v in h.inflow.items():
        ev = dom.value(v)
        if ev != dom.zero:
            inflow[e] = ev
    return _EGraph(h.nodes, dict(h.edges), inflow)


def _flow(g: _EGraph, dom: _Domain, inflow: Mapping | None = None) -> dict:
    """Least fixpoint by simultaneous rounds from all-zero."""
    inflow = g.inflow if inflow is None else inflow
    nodes = sorted(g.nodes)
    base = {x: dom.zero for x in nodes}
    for (_, x), v in inflow.items():
        base[x] = dom.add(base[x], v)
    preds: dict = {x: [] for x in nodes}
    for (y, x), f in g.edges.items():
        if x in g.nodes:
            preds[x].append((y, f))

    def step(cur):
        nxt = {}
        for x in nodes:
            acc = base[x]
            for y, f in preds[x]:
                acc = dom.add(acc, dom.apply(f, cur[y]))
            nxt[x] = acc
        return nxt

    cur = {x: dom.zero for x in nodes}
    if dom.monoid is Monoid.COUNTING:
        # after n rounds every finite node is stable; a node still growing
        # between rounds n and 2n sits downstream of a fed cycle
        n = max(len(nodes), 1)
        for _ in range(n):
            cur = step(cur)
        mid = cur
        for _ in range(n):
            cur = step(cur)
        return {x: INF if cur[x] == INF or cur[x] != mid[x] else mid[x] for x in nodes}
    for _ in range(MAX_ROUNDS):
        nxt = step(cur)
        if nxt == cur:
            return cur
        cur = nxt
    raise NonTermination(MAX_ROUNDS)


def _outflow(g: _EGraph, dom: _Domain, inflow: Mapping | None = None) -> dict:
    fl = _flow(g, dom, inflow)
    out = {}
    for (x, y), f in g.edges.items():
        if y not in g.nodes:
            v = dom.apply(f, fl[x])
            if v != dom.zero:
                out[(x, y)] = v
    return out


def _restrict(g: _EGraph, dom: _Domain, keep: Iterable[int]) -> _EGraph:
    keep = g.nodes & frozenset(keep)
    fl = _flow(g, dom)
    edges = {e: f for e, f in g.edges.items() if e[0] in keep}
    inflow = {e: v for e, v in g.inflow.items() if e[1] in keep}
    for (x, y), f in g.edges.items():
        if x in g.nodes and x not in keep and y in keep:
            v = dom.apply(f, fl[x])
            if v != dom.zero:
                inflow[(x, y)] = v
    return _EGraph(keep, edges, inflow)


def _same_structure(a: _EGraph, b: _EGraph) -> bool:
    return a.nodes == b.nodes and a.edges == b.edges and a.inflow == b.inflow


def _explicit_below(inflow: Mapping, dom: _Domain) -> list:
    keys = sorted(inflow)
    choices = [dom.below(inflow[k]) for k in keys]
    total = 1
    for c in choices:
        total *= len(c)
    if total > dom.budget.max_inflows:
        raise OracleInfeasible(
            f"{total} inflows below the bound exceed the budget of {dom.budget.max_inflows}"
        )
    return [dict(zip(keys, combo)) for combo in itertools.product(*choices)]


def _ctx_equiv(a: _EGraph, b: _EGraph, dom: _Domain) -> bool:
    if a.nodes != b.nodes or a.inflow != b.inflow:
        return False
    for inf in _explicit_below(a.inflow, dom):
        if _outflow(a, dom, inf) != _outflow(b, dom, inf):
            return False
    return True


# ---------------------------------------------------------------------------
# public operations


def _monoid_of(values: Iterable) -> Monoid | None:
    ms = {v.monoid for v in values}
    if len(ms) > 1:
        a, b = sorted(ms)[:2]
        raise TagMismatch(a, b)
    return next(iter(ms), None)


def enum_inflows_below(in0: Mapping, budget: EnumBudget | None = None) -> list:
    """Every inflow mapping ``in'`` with ``in'(e) ≤ in0(e)`` for each entry.

    Entries whose chosen value is zero are left out of the mapping.
    """
    budget = budget or EnumBudget()
    monoid = _monoid_of(in0.values())
    if monoid is None:
        return [{}]
    dom = _Domain(monoid, budget)
    explicit = {e: dom.value(v) for e, v in in0.items()}
    out = []
    for choice in _explicit_below(explicit, dom):
        out.append({e: dom.back(v) for e, v in choice.items() if v != dom.zero})
    return out


def oracle_flow(h: FlowGraph, budget: EnumBudget | None = None) -> dict:
    """Least flow of ``h``, with keysets projected onto the budget's universe."""
    budget = _budget_for(budget, h)
    dom = _Domain(h.monoid, budget)
    return {x: dom.back(v) for x, v in _flow(_explicit(h, dom), dom).items()}


def oracle_outflow(h: FlowGraph, inflow: Mapping | None = None,
                   budget: EnumBudget | None = None) -> dict:
    """Outflow of ``h`` (or of ``h`` under ``inflow``), projected likewise."""
    budget = _budget_for(budget, h)
    dom = _Domain(h.monoid, budget)
    g = _explicit(h, dom)
    ein = None
    if inflow is not None:
        ein = {e: dom.value(v) for e, v in inflow.items()}
    return {e: dom.back(v) for e, v in _outflow(g, dom, ein).items()}


def oracle_ctx_equiv(h1: FlowGraph, h2: FlowGraph, budget: EnumBudget | None = None) -> bool:
    """Same nodes, same inflow, same outflow under every inflow below it."""
    if h1.monoid is not h2.monoid:
        raise TagMismatch(h1.monoid, h2.monoid)
    budget = _budget_for(budget, h1, h2)
    dom = _Domain(h1.monoid, budget)
    return _ctx_equiv(_explicit(h1, dom), _explicit(h2, dom), dom)


def oracle_transfer_equal(h1: FlowGraph, h2: FlowGraph, budget: EnumBudget | None = None) -> bool:
    """Equal outflow for every inflow, not just those below the current one.

    Each node gets one inflow entry from a synthetic external source, ranging
    over the whole universe.
    """
    if h1.monoid is not h2.monoid:
        raise TagMismatch(h1.monoid, h2.monoid)
    if h1.nodes != h2.nodes:
        return False
    budget = _budget_for(budget, h1, h2)
    dom = _Domain(h1.monoid, budget)
    g1, g2 = _explicit(h1, dom), _explicit(h2, dom)
    used = set(h1.nodes)
    for h in (h1, h2):
        used.update(y for _, y in h.edges)
        used.update(y for y, _ in h.inflow)
    src = max(used, default=0) + 1
    nodes = sorted(h1.nodes)
    values = dom.everything()
    total = len(values) ** len(nodes)
    if total > budget.max_inflows:
        raise OracleInfeasible(f"{total} inflows exceed the budget of {budget.max_inflows}")
    for combo in itertools.product(values, repeat=len(nodes)):
        inf = {(src, x): v for x, v in zip(nodes, combo) if v != dom.zero}
        if _outflow(g1, dom, inf) != _outflow(g2, dom, inf):
            return False
    return True


def _is_footprint(g1: _EGraph, g2: _EGraph, dom: _Domain, y: frozenset) -> bool:
    rest = g1.nodes - y
    if not _same_structure(_restrict(g1, dom, rest), _restrict(g2, dom, rest)):
        return False
    return _ctx_equiv(_restrict(g1, dom, y), _restrict(g2, dom, y), dom)


def _prepare(h1, h2, budget):
    if h1.monoid is not h2.monoid:
        raise TagMismatch(h1.monoid, h2.monoid)
    budget = _budget_for(budget, h1, h2)
    dom = _Domain(h1.monoid, budget)
    return _explicit(h1, dom), _explicit(h2, dom), dom


def oracle_is_footprint(h1: FlowGraph, h2: FlowGraph, candidate: Iterable[int],
                        budget: EnumBudget | None = None) -> bool:
    """Both footprint clauses, checked from the definitions."""
    g1, g2, dom = _prepare(h1, h2, budget)
    if g1.nodes != g2.nodes or g1.inflow != g2.inflow:
        return False
    return _is_footprint(g1, g2, dom, frozenset(candidate))


def oracle_footprints(h1: FlowGraph, h2: FlowGraph, budget: EnumBudget | None = None,
                      max_nodes: int = 5) -> frozenset:
    """Every footprint, by checking all subsets of the node set."""
    g1, g2, dom = _prepare(h1, h2, budget)
    if len(g1.nodes) > max_nodes:
        raise OracleInfeasible(f"{len(g1.nodes)} nodes exceed the subset limit {max_nodes}")
    if g1.nodes != g2.nodes or g1.inflow != g2.inflow:
        return frozenset()
    nodes = sorted(g1.nodes)
    found = set()
    for r in range(len(nodes) + 1):
        for combo in itertools.combinations(nodes, r):
            y = frozenset(combo)
            if _is_footprint(g1, g2, dom, y):
                found.add(y)
    return frozenset(found)


# ---------------------------------------------------------------------------
# separation-algebra laws


LAWS = ("unit", "commutativity", "associativity")


def _try_compose(a: FlowGraph, b: FlowGraph):
    try:
        return compose(a, b)
    except CompositionUndefined:
        return None


@dataclass
class LawReport:
    checked: int = 0
    failures: dict = field(default_factory=lambda: {name: [] for name in LAWS})

    @property
    def ok(self) -> bool:
        return not any(self.failures.values())

    def lines(self, witness_files: Mapping[str, str] | None = None) -> list:
        witness_files = witness_files or {}
        out = []
        for name in LAWS:
            if self.failures[name]:
                out.append(f"LAW {name} FAIL {witness_files.get(name, '-')}")
            else:
                out.append(f"LAW {name} PASS -")
        return out


def check_separation_laws(samples: Iterable[tuple], budget=None) -> LawReport:
    """Unit, commutativity and associativity of composition, definedness included.

    ``samples`` yields triples of graphs over one monoid.  ``budget`` is
    accepted for symmetry with the other checks; the laws need no enumeration.
    """
    report = LawReport()
    for triple in samples:
        report.checked += 1
        h1, h2, h3 = triple
        unit = empty_graph(h1.monoid)
        for h in triple:
            if _try_compose(h, unit) != h or _try_compose(unit, h) != h:
                report.failures["unit"].append((h, unit))
        for a, b in ((h1, h2), (h1, h3), (h2, h3)):
            if _try_compose(a, b) != _try_compose(b, a):
                report.failures["commutativity"].append((a, b))
        ab = _try_compose(h1, h2)
        bc = _try_compose(h2, h3)
        left = _try_compose(ab, h3) if ab is not None else None
        right = _try_compose(h1, bc) if bc is not None else None
        if left != right:
            report.failures["associativity"].append(triple)
    return report
