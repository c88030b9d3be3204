import random

import pytest

from flowfoot.errors import (
    CyclicGraph,
    ExitNotBoundary,
    NodeOutside,
    NodeSetMismatch,
    NotAPath,
    RequiresIdempotent,
)
from flowfoot.figures import KL, KR, KT, KV, R, U, X, Y, Z, fig2, fig3
from flowfoot.generate import random_graph
from flowfoot.graph import FlowGraph, transfer_eval
from flowfoot.monoid import Count, Intersect, KeySet, Monoid, Scale, lam
from flowfoot.paths import (
    closed_form_transfer,
    enum_paths,
    enum_simple_paths,
    path_fn,
    path_replacement_holds,
    require_simple_paths_exact,
    simple_path_transfer,
    source_summaries,
    summary_transfer,
    transfer_equal,
)

EXT_OUT = 50


def _counting_dfs(h, x, exit_):
    """Independent path count: plain recursion over successors."""
    y, z = exit_

    def walk(n):
        total = 1 if n == y else 0
        return total + sum(walk(s) for s in h.successors(n) if s in h.nodes)

    return walk(x)


def test_path_fn_fig2():
    before, _ = fig2()
    assert path_fn(before, (KL, KT, KR, KV)) == lam(8)
    with pytest.raises(NotAPath):
        path_fn(before, (KL, KR, KV))
    with pytest.raises(NotAPath):
        path_fn(before, (KL, KT))


def test_enum_paths_fig3_restricted():
    before, _ = fig3()
    h = before.restrict({R, X, Y, Z})
    res = enum_paths(h, R, (Z, U))
    assert res.paths == {(R, X, Z, U)} and res.complete
    with pytest.raises(ExitNotBoundary):
        enum_paths(h, R, (R, X))
    with pytest.raises(NodeOutside):
        enum_paths(h, U, (Z, U))


def test_enum_paths_on_cycles_is_bounded():
    h = FlowGraph(Monoid.KEYSET, {0, 1}, {(0, 1): lam(1), (1, 0): lam(2), (1, EXT_OUT): lam(3)})
    res = enum_paths(h, 0, (1, EXT_OUT), max_len=6)
    assert not res.complete
    assert (0, 1, EXT_OUT) in res.paths and (0, 1, 0, 1, EXT_OUT) in res.paths
    assert enum_simple_paths(h, 0, (1, EXT_OUT)) == {(0, 1, EXT_OUT)}


def test_path_counts_match_dfs():
    rng = random.Random("count")
    for _ in range(100):
        h = random_graph(rng, Monoid.COUNTING, rng.randint(1, 6), acyclic=True, decreasing=True)
        for x in h.nodes:
            for ex in h.boundary_edges:
                assert len(enum_paths(h, x, ex).paths) == _counting_dfs(h, x, ex)


def test_closed_form_requires_acyclic():
    h = FlowGraph(Monoid.KEYSET, {0, 1}, {(0, 1): lam(1), (1, 0): lam(2)})
    with pytest.raises(CyclicGraph):
        closed_form_transfer(h, {})


def test_simple_paths_gates():
    cyc = {(0, 1): Scale(1), (1, 0): Scale(1), (1, EXT_OUT): Scale(1)}
    h = FlowGraph(Monoid.COUNTING, {0, 1}, cyc)
    with pytest.raises(RequiresIdempotent):
        simple_path_transfer(h, {})
    grow = FlowGraph(Monoid.COUNTING, {0, 1}, {(0, 1): Scale(2), (1, EXT_OUT): Scale(1)})
    assert simple_path_transfer(grow, {(9, 0): Count(1)}) == {(1, EXT_OUT): Count(2)}
    # idempotence is checked first; every keyset and max function is decreasing
    with pytest.raises(RequiresIdempotent):
        require_simple_paths_exact(FlowGraph(Monoid.COUNTING, {0}, {(0, 0): Scale(2)}))


def test_keyset_cycle_simple_paths():
    h = FlowGraph(Monoid.KEYSET, {0, 1},
                  {(0, 1): lam(1), (1, 0): Intersect(KeySet.closed(0, 9)), (1, EXT_OUT): lam(3)})
    inflow = {(9, 0): KeySet.integers(), (9, 1): KeySet.closed(-5, 5)}
    assert simple_path_transfer(h, inflow) == transfer_eval(h, inflow)


@pytest.mark.parametrize("monoid", list(Monoid))
def test_summaries_recombine(monoid):
    rng = random.Random(f"summ:{monoid}")
    for _ in range(80):
        acyclic = monoid is Monoid.COUNTING or rng.random() < 0.5
        h = random_graph(rng, monoid, rng.randint(1, 5), acyclic=acyclic)
        mode = "all" if acyclic else "simple"
        assert summary_transfer(h, h.inflow, mode) == h.outflow
        summaries = source_summaries(h, mode)
        assert set(summaries) == {(x, e) for x in h.nodes for e in h.boundary_edges}


def test_path_replacement_fig2():
    before, after = fig2()
    # l -> t -> r -> v and l -> r -> v both reduce to λ_8
    assert path_replacement_holds(before, after, sources={KL}, mode="simple")
    assert transfer_equal(before, after)
    assert transfer_equal(before, after, mode="all")


def test_path_replacement_errors():
    b3, a3 = fig3()
    with pytest.raises(RequiresIdempotent):
        path_replacement_holds(b3, a3)
    before, _ = fig2()
    with pytest.raises(NodeSetMismatch):
        path_replacement_holds(before, before.restrict({KL}))


def test_dominated_shortcut_keeps_transfer():
    h = FlowGraph(Monoid.KEYSET, {0, 1, 2},
                  {(0, 1): lam(2), (1, 2): lam(4), (2, EXT_OUT): lam(0)})
    h2 = FlowGraph(Monoid.KEYSET, {0, 1, 2}, {**h.edges, (0, 2): lam(5)})
    assert transfer_equal(h, h2)
    h3 = FlowGraph(Monoid.KEYSET, {0, 1, 2}, {**h.edges, (0, 2): lam(3)})
    assert not transfer_equal(h, h3)
    assert path_replacement_holds(h3, h, sources=[]) is True

