"""Hand-built graphs from the worked examples (path counting, keysets, max).

Node numbering is fixed here and mirrored by the shipped JSON fixtures; the
``NAMES`` dictionaries map ids back to the letters used in the figures.
"""

from __future__ import annotations

from .graph import FlowGraph
from .monoid import INF, Cap, Count, KeySet, Monoid, Peak, Scale, lam

ID = Scale(1)

# path counting: r x y z u v, plus an external root source
R, X, Y, Z, U, V = range(6)
ROOT = 100
COUNTING_NAMES = {R: "r", X: "x", Y: "y", Z: "z", U: "u", V: "v", ROOT: "root"}


def fig1a() -> tuple[FlowGraph, FlowGraph]:
    """The two components whose composition is the six-node counting graph."""
    h1 = FlowGraph(
        Monoid.COUNTING,
        {X, Y, Z},
        {(X, Y): ID, (X, Z): ID, (Z, U): ID},
        {(R, X): Count(1), (R, Y): Count(1)},
    )
    h2 = FlowGraph(
        Monoid.COUNTING,
        {R, U, V},
        {(R, X): ID, (R, Y): ID, (U, V): ID},
        {(ROOT, R): Count(1), (Z, U): Count(1)},
    )
    return h1, h2


# vanishing flows: u x | v w
VU, VX, VV, VW = range(6, 10)
VANISH_NAMES = {VU: "u", VX: "x", VV: "v", VW: "w"}


def fig1b() -> tuple[FlowGraph, FlowGraph]:
    """Two components that each see flow 1 but close an unfed cycle."""
    h1 = FlowGraph(
        Monoid.COUNTING,
        {VU, VX},
        {(VX, VU): ID, (VU, VV): ID},
        {(VW, VX): Count(1)},
    )
    h2 = FlowGraph(
        Monoid.COUNTING,
        {VV, VW},
        {(VV, VW): ID, (VW, VX): ID},
        {(VU, VV): Count(1)},
    )
    return h1, h2


def fig3() -> tuple[FlowGraph, FlowGraph]:
    """The counting graph before and after inserting an edge r -> u."""
    edges = {(R, X): ID, (R, Y): ID, (U, V): ID, (X, Y): ID, (X, Z): ID, (Z, U): ID}
    inflow = {(ROOT, R): Count(1)}
    nodes = {R, X, Y, Z, U, V}
    before = FlowGraph(Monoid.COUNTING, nodes, edges, inflow)
    after = FlowGraph(Monoid.COUNTING, nodes, {**edges, (R, U): ID}, inflow)
    return before, after


# keyset list: l t r, entered from u, left towards v
KL, KT, KR = range(3)
KU, KV = 10, 11
KEYSET_NAMES = {KL: "l", KT: "t", KR: "r", KU: "u", KV: "v"}
FIG2_INFLOW = KeySet.parse("(3,inf]")


def fig2() -> tuple[FlowGraph, FlowGraph]:
    """Unlinking the marked node t between l (key 6) and r (key 8)."""
    inflow = {(KU, KL): FIG2_INFLOW}
    nodes = {KL, KT, KR}
    before = FlowGraph(
        Monoid.KEYSET, nodes,
        {(KL, KT): lam(6), (KT, KR): lam(-INF), (KR, KV): lam(8)}, inflow,
    )
    after = FlowGraph(
        Monoid.KEYSET, nodes,
        {(KL, KR): lam(6), (KT, KR): lam(-INF), (KR, KV): lam(8)}, inflow,
    )
    return before, after


# max monoid incompleteness witness: x y z u, entered at x, left from y to v
MX, MY, MZ, MU = range(4)
MIN_, MV = 10, 11
MAX_NAMES = {MX: "x", MY: "y", MZ: "z", MU: "u", MIN_: "in", MV: "v"}
FIG4_K = 5


def fig4(k: int = FIG4_K) -> tuple[FlowGraph, FlowGraph]:
    ident = Cap(INF)
    inflow = {(MIN_, MX): Peak(k)}
    nodes = {MX, MY, MZ, MU}
    shared = {(MZ, MU): ident, (MU, MY): ident, (MY, MV): ident, (MY, MZ): ident}
    before = FlowGraph(Monoid.MAXCAP, nodes, {**shared, (MX, MZ): ident}, inflow)
    after = FlowGraph(Monoid.MAXCAP, nodes, {**shared, (MX, MY): ident}, inflow)
    return before, after
