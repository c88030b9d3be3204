"""Flow graphs over counting, keyset and max monoids, and footprints of their updates."""

from .errors import *  # noqa: F401,F403
from .footprint import (
    TOP,
    FootprintResult,
    Method,
    compute_footprint,
    contextually_equivalent,
    extend_step,
    transfer_failure,
    verify_footprint,
)
from .graph import (
    FlowGraph,
    compose,
    composable,
    compute_flow,
    disjoint_union,
    empty_graph,
    inflow_at,
    kleene_flow,
    mk_graph,
    out_diff,
    outflow,
    restrict,
    transfer_eval,
)
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
    fn_compose,
    fn_eq_below,
    fn_leq,
    fn_sum,
    identity_fn,
    lam,
    mon_add,
    mon_leq,
    top,
    zero,
    zero_fn,
)
from .paths import (
    closed_form_transfer,
    enum_paths,
    enum_simple_paths,
    path_fn,
    path_replacement_holds,
    simple_path_transfer,
    source_summaries,
)
from .serialize import Instance, load_instance, parse_instance, serialize_instance

__version__ = "0.1.0"
