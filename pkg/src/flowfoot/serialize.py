"""JSON encoding of values, edge functions, graphs and update instances.

See ``docs/format.md`` for the file format.  Parsing is strict: unknown or
duplicate fields are errors, and every error carries the JSON path of the
offending element (plus the line number for syntax errors).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping

from .errors import FlowError, ParseError, PreconditionViolation
from .graph import FlowGraph
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
)


@dataclass(frozen=True)
class Instance:
    """A before/after pair over the same nodes and inflow."""

    monoid: Monoid
    before: FlowGraph
    after: FlowGraph
    label: str = ""
    names: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.before.nodes != self.after.nodes:
            raise PreconditionViolation(f"{self.label}: before and after have different nodes")
        if self.before.inflow != self.after.inflow:
            raise PreconditionViolation(f"{self.label}: before and after have different inflows")

    def name(self, node: int) -> str:
        return self.names.get(node, str(node))


@dataclass(frozen=True)
class GraphSet:
    """Named graphs over one monoid, e.g. the parts of a composition."""

    monoid: Monoid
    graphs: Mapping[str, FlowGraph]
    label: str = ""
    names: Mapping[int, str] = field(default_factory=dict, compare=False)


# ---------------------------------------------------------------------------
# encoding


def _enc_nat(n) -> Any:
    return "inf" if n == INF else n


def _enc_end(v) -> str:
    if v == INF:
        return "inf"
    if v == -INF:
        return "-inf"
    return str(v)


def encode_keyset(ks: KeySet) -> list:
    out = []
    for lo, lc, hi, hc in ks.components():
        out.append(f"{'[' if lc else '('}{_enc_end(lo)},{_enc_end(hi)}{']' if hc else ')'}")
    return out


def encode_value(v: Value) -> Any:
    if isinstance(v, KeySet):
        return encode_keyset(v)
    return _enc_nat(v.n)


def encode_fn(f: EdgeFn) -> dict:
    if isinstance(f, Scale):
        return {"kind": "scale", "k": _enc_nat(f.k)}
    if isinstance(f, Cap):
        return {"kind": "cap", "c": _enc_nat(f.c)}
    return {"kind": "intersect", "keys": encode_keyset(f.keys)}


def encode_graph(h: FlowGraph) -> dict:
    return {
        "nodes": sorted(h.nodes),
        "edges": [
            {"from": x, "to": y, "fn": encode_fn(f)} for (x, y), f in sorted(h.edges.items())
        ],
        "inflow": [
            {"from": y, "to": x, "value": encode_value(v)} for (y, x), v in sorted(h.inflow.items())
        ],
    }


def _header(monoid, label, names) -> dict:
    doc: dict = {"monoid": monoid.value, "label": label}
    if names:
        doc["names"] = {str(k): v for k, v in sorted(names.items())}
    return doc


def instance_to_dict(inst: Instance) -> dict:
    doc = _header(inst.monoid, inst.label, inst.names)
    doc["before"] = encode_graph(inst.before)
    doc["after"] = encode_graph(inst.after)
    return doc


def serialize_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=2, ensure_ascii=False) + "\n"


def serialize_graph_set(gs: GraphSet) -> str:
    doc = _header(gs.monoid, gs.label, gs.names)
    doc["graphs"] = {k: encode_graph(h) for k, h in gs.graphs.items()}
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# decoding


def _no_dupes(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ValueError(f"duplicate field {k!r}")
        out[k] = v
    return out


def _load(text: str | bytes) -> Any:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseError(f"not UTF-8: {e.reason}") from None
    try:
        return json.loads(text, object_pairs_hook=_no_dupes)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, line=e.lineno) from None
    except ValueError as e:
        raise ParseError(str(e)) from None


class _Reader:
    """Decodes one document, tracking the JSON path for error messages."""

    def __init__(self, monoid: Monoid | None = None):
        self.monoid = monoid

    def fail(self, where: str, reason: str):
        raise ParseError(reason, where=where)

    def obj(self, d, where, required, optional=()):
        if not isinstance(d, dict):
            self.fail(where, "expected an object")
        unknown = set(d) - set(required) - set(optional)
        if unknown:
            self.fail(where, f"unknown field(s) {sorted(unknown)}")
        missing = [k for k in required if k not in d]
        if missing:
            self.fail(where, f"missing field(s) {missing}")
        return d

    def node(self, v, where) -> int:
        if isinstance(v, bool) or not isinstance(v, int):
            self.fail(where, f"node ids are integers, got {v!r}")
        return v

    def nat(self, v, where):
        if v == "inf":
            return INF
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            self.fail(where, f"expected a natural number or \"inf\", got {v!r}")
        return v

    def keyset(self, v, where) -> KeySet:
        if not isinstance(v, list):
            self.fail(where, "a keyset is a list of intervals")
        out = KeySet()
        for i, part in enumerate(v):
            w = f"{where}[{i}]"
            try:
                if isinstance(part, str):
                    out = out.union(KeySet.parse(part))
                elif isinstance(part, list) and len(part) == 2:
                    out = out.union(KeySet.interval(*part))
                else:
                    self.fail(w, "expected \"[lo,hi]\" text or a [lo, hi] pair")
            except (ValueError, TypeError) as e:
                self.fail(w, str(e))
        return out

    def value(self, v, where) -> Value:
        if self.monoid is Monoid.KEYSET:
            return self.keyset(v, where)
        n = self.nat(v, where)
        return Count(n) if self.monoid is Monoid.COUNTING else Peak(n)

    def fn(self, d, where) -> EdgeFn:
        if not isinstance(d, dict) or "kind" not in d:
            self.fail(where, "an edge function is an object with a \"kind\"")
        kind = d["kind"]
        expected = {Monoid.COUNTING: "scale", Monoid.KEYSET: "intersect", Monoid.MAXCAP: "cap"}
        if kind != expected[self.monoid]:
            self.fail(where, f"kind {kind!r} does not belong to the {self.monoid} monoid")
        if kind == "scale":
            self.obj(d, where, ("kind", "k"))
            return Scale(self.nat(d["k"], f"{where}.k"))
        if kind == "cap":
            self.obj(d, where, ("kind", "c"))
            return Cap(self.nat(d["c"], f"{where}.c"))
        self.obj(d, where, ("kind", "keys"))
        return Intersect(self.keyset(d["keys"], f"{where}.keys"))

    def graph(self, d, where) -> FlowGraph:
        self.obj(d, where, ("nodes", "edges"), ("inflow",))
        for key in ("nodes", "edges", "inflow"):
            if key in d and not isinstance(d[key], list):
                self.fail(f"{where}.{key}", "expected a list")
        nodes = [self.node(v, f"{where}.nodes[{i}]") for i, v in enumerate(d["nodes"])]
        if len(set(nodes)) != len(nodes):
            self.fail(f"{where}.nodes", "duplicate node id")
        edges: dict = {}
        for i, e in enumerate(d["edges"]):
            w = f"{where}.edges[{i}]"
            self.obj(e, w, ("from", "to", "fn"))
            key = (self.node(e["from"], f"{w}.from"), self.node(e["to"], f"{w}.to"))
            if key in edges:
                self.fail(w, f"duplicate edge {key}")
            edges[key] = self.fn(e["fn"], f"{w}.fn")
        inflow: dict = {}
        for i, e in enumerate(d.get("inflow", [])):
            w = f"{where}.inflow[{i}]"
            self.obj(e, w, ("from", "to", "value"))
            key = (self.node(e["from"], f"{w}.from"), self.node(e["to"], f"{w}.to"))
            if key in inflow:
                self.fail(w, f"duplicate inflow entry {key}")
            inflow[key] = self.value(e["value"], f"{w}.value")
        try:
            return FlowGraph(self.monoid, nodes, edges, inflow)
        except FlowError as e:
            self.fail(where, str(e))

    def header(self, doc, body_fields):
        self.obj(doc, "$", ("monoid", *body_fields), ("label", "names"))
        try:
            self.monoid = Monoid(doc["monoid"])
        except ValueError:
            self.fail("$.monoid", f"unknown monoid {doc['monoid']!r}")
        label = doc.get("label", "")
        if not isinstance(label, str):
            self.fail("$.label", "expected a string")
        names = {}
        raw = doc.get("names", {})
        if not isinstance(raw, dict):
            self.fail("$.names", "expected an object")
        for k, v in raw.items():
            try:
                names[int(k)] = str(v)
            except ValueError:
                self.fail(f"$.names.{k}", "names are keyed by node id")
        return label, names


def parse_instance(data: str | bytes) -> Instance:
    """Strictly parse an instance document."""
    doc = _load(data)
    r = _Reader()
    label, names = r.header(doc, ("before", "after"))
    before = r.graph(doc["before"], "$.before")
    after = r.graph(doc["after"], "$.after")
    return Instance(r.monoid, before, after, label, names)


def parse_graph_set(data: str | bytes) -> GraphSet:
    doc = _load(data)
    r = _Reader()
    label, names = r.header(doc, ("graphs",))
    if not isinstance(doc["graphs"], dict):
        r.fail("$.graphs", "expected an object of named graphs")
    graphs = {k: r.graph(g, f"$.graphs.{k}") for k, g in doc["graphs"].items()}
    return GraphSet(r.monoid, graphs, label, names)


def load_instance(path) -> Instance:
    with open(path, "rb") as fh:
        return parse_instance(fh.read())


def load_graph_set(path) -> GraphSet:
    with open(path, "rb") as fh:
        return parse_graph_set(fh.read())


def graph_from_dict(monoid: Monoid | str, d: dict) -> FlowGraph:
    return _Reader(Monoid(monoid)).graph(d, "$")
