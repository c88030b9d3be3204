"""Flow monoids and the symbolic edge-function algebras over them.

Three monoids are supported:

* ``COUNTING``: extended naturals with ``+`` (``∞`` absorbing),
* ``KEYSET``: sets of extended integers with union,
* ``MAXCAP``: extended naturals with ``max``.

Edge functions are kept in a closed canonical family per monoid (``Scale``,
``Intersect``, ``Cap``).  Composition and pointwise sum stay inside the
family, so equality of functions, and equality below a bound, can be decided
exactly on the parameters instead of by sampling.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from typing import ClassVar, Iterable, Union

from .errors import TagMismatch

INF = math.inf

ExtInt = Union[int, float]  # an int, or +/- math.inf


class Monoid(str, enum.Enum):
    COUNTING = "counting"
    KEYSET = "keyset"
    MAXCAP = "maxcap"

    @property
    def idempotent(self) -> bool:
        return self is not Monoid.COUNTING

    def __str__(self):
        return self.value


def _ext_nat(n) -> ExtInt:
    if isinstance(n, bool):
        raise TypeError("extended natural expected, got bool")
    if isinstance(n, float):
        if n == INF:
            return INF
        if n.is_integer() and n >= 0:
            return int(n)
        raise ValueError(f"not an extended natural: {n!r}")
    if isinstance(n, int) and n >= 0:
        return n
    raise ValueError(f"not an extended natural: {n!r}")


def _ext_int(k) -> ExtInt:
    if isinstance(k, bool):
        raise TypeError("extended integer expected, got bool")
    if isinstance(k, int):
        return k
    if isinstance(k, float):
        if math.isinf(k):
            return k
        if k.is_integer():
            return int(k)
    raise ValueError(f"not an extended integer: {k!r}")


def _mul(a: ExtInt, b: ExtInt) -> ExtInt:
    # 0 * inf = 0 keeps Scale(0) the zero function
    if a == 0 or b == 0:
        return 0
    return a * b


def _fmt_nat(n: ExtInt) -> str:
    return "∞" if n == INF else str(n)


# ---------------------------------------------------------------------------
# values


class Value:
    """A flow value; concrete subclasses fix the monoid."""

    __slots__ = ()
    monoid: ClassVar[Monoid]

    def __add__(self, other):
        return mon_add(self, other)

    def __le__(self, other):
        return mon_leq(self, other)

    def __ge__(self, other):
        return mon_leq(other, self)

    def __lt__(self, other):
        return mon_leq(self, other) and self != other

    def __gt__(self, other):
        return mon_leq(other, self) and self != other

    def is_zero(self) -> bool:
        return self == zero(self.monoid)


@dataclass(frozen=True, order=False)
class Count(Value):
    n: ExtInt

    monoid: ClassVar[Monoid] = Monoid.COUNTING

    def __post_init__(self):
        object.__setattr__(self, "n", _ext_nat(self.n))

    def __str__(self):
        return _fmt_nat(self.n)


@dataclass(frozen=True, order=False)
class Peak(Value):
    """Element of the max monoid."""

    n: ExtInt

    monoid: ClassVar[Monoid] = Monoid.MAXCAP

    def __post_init__(self):
        object.__setattr__(self, "n", _ext_nat(self.n))

    def __str__(self):
        return _fmt_nat(self.n)


Run = tuple  # (lo, hi) over the integers; lo may be -inf, hi may be +inf


def _normalize_runs(runs: Iterable[Run]) -> tuple:
    merged: list[list] = []
    for a, b in sorted(r for r in runs if r[0] <= r[1]):
        if merged and a <= merged[-1][1] + 1:
            if b > merged[-1][1]:
                merged[-1][1] = b
        else:
            merged.append([a, b])
    return tuple((a, b) for a, b in merged)


_BRACKET = re.compile(
    r"^\s*([\[(])\s*([+-]?(?:\d+|inf|∞))\s*,\s*([+-]?(?:\d+|inf|∞))\s*([\])])\s*$"
)


def _parse_end(tok) -> ExtInt:
    if isinstance(tok, (int, float)) and not isinstance(tok, bool):
        return _ext_int(tok)
    if not isinstance(tok, str):
        raise ValueError(f"bad interval endpoint {tok!r}")
    t = tok.strip().replace("∞", "inf")
    if t in ("inf", "+inf"):
        return INF
    if t == "-inf":
        return -INF
    return int(t)


@dataclass(frozen=True)
class KeySet(Value):
    """A set of extended integers ``ℤ ∪ {-∞, +∞}``.

    Canonical form: ``runs`` are sorted, disjoint, non-adjacent integer
    ranges ``(lo, hi)`` (inclusive; ``lo = -inf`` / ``hi = +inf`` mean the
    range is unbounded), and the two sentinel points are separate flags.
    """

    runs: tuple = ()
    neg_inf: bool = False
    pos_inf: bool = False

    monoid: ClassVar[Monoid] = Monoid.KEYSET

    def __post_init__(self):
        runs = []
        for a, b in self.runs:
            a, b = _ext_int(a), _ext_int(b)
            if a == INF or b == -INF:
                continue
            runs.append((a, b))
        object.__setattr__(self, "runs", _normalize_runs(runs))
        object.__setattr__(self, "neg_inf", bool(self.neg_inf))
        object.__setattr__(self, "pos_inf", bool(self.pos_inf))

    # construction ------------------------------------------------------

    @classmethod
    def empty(cls) -> KeySet:
        return cls()

    @classmethod
    def full(cls) -> KeySet:
        return cls(((-INF, INF),), True, True)

    @classmethod
    def integers(cls) -> KeySet:
        """ℤ without either sentinel."""
        return cls(((-INF, INF),))

    @classmethod
    def interval(cls, lo, hi, lo_open: bool = False, hi_open: bool = False) -> KeySet:
        lo, hi = _parse_end(lo), _parse_end(hi)
        if lo > hi:
            return cls()
        neg = lo == -INF and not lo_open
        pos = hi == INF and not hi_open
        if lo == INF or hi == -INF:
            return cls((), neg, pos)
        a = lo if lo == -INF else (lo + 1 if lo_open else lo)
        b = hi if hi == INF else (hi - 1 if hi_open else hi)
        return cls(((a, b),) if a <= b else (), neg, pos)

    @classmethod
    def closed(cls, lo, hi) -> KeySet:
        return cls.interval(lo, hi)

    @classmethod
    def parse(cls, text: str) -> KeySet:
        """Parse ``"(3,inf]"``-style notation; ``∪`` joins components."""
        text = text.strip()
        if text in ("", "∅", "{}"):
            return cls()
        out = cls()
        for part in re.split(r"∪|\bU\b|\|", text):
            m = _BRACKET.match(part)
            if not m:
                raise ValueError(f"bad interval {part.strip()!r}")
            lb, lo, hi, rb = m.groups()
            out = out.union(cls.interval(lo, hi, lb == "(", rb == ")"))
        return out

    @classmethod
    def of(cls, *parts) -> KeySet:
        """Union of components given as text or inclusive ``(lo, hi)`` pairs."""
        out = cls()
        for p in parts:
            if isinstance(p, str):
                out = out.union(cls.parse(p))
            else:
                lo, hi = p
                out = out.union(cls.interval(lo, hi))
        return out

    @classmethod
    def from_points(cls, points: Iterable[ExtInt]) -> KeySet:
        runs, neg, pos = [], False, False
        for p in points:
            p = _ext_int(p)
            if p == -INF:
                neg = True
            elif p == INF:
                pos = True
            else:
                runs.append((p, p))
        return cls(tuple(runs), neg, pos)

    # set algebra -------------------------------------------------------

    def union(self, other: KeySet) -> KeySet:
        return KeySet(self.runs + other.runs, self.neg_inf or other.neg_inf,
                      self.pos_inf or other.pos_inf)

    def intersection(self, other: KeySet) -> KeySet:
        out = []
        i = j = 0
        a, b = self.runs, other.runs
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return KeySet(tuple(out), self.neg_inf and other.neg_inf,
                      self.pos_inf and other.pos_inf)

    def issubset(self, other: KeySet) -> bool:
        return self.intersection(other) == self

    def __contains__(self, k) -> bool:
        if k == -INF:
            return self.neg_inf
        if k == INF:
            return self.pos_inf
        return any(a <= k <= b for a, b in self.runs)

    def __bool__(self):
        return bool(self.runs) or self.neg_inf or self.pos_inf

    def explicit(self, universe: Iterable[ExtInt]) -> frozenset:
        return frozenset(k for k in universe if k in self)

    def cut_points(self) -> set:
        """Finite run endpoints; the boundaries between key-space atoms."""
        pts = set()
        for a, b in self.runs:
            if a != -INF:
                pts.add(a)
            if b != INF:
                pts.add(b)
        return pts

    # presentation ------------------------------------------------------

    def components(self) -> list:
        """Maximal components as ``(lo, lo_closed, hi, hi_closed)``."""
        comps = []
        neg, pos = self.neg_inf, self.pos_inf
        for i, (a, b) in enumerate(self.runs):
            lo_closed = True
            hi_closed = True
            if a == -INF:
                lo_closed = neg
                neg = False
            if b == INF:
                hi_closed = pos
                pos = False
            comps.append((a, lo_closed, b, hi_closed))
        if neg:
            comps.insert(0, (-INF, True, -INF, True))
        if pos:
            comps.append((INF, True, INF, True))
        return comps

    def __str__(self):
        if not self:
            return "∅"

        def end(v):
            return "-∞" if v == -INF else ("∞" if v == INF else str(v))

        parts = []
        for lo, lc, hi, hc in self.components():
            if lo == hi and lc and hc:
                parts.append("{" + end(lo) + "}")
            else:
                parts.append(f"{'[' if lc else '('}{end(lo)},{end(hi)}{']' if hc else ')'}")
        return " ∪ ".join(parts)


def zero(monoid: Monoid) -> Value:
    if monoid is Monoid.COUNTING:
        return Count(0)
    if monoid is Monoid.MAXCAP:
        return Peak(0)
    return KeySet()


def top(monoid: Monoid) -> Value:
    """The greatest element (all three carriers have one)."""
    if monoid is Monoid.COUNTING:
        return Count(INF)
    if monoid is Monoid.MAXCAP:
        return Peak(INF)
    return KeySet.full()


def _check_same(a, b):
    if a.monoid is not b.monoid:
        raise TagMismatch(a.monoid, b.monoid)


def mon_add(a: Value, b: Value) -> Value:
    _check_same(a, b)
    if isinstance(a, Count):
        return Count(a.n + b.n)
    if isinstance(a, Peak):
        return Peak(max(a.n, b.n))
    return a.union(b)


def mon_sum(monoid: Monoid, values: Iterable[Value]) -> Value:
    acc = zero(monoid)
    for v in values:
        acc = mon_add(acc, v)
    return acc


def mon_leq(a: Value, b: Value) -> bool:
    """The order induced by addition: ``a ≤ b`` iff ``b = a + o`` for some ``o``."""
    _check_same(a, b)
    if isinstance(a, KeySet):
        return a.issubset(b)
    return a.n <= b.n


# ---------------------------------------------------------------------------
# edge functions


class EdgeFn:
    __slots__ = ()
    monoid: ClassVar[Monoid]

    def __call__(self, m: Value) -> Value:
        return fn_apply(self, m)

    def then(self, g: EdgeFn) -> EdgeFn:
        return fn_compose(self, g)

    def __add__(self, g):
        return fn_sum(self, g)

    def is_zero(self) -> bool:
        raise NotImplementedError

    @property
    def decreasing(self) -> bool:
        return True


@dataclass(frozen=True)
class Scale(EdgeFn):
    """``m ↦ k·m`` on the counting monoid."""

    k: ExtInt

    monoid: ClassVar[Monoid] = Monoid.COUNTING

    def __post_init__(self):
        object.__setattr__(self, "k", _ext_nat(self.k))

    def is_zero(self):
        return self.k == 0

    @property
    def decreasing(self):
        return self.k <= 1

    def __str__(self):
        return f"×{_fmt_nat(self.k)}"


@dataclass(frozen=True)
class Intersect(EdgeFn):
    """``m ↦ m ∩ keys`` on the keyset monoid."""

    keys: KeySet

    monoid: ClassVar[Monoid] = Monoid.KEYSET

    def __post_init__(self):
        if not isinstance(self.keys, KeySet):
            raise TypeError("Intersect needs a KeySet")

    def is_zero(self):
        return not self.keys

    def __str__(self):
        return f"∩{self.keys}"


@dataclass(frozen=True)
class Cap(EdgeFn):
    """``m ↦ min(m, c)`` on the max monoid."""

    c: ExtInt

    monoid: ClassVar[Monoid] = Monoid.MAXCAP

    def __post_init__(self):
        object.__setattr__(self, "c", _ext_nat(self.c))

    def is_zero(self):
        return self.c == 0

    def __str__(self):
        return f"min·{_fmt_nat(self.c)}"


def zero_fn(monoid: Monoid) -> EdgeFn:
    if monoid is Monoid.COUNTING:
        return Scale(0)
    if monoid is Monoid.MAXCAP:
        return Cap(0)
    return Intersect(KeySet())


def identity_fn(monoid: Monoid) -> EdgeFn:
    if monoid is Monoid.COUNTING:
        return Scale(1)
    if monoid is Monoid.MAXCAP:
        return Cap(INF)
    return Intersect(KeySet.full())


def lam(k) -> Intersect:
    """The keyset edge label that drops every key ``≤ k`` (``k`` may be ``-inf``)."""
    k = _parse_end(k)
    if k == -INF:
        return Intersect(KeySet(((-INF, INF),), False, True))
    if k == INF:
        return Intersect(KeySet())
    return Intersect(KeySet(((k + 1, INF),), False, True))


def fn_apply(f: EdgeFn, m: Value) -> Value:
    _check_same(f, m)
    if isinstance(f, Scale):
        return Count(_mul(f.k, m.n))
    if isinstance(f, Cap):
        return Peak(min(m.n, f.c))
    return m.intersection(f.keys)


def fn_compose(f: EdgeFn, g: EdgeFn) -> EdgeFn:
    """The function applying ``f`` first, then ``g``."""
    _check_same(f, g)
    if isinstance(f, Scale):
        return Scale(_mul(f.k, g.k))
    if isinstance(f, Cap):
        return Cap(min(f.c, g.c))
    return Intersect(f.keys.intersection(g.keys))


def fn_sum(f: EdgeFn, g: EdgeFn) -> EdgeFn:
    _check_same(f, g)
    if isinstance(f, Scale):
        return Scale(f.k + g.k)
    if isinstance(f, Cap):
        return Cap(max(f.c, g.c))
    return Intersect(f.keys.union(g.keys))


def fn_sum_all(monoid: Monoid, fns: Iterable[EdgeFn]) -> EdgeFn:
    acc = zero_fn(monoid)
    for f in fns:
        acc = fn_sum(acc, f)
    return acc


def fn_leq(f: EdgeFn, g: EdgeFn) -> bool:
    """Pointwise order ``f ≤ g``, decided on the parameters."""
    _check_same(f, g)
    if isinstance(f, Scale):
        return f.k <= g.k
    if isinstance(f, Cap):
        return f.c <= g.c
    return f.keys.issubset(g.keys)


def fn_eq_below(f: EdgeFn, g: EdgeFn, bound: Value) -> bool:
    """Whether ``f(m) = g(m)`` for every ``m ≤ bound``."""
    _check_same(f, g)
    _check_same(f, bound)
    if isinstance(f, Scale):
        # any nonzero bound admits m = 1 (or m = bound), which separates k1 != k2
        return bound.n == 0 or f.k == g.k
    if isinstance(f, Cap):
        return min(f.c, bound.n) == min(g.c, bound.n)
    return f.keys.intersection(bound) == g.keys.intersection(bound)


@dataclass(frozen=True)
class FnClass:
    distributive: bool
    decreasing: bool
    idempotent_addition: bool


def fn_class(monoid: Monoid, fns: Iterable[EdgeFn]) -> FnClass:
    return FnClass(
        distributive=True,
        decreasing=all(f.decreasing for f in fns),
        idempotent_addition=monoid.idempotent,
    )
