"""Hypothesis strategies for values and edge functions."""

from hypothesis import strategies as st

from flowfoot.monoid import INF, Cap, Count, Intersect, KeySet, Peak, Scale

ext_nat = st.one_of(st.integers(0, 6), st.just(INF))
end = st.one_of(st.integers(-3, 10), st.sampled_from([-INF, INF]))


@st.composite
def keysets(draw, max_parts=3):
    out = KeySet()
    for _ in range(draw(st.integers(0, max_parts))):
        a, b = sorted((draw(end), draw(end)))
        out = out.union(KeySet.interval(a, b, draw(st.booleans()), draw(st.booleans())))
    return out


counts = ext_nat.map(Count)
peaks = ext_nat.map(Peak)
scales = ext_nat.map(Scale)
caps = ext_nat.map(Cap)
intersects = keysets().map(Intersect)

KEYS = (-INF, *range(-3, 11), INF)
