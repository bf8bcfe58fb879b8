"""Hypothesis strategies shared across the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from tempex.core import SpanningTree, TemporalGraph


@st.composite
def spanning_trees(draw, min_n: int = 2, max_n: int = 8) -> SpanningTree:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    edges = set()
    for child in range(1, n):
        parent = draw(st.integers(min_value=0, max_value=child - 1))
        edges.add((parent, child))
    return SpanningTree(n, frozenset(edges))


@st.composite
def temporal_graphs(
    draw,
    min_n: int = 2,
    max_n: int = 7,
    min_lifetime: int = 1,
    max_lifetime: int = 8,
) -> TemporalGraph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    lifetime = draw(st.integers(min_value=min_lifetime, max_value=max_lifetime))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    snapshots = [
        draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
        for _ in range(lifetime)
    ]
    return TemporalGraph.build(n, snapshots)
