from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from tempex.core import SpanningTree, TemporalGraph

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


E1_TREE_EDGES = frozenset({(0, 1), (1, 2)})


@pytest.fixture
def path3_tree() -> SpanningTree:
    return SpanningTree(3, E1_TREE_EDGES)


@pytest.fixture
def path3_full(path3_tree) -> TemporalGraph:
    """Three-vertex path with both tree edges present in every snapshot."""
    return TemporalGraph.build(3, [[(0, 1), (1, 2)]] * 8)
