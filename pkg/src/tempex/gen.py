"""Seeded generators of k-edge-deficient temporal-graph instances.

Every generated instance comes with the spanning tree that witnesses its
deficiency: each snapshot is the tree minus at most k tree edges, plus
optional extra edges and (depending on the connectivity mode) bridging edges
that reconnect the snapshot without touching the deficiency count.

Randomness is splitmix64 throughout: the tree structure uses child stream 0
of the seed and snapshot t uses child stream t, so outputs are a pure
function of (spec, seed).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .core import Edge, SpanningTree, TemporalGraph, canonical_edge
from .rng import SplitMix64, stream
from .roundabout import RoundaboutState, eliminate_redundant, movement_step
from .tour import build_dfs_tour

TREE_SHAPES = ("path", "star", "random")
CONNECTIVITY_MODES = ("per-snapshot", "delta-only", "none")

_BRIDGE_RETRIES = 16


@dataclass(frozen=True)
class GenSpec:
    n: int
    lifetime: int
    k: int
    seed: int
    tree_shape: str = "path"
    connectivity: str = "per-snapshot"
    delta: Optional[int] = None
    extra_edge_rate: float = 0.0

    def __post_init__(self) -> None:
        if self.n < 1 or self.lifetime < 1:
            raise ValueError("need n >= 1 and lifetime >= 1")
        if not (0 <= self.k <= self.n - 1):
            raise ValueError(f"k must be in [0, {self.n - 1}]")
        if self.tree_shape not in TREE_SHAPES:
            raise ValueError(f"unknown tree shape {self.tree_shape!r}")
        if self.connectivity not in CONNECTIVITY_MODES:
            raise ValueError(f"unknown connectivity mode {self.connectivity!r}")
        if not (0.0 <= self.extra_edge_rate <= 1.0):
            raise ValueError("extra_edge_rate must be in [0, 1]")
        if self.connectivity == "delta-only":
            if self.delta is None:
                raise ValueError("delta-only connectivity needs delta")
            if self.delta < self.n - 1:
                raise ValueError("delta-only connectivity needs delta >= n-1")


@dataclass(frozen=True)
class GenResult:
    graph: TemporalGraph
    tree: SpanningTree
    fallbacks: int


def _build_tree(shape: str, n: int, rng: SplitMix64) -> SpanningTree:
    if shape == "path":
        edges = {(i, i + 1) for i in range(n - 1)}
    elif shape == "star":
        edges = {(0, i) for i in range(1, n)}
    else:
        edges = {canonical_edge(rng.below(i), i) for i in range(1, n)}
    return SpanningTree(n, frozenset(edges))


def _components(n: int, adjacency: dict[int, tuple[int, ...]], removed: set[Edge]) -> list[int]:
    label = [-1] * n
    comp = 0
    for v0 in range(n):
        if label[v0] != -1:
            continue
        queue = [v0]
        label[v0] = comp
        while queue:
            u = queue.pop()
            for w in adjacency[u]:
                if label[w] == -1 and canonical_edge(u, w) not in removed:
                    label[w] = comp
                    queue.append(w)
        comp += 1
    return label


def _bridge(
    removed_edge: Edge,
    label: list[int],
    members: dict[int, list[int]],
    removed: set[Edge],
    rng: SplitMix64,
) -> Optional[Edge]:
    """One edge joining the two components split by removed_edge; None if impossible."""
    left = members[label[removed_edge[0]]]
    right = members[label[removed_edge[1]]]
    for _ in range(_BRIDGE_RETRIES):
        a = left[rng.below(len(left))]
        b = right[rng.below(len(right))]
        e = canonical_edge(a, b)
        if e not in removed:
            return e
    for a in left:
        for b in right:
            e = canonical_edge(a, b)
            if e not in removed:
                return e
    return None


def _draw_removal(rng: SplitMix64, tree_edges: list[Edge], k: int) -> list[Edge]:
    if k == 0:
        return []
    count = rng.below(k + 1)
    chosen: set[int] = set()
    while len(chosen) < count:
        chosen.add(rng.below(len(tree_edges)))
    return [tree_edges[i] for i in sorted(chosen)]


def _ensure_tree_in_underlying(
    snapshots: list[list[Edge]], tree: SpanningTree
) -> None:
    """Any tree edge missing from every snapshot goes into the last one.

    Adding a tree edge only lowers that snapshot's deficiency, so the witness
    property is preserved while the tree stays a subgraph of the underlying
    graph.
    """
    present: set[Edge] = set()
    for snap in snapshots:
        present.update(snap)
    for e in sorted(tree.edges - present):
        snapshots[-1].append(e)


def _bridged_positions(spec: GenSpec) -> Optional[set[int]]:
    """Snapshot indices that must be connected, or None for all of them.

    In delta-only mode runs of n-1 consecutive connected snapshots are placed
    so that every window of `delta` steps contains one whole run, which makes
    the instance delta-temporally connected while leaving the other snapshots
    free to be disconnected.
    """
    if spec.connectivity == "per-snapshot":
        return None
    if spec.connectivity == "none":
        return set()
    assert spec.delta is not None
    run = spec.n - 1
    stride = spec.delta - run + 1
    positions: set[int] = set()
    start = 1
    while start + run - 1 <= spec.lifetime:
        positions.update(range(start, start + run))
        start += stride
    return positions


def gen_random_deficient(spec: GenSpec) -> GenResult:
    """Random instance whose every snapshot is k-deficient w.r.t. the witness tree."""
    tree = _build_tree(spec.tree_shape, spec.n, stream(spec.seed, 0))
    tree_edges = sorted(tree.edges)
    adjacency = tree.adjacency()
    non_tree = [
        (u, v)
        for u in range(spec.n)
        for v in range(u + 1, spec.n)
        if (u, v) not in tree.edges
    ]
    bridged = _bridged_positions(spec)
    fallbacks = 0
    snapshots: list[list[Edge]] = []
    for t in range(1, spec.lifetime + 1):
        rng = stream(spec.seed, t)
        removed = set(_draw_removal(rng, tree_edges, spec.k))
        edges = set(tree.edges - removed)
        if spec.extra_edge_rate > 0.0:
            for pair in non_tree:
                if rng.chance(spec.extra_edge_rate):
                    edges.add(pair)
        if removed and (bridged is None or t in bridged):
            label = _components(spec.n, adjacency, removed)
            members: dict[int, list[int]] = {}
            for v, c in enumerate(label):
                members.setdefault(c, []).append(v)
            for e in sorted(removed):
                bridge = _bridge(e, label, members, removed, rng)
                if bridge is None:
                    edges.add(e)  # cannot reconnect otherwise; keep the tree edge
                    fallbacks += 1
                else:
                    edges.add(bridge)
        snapshots.append(sorted(edges))
    _ensure_tree_in_underlying(snapshots, tree)
    return GenResult(TemporalGraph.build(spec.n, snapshots), tree, fallbacks)


def gen_blocking_front(n: int, k: int, lifetime: int, seed: int) -> GenResult:
    """Adversarial instance on a path tree that keeps blocking the lead agents.

    The generator simulates the roundabout process itself and, for each
    snapshot, removes the tree edges directly ahead of the k most advanced
    active agents, so those agents are guaranteed to be blocked when the same
    process later runs on the instance. Every removed edge gets a bridging
    chord, keeping each snapshot connected.
    """
    if not (0 <= k <= n - 1):
        raise ValueError(f"k must be in [0, {n - 1}]")
    if lifetime < 1:
        raise ValueError("lifetime must be at least 1")
    tree = _build_tree("path", n, stream(seed, 0))
    if n == 1 or k == 0:
        snapshots = [sorted(tree.edges) for _ in range(lifetime)]
        graph = TemporalGraph.build(n, snapshots)
        return GenResult(graph, tree, 0)

    tour = build_dfs_tour(tree, 0)
    adjacency = tree.adjacency()
    state = RoundaboutState.initial(tour.n_positions)
    fallbacks = 0
    snapshots = []
    for t in range(1, lifetime + 1):
        rng = stream(seed, t)
        order = sorted(
            range(len(state.agents)),
            key=lambda i: (-state.arc_length(i), state.agents[i]),
        )
        removed: set[Edge] = set()
        for i in order:
            removed.add(tour.tour_edge(state.states[i]))
            if len(removed) == k:
                break
        edges = set(tree.edges - removed)
        label = _components(n, adjacency, removed)
        members: dict[int, list[int]] = {}
        for v, c in enumerate(label):
            members.setdefault(c, []).append(v)
        for e in sorted(removed):
            bridge = _bridge(e, label, members, removed, rng)
            if bridge is None:
                edges.add(e)
                fallbacks += 1
            else:
                edges.add(bridge)
        snapshot = sorted(edges)
        snapshots.append(snapshot)
        state = eliminate_redundant(movement_step(state, frozenset(snapshot), tour))
    _ensure_tree_in_underlying(snapshots, tree)
    return GenResult(TemporalGraph.build(n, snapshots), tree, fallbacks)
