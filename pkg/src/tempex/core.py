"""Temporal-graph data model, wire format, and basic temporal reachability.

Time steps are 1-indexed (snapshot t lives at ``snapshots[t-1]``); vertices
are 0-indexed. Edges are canonical ``(min, max)`` tuples. All values are
immutable after construction and every operation is a pure function.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

from .rng import SplitMix64

Edge = tuple[int, int]


class ParseError(ValueError):
    """Malformed wire-format input; carries the offending physical line number."""

    def __init__(self, message: str, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def canonical_edge(u: int, v: int) -> Edge:
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def _check_edges(n: int, edges: Iterable[Edge], what: str) -> None:
    for u, v in edges:
        if not (0 <= u < v < n):
            raise ValueError(f"{what}: bad edge ({u}, {v}) for n={n}")


@dataclass(frozen=True)
class StaticGraph:
    """Simple undirected graph; used for the union of all snapshot edge sets."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        _check_edges(self.n, self.edges, "static graph")

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        adj = self.adjacency()
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n


@dataclass(frozen=True)
class SpanningTree:
    """Tree on all n vertices; exactly n-1 edges, connected and acyclic."""

    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        _check_edges(self.n, self.edges, "spanning tree")
        if len(self.edges) != self.n - 1:
            raise ValueError(f"spanning tree needs {self.n - 1} edges, got {len(self.edges)}")
        adj: dict[int, list[int]] = {v: [] for v in range(self.n)}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != self.n:
            raise ValueError("spanning tree is not connected")
        object.__setattr__(self, "_adj", {v: tuple(sorted(ns)) for v, ns in adj.items()})

    def adjacency(self) -> dict[int, tuple[int, ...]]:
        return self._adj  # type: ignore[attr-defined]


@dataclass(frozen=True)
class TemporalGraph:
    """Ordered sequence of snapshot edge sets over a fixed vertex set.

    ``snapshots`` must already be canonical: each snapshot a strictly sorted
    tuple of canonical edges. Use :meth:`build` to canonicalize arbitrary
    input. Restrictions to a window are represented as (graph, window) pairs
    by the callers; snapshots are never copied.
    """

    n: int
    snapshots: tuple[tuple[Edge, ...], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if len(self.snapshots) < 1:
            raise ValueError("lifetime must be at least 1")
        for snap in self.snapshots:
            _check_edges(self.n, snap, "snapshot")
            if any(snap[i] >= snap[i + 1] for i in range(len(snap) - 1)):
                raise ValueError("snapshot edges must be strictly sorted")
        object.__setattr__(self, "_edge_sets", tuple(frozenset(s) for s in self.snapshots))
        object.__setattr__(self, "_underlying", None)

    @classmethod
    def build(cls, n: int, snapshots: Iterable[Iterable[Edge]]) -> "TemporalGraph":
        canon = tuple(tuple(sorted({canonical_edge(u, v) for u, v in snap})) for snap in snapshots)
        return cls(n, canon)

    @property
    def lifetime(self) -> int:
        return len(self.snapshots)

    def snapshot(self, t: int) -> tuple[Edge, ...]:
        """Edges of snapshot t (1-indexed)."""
        if not (1 <= t <= self.lifetime):
            raise ValueError(f"time step {t} outside [1, {self.lifetime}]")
        return self.snapshots[t - 1]

    def edge_set(self, t: int) -> frozenset[Edge]:
        if not (1 <= t <= self.lifetime):
            raise ValueError(f"time step {t} outside [1, {self.lifetime}]")
        return self._edge_sets[t - 1]  # type: ignore[attr-defined]

    def underlying(self) -> StaticGraph:
        """Static graph containing every edge that appears in some snapshot."""
        cached = self._underlying  # type: ignore[attr-defined]
        if cached is None:
            union: set[Edge] = set()
            for snap in self.snapshots:
                union.update(snap)
            cached = StaticGraph(self.n, frozenset(union))
            object.__setattr__(self, "_underlying", cached)
        return cached


@dataclass(frozen=True)
class TemporalWalk:
    """Walk whose hops happen at strictly increasing time steps."""

    start: int
    hops: tuple[tuple[int, Edge], ...]

    def __post_init__(self) -> None:
        cur = self.start
        prev_t = 0
        for t, (u, v) in self.hops:
            if t <= prev_t:
                raise ValueError("hop times must be strictly increasing")
            if cur == u:
                cur = v
            elif cur == v:
                cur = u
            else:
                raise ValueError(f"hop ({u},{v}) does not leave current vertex {cur}")
            prev_t = t

    @property
    def length(self) -> int:
        return len(self.hops)

    def vertices(self) -> tuple[int, ...]:
        seq = [self.start]
        for _, (u, v) in self.hops:
            seq.append(v if seq[-1] == u else u)
        return tuple(seq)

    def validate_against(self, graph: TemporalGraph) -> None:
        """Every hop's edge must be present in the snapshot at its time."""
        for t, e in self.hops:
            if e not in graph.edge_set(t):
                raise ValueError(f"edge {e} absent from snapshot {t}")


# --- wire format (TG1) ------------------------------------------------------

def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, stripped.split()


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(f"{what}: expected integer, got {token!r}", lineno) from None


def _parse_edge_line(parts: list[str], lineno: int, n: int, seen: set[Edge]) -> Edge:
    if len(parts) != 2:
        raise ParseError(f"expected 'u v', got {' '.join(parts)!r}", lineno)
    u = _parse_int(parts[0], lineno, "edge endpoint")
    v = _parse_int(parts[1], lineno, "edge endpoint")
    if not (0 <= u < n and 0 <= v < n):
        raise ParseError(f"vertex id out of range [0, {n}): {u} {v}", lineno)
    if u == v:
        raise ParseError(f"self-loop {u} {v}", lineno)
    e = canonical_edge(u, v)
    if e in seen:
        raise ParseError(f"duplicate edge {u} {v}", lineno)
    seen.add(e)
    return e


def parse_temporal_graph(text: str) -> TemporalGraph:
    """Parse the TG1 format: header 'n L', then per snapshot a count and edges."""
    lines = _content_lines(text)
    try:
        lineno, parts = next(lines)
    except StopIteration:
        raise ParseError("malformed header: empty input", 1) from None
    if len(parts) != 2:
        raise ParseError(f"malformed header: expected 'n L', got {' '.join(parts)!r}", lineno)
    n = _parse_int(parts[0], lineno, "header n")
    lifetime = _parse_int(parts[1], lineno, "header L")
    if n < 1 or lifetime < 1:
        raise ParseError(f"malformed header: need n >= 1 and L >= 1, got n={n} L={lifetime}", lineno)

    snapshots: list[tuple[Edge, ...]] = []
    last_line = lineno
    for _ in range(lifetime):
        try:
            lineno, parts = next(lines)
        except StopIteration:
            raise ParseError("unexpected end of input: missing snapshot edge count", last_line + 1) from None
        if len(parts) != 1:
            raise ParseError(f"expected edge count, got {' '.join(parts)!r}", lineno)
        m = _parse_int(parts[0], lineno, "edge count")
        if m < 0:
            raise ParseError(f"negative edge count {m}", lineno)
        seen: set[Edge] = set()
        edges: list[Edge] = []
        last_line = lineno
        for _ in range(m):
            try:
                lineno, parts = next(lines)
            except StopIteration:
                raise ParseError("unexpected end of input: missing edge line", last_line + 1) from None
            edges.append(_parse_edge_line(parts, lineno, n, seen))
            last_line = lineno
        snapshots.append(tuple(sorted(edges)))
    for lineno, parts in lines:
        raise ParseError(f"unexpected trailing content {' '.join(parts)!r}", lineno)
    return TemporalGraph(n, tuple(snapshots))


def serialize_temporal_graph(graph: TemporalGraph) -> str:
    out = [f"{graph.n} {graph.lifetime}"]
    for snap in graph.snapshots:
        out.append(str(len(snap)))
        out.extend(f"{u} {v}" for u, v in snap)
    return "\n".join(out) + "\n"


def parse_spanning_tree(text: str, n: int) -> SpanningTree:
    """Parse a tree file: n-1 lines 'u v' (comments allowed)."""
    seen: set[Edge] = set()
    edges: list[Edge] = []
    for lineno, parts in _content_lines(text):
        edges.append(_parse_edge_line(parts, lineno, n, seen))
    return SpanningTree(n, frozenset(edges))


def serialize_spanning_tree(tree: SpanningTree) -> str:
    lines = [f"{u} {v}" for u, v in sorted(tree.edges)]
    return "\n".join(lines) + ("\n" if lines else "")


# --- deficiency -------------------------------------------------------------

@dataclass(frozen=True)
class Deficiency:
    """How many (and which) tree edges a snapshot is missing."""

    count: int
    missing: tuple[Edge, ...]


def deficiency_count(snapshot: Iterable[Edge], tree: SpanningTree) -> Deficiency:
    """Tree edges absent from the snapshot; the snapshot is k-deficient iff count <= k."""
    present = snapshot if isinstance(snapshot, (set, frozenset)) else frozenset(snapshot)
    missing = tuple(sorted(e for e in tree.edges if e not in present))
    return Deficiency(len(missing), missing)


# --- foremost walks ---------------------------------------------------------

@dataclass(frozen=True)
class ForemostResult:
    """Earliest arrival per vertex within a window, with witness predecessors.

    The source's arrival is window_start - 1 ("already there before the
    window moves"); unreachable vertices carry None.
    """

    source: int
    window: tuple[int, int]
    arrival: tuple[Optional[int], ...]
    parent: tuple[Optional[tuple[int, int]], ...] = field(repr=False)

    def walk_to(self, v: int) -> Optional[TemporalWalk]:
        if self.arrival[v] is None:
            return None
        hops: list[tuple[int, Edge]] = []
        cur = v
        while self.parent[cur] is not None:
            u, t = self.parent[cur]  # type: ignore[misc]
            hops.append((t, canonical_edge(u, cur)))
            cur = u
        hops.reverse()
        return TemporalWalk(self.source, tuple(hops))


def foremost_walk(graph: TemporalGraph, window: tuple[int, int], source: int) -> ForemostResult:
    """Earliest-arrival sweep over the window, one edge per time step.

    Snapshots are processed in increasing time; a vertex reached strictly
    before step t can cross any edge present in snapshot t. Ties between
    relaxing neighbours are broken toward the smaller vertex id so witness
    walks are deterministic.
    """
    t0, t1 = window
    if not (1 <= t0 <= t1 <= graph.lifetime):
        raise ValueError(f"window [{t0}, {t1}] outside lifetime {graph.lifetime}")
    if not (0 <= source < graph.n):
        raise ValueError(f"source {source} out of range")
    arrival: list[Optional[int]] = [None] * graph.n
    parent: list[Optional[tuple[int, int]]] = [None] * graph.n
    arrival[source] = t0 - 1
    for t in range(t0, t1 + 1):
        updates: dict[int, int] = {}
        for u, v in graph.snapshot(t):
            au, av = arrival[u], arrival[v]
            if au is not None and au < t and av is None:
                best = updates.get(v)
                if best is None or u < best:
                    updates[v] = u
            if av is not None and av < t and au is None:
                best = updates.get(u)
                if best is None or v < best:
                    updates[u] = v
        for v, u in updates.items():
            arrival[v] = t
            parent[v] = (u, t)
    return ForemostResult(source, window, tuple(arrival), tuple(parent))


# --- windowed connectivity --------------------------------------------------

@dataclass(frozen=True)
class ConnectivityReport:
    ok: bool
    witness: Optional[tuple[int, tuple[int, int]]]
    windows_checked: int
    mode: str


def verify_delta_connectivity(
    graph: TemporalGraph,
    delta: int,
    mode: str = "exhaustive",
    samples: int = 32,
    seed: int = 0,
) -> ConnectivityReport:
    """Check that every length-delta window is temporally connected.

    Exhaustive mode scans all L-delta+1 windows (O((L-delta+1) * n * sum|E_t|),
    desk-scale only); sampled mode checks a seeded subset of windows. Returns
    the first violating (window start, ordered pair) if any.
    """
    if not (1 <= delta <= graph.lifetime):
        raise ValueError(f"delta {delta} outside [1, {graph.lifetime}]")
    if mode not in ("exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    starts = list(range(1, graph.lifetime - delta + 2))
    if mode == "sampled" and len(starts) > samples:
        rng = SplitMix64(seed)
        chosen: set[int] = set()
        while len(chosen) < samples:
            chosen.add(starts[rng.below(len(starts))])
        starts = sorted(chosen)
    checked = 0
    for w in starts:
        checked += 1
        for source in range(graph.n):
            result = foremost_walk(graph, (w, w + delta - 1), source)
            for target in range(graph.n):
                if result.arrival[target] is None:
                    return ConnectivityReport(False, (w, (source, target)), checked, mode)
    return ConnectivityReport(True, None, checked, mode)
