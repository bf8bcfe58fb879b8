"""DFS tours of spanning trees and circular-interval arithmetic on tour positions.

Tour positions are 1-indexed: the tour visits v_1 .. v_N cyclically with
v_{N+1} = v_1 = root and N = 2(n-1). Tour edge e_i joins v_i and v_{i+1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .core import Edge, SpanningTree, canonical_edge


@dataclass(frozen=True)
class CircularInterval:
    """Set of tour indices reached moving forward from start to end, inclusive.

    The zero-length case needs an explicit flag: a closed interval always has
    at least one member (start == end means the singleton, start == end+1
    cyclically means the full cycle), so emptiness cannot be encoded in the
    endpoints.
    """

    n_positions: int
    start: int
    end: int
    empty: bool = False

    def __post_init__(self) -> None:
        if self.n_positions < 1:
            raise ValueError("n_positions must be positive")
        if not self.empty and not (
            1 <= self.start <= self.n_positions and 1 <= self.end <= self.n_positions
        ):
            raise ValueError(f"interval endpoints outside [1, {self.n_positions}]")

    @classmethod
    def closed(cls, start: int, end: int, n_positions: int) -> "CircularInterval":
        return cls(n_positions, start, end)

    @classmethod
    def half_open(cls, start: int, end: int, n_positions: int) -> "CircularInterval":
        """Indices from start up to but excluding end; empty when start == end."""
        if start == end:
            return cls.make_empty(n_positions)
        prev = n_positions if end == 1 else end - 1
        return cls(n_positions, start, prev)

    @classmethod
    def make_empty(cls, n_positions: int) -> "CircularInterval":
        return cls(n_positions, 0, 0, empty=True)

    @classmethod
    def full(cls, n_positions: int) -> "CircularInterval":
        return cls(n_positions, 1, n_positions)

    @property
    def size(self) -> int:
        if self.empty:
            return 0
        return (self.end - self.start) % self.n_positions + 1

    @property
    def is_full(self) -> bool:
        return self.size == self.n_positions

    def contains(self, index: int) -> bool:
        if self.empty:
            return False
        n = self.n_positions
        return (index - self.start) % n <= (self.end - self.start) % n

    def indices(self) -> Iterator[int]:
        if self.empty:
            return
        n = self.n_positions
        for off in range(self.size):
            yield (self.start - 1 + off) % n + 1

    def complement(self) -> "CircularInterval":
        if self.empty:
            return CircularInterval.full(self.n_positions)
        if self.is_full:
            return CircularInterval.make_empty(self.n_positions)
        n = self.n_positions
        start = self.end % n + 1
        end = n if self.start == 1 else self.start - 1
        return CircularInterval(n, start, end)


@dataclass(frozen=True)
class DfsTour:
    """Cyclic DFS tour of a spanning tree; each tree edge is crossed exactly twice."""

    tree: SpanningTree
    root: int
    vertices: tuple[int, ...]

    def __post_init__(self) -> None:
        n = self.tree.n
        if len(self.vertices) != 2 * (n - 1):
            raise ValueError("tour length must be 2(n-1)")
        if self.vertices[0] != self.root:
            raise ValueError("tour must start at the root")
        counts: dict[Edge, int] = {}
        for i in range(len(self.vertices)):
            e = canonical_edge(self.vertices[i], self.vertices[(i + 1) % len(self.vertices)])
            if e not in self.tree.edges:
                raise ValueError(f"tour step {e} is not a tree edge")
            counts[e] = counts.get(e, 0) + 1
        if any(c != 2 for c in counts.values()) or len(counts) != n - 1:
            raise ValueError("each tree edge must appear exactly twice in the tour")
        object.__setattr__(
            self,
            "_edges",
            tuple(
                canonical_edge(self.vertices[i], self.vertices[(i + 1) % len(self.vertices)])
                for i in range(len(self.vertices))
            ),
        )

    @property
    def n_positions(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> int:
        """Vertex at tour position i (1-indexed)."""
        return self.vertices[i - 1]

    def tour_edge(self, i: int) -> Edge:
        """Edge e_i = {v_i, v_{i+1}} (1-indexed, cyclic)."""
        return self._edges[i - 1]  # type: ignore[attr-defined]


def build_dfs_tour(tree: SpanningTree, root: int = 0) -> DfsTour:
    """Deterministic DFS tour: children are visited in ascending vertex id."""
    if tree.n < 2:
        raise ValueError("no tour exists for a single-vertex tree")
    if not (0 <= root < tree.n):
        raise ValueError(f"root {root} out of range")
    adj = tree.adjacency()
    seq = [root]
    visited = {root}
    stack: list[tuple[int, Iterator[int]]] = [(root, iter(adj[root]))]
    while stack:
        _, neighbours = stack[-1]
        advanced = False
        for w in neighbours:
            if w in visited:
                continue
            visited.add(w)
            seq.append(w)
            stack.append((w, iter(adj[w])))
            advanced = True
            break
        if not advanced:
            stack.pop()
            if stack:
                seq.append(stack[-1][0])
    return DfsTour(tree, root, tuple(seq[:-1]))


def covered_by_union(
    target: CircularInterval, others: Iterable[CircularInterval], n_positions: int
) -> bool:
    """True iff every index of target lies in the union of the other intervals.

    Runs in O(m log m) for m intervals by cutting the circle at target.start
    and sweeping merged segments.
    """
    if target.empty:
        return True
    n = n_positions
    if target.n_positions != n:
        raise ValueError("interval universes disagree")
    segments: list[tuple[int, int]] = []
    for o in others:
        if o.empty:
            continue
        if o.n_positions != n:
            raise ValueError("interval universes disagree")
        rel = (o.start - target.start) % n
        end = rel + o.size - 1
        if end < n:
            segments.append((rel, end))
        else:
            segments.append((rel, n - 1))
            segments.append((0, end - n))
    segments.sort()
    need = target.size - 1  # cover relative positions [0, need]
    covered_to = -1
    for a, b in segments:
        if a > covered_to + 1:
            break
        if b > covered_to:
            covered_to = b
        if covered_to >= need:
            return True
    return covered_to >= need
