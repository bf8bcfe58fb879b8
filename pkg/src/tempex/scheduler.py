"""Epoch planning, covering-tuple selection, and single-explorer schedules.

The pipeline: partition a timeline prefix into rho epochs (a delta-step
repositioning window followed by enough deficient snapshots to run the
roundabout for its step budget), pick one surviving agent per epoch whose
visited arcs jointly cover the whole tour, then have a single explorer
reposition to each chosen agent's start and replay its moves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .core import (
    ParseError,
    SpanningTree,
    TemporalGraph,
    canonical_edge,
    deficiency_count,
    foremost_walk,
)
from .rng import SplitMix64
from .roundabout import RoundaboutTrace, run_roundabout
from .tour import CircularInterval, DfsTour, build_dfs_tour
from .treefind import find_good_tree

Action = Optional[tuple[int, int]]  # None = wait, (u, v) = traverse from u to v


class InsufficientSnapshots(Exception):
    """The timeline ran out before the epoch plan was complete."""

    def __init__(self, epoch: int, deficit: int) -> None:
        super().__init__(f"epoch {epoch}: {deficit} deficient snapshots short")
        self.epoch = epoch
        self.deficit = deficit


class RepositionFailed(Exception):
    """A repositioning walk could not reach its target within the window."""

    def __init__(self, epoch: int, target: int) -> None:
        super().__init__(f"epoch {epoch}: vertex {target} unreachable in repositioning window")
        self.epoch = epoch
        self.target = target


class TupleSearchExhausted(Exception):
    def __init__(self, attempts: int) -> None:
        super().__init__(f"no covering tuple found after {attempts} sampling attempts")
        self.attempts = attempts


class EnumerationCapExceeded(Exception):
    def __init__(self, size: int, cap: int) -> None:
        super().__init__(
            f"tuple space has {size} elements, above the enumeration cap {cap}; "
            "use the sampling strategy instead"
        )
        self.size = size
        self.cap = cap


def rho_for(k: int) -> int:
    """Epoch count for deficiency parameter k: ceil(18 k ln(6k))."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return math.ceil(18 * k * math.log(6 * k))


def step_budget(n: int, k: int) -> int:
    """Roundabout step budget: floor(N / 2k) with N = 2(n-1)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    return (n - 1) // k


def tau(n: int, k: int, delta: int) -> float:
    """Deficient-snapshot budget sufficient for the whole pipeline."""
    return rho_for(k) * (delta + n / k)


def recovery_prefix(n: int, k: int, delta: int) -> int:
    """Half-prefix q used to recover a tree when no witness is given.

    Integer upper bound on tau(n, 2k, delta): the fractional n/2k is rounded
    up per epoch.
    """
    kk = 2 * k
    return rho_for(kk) * (delta + -(-n // kk))


@dataclass(frozen=True)
class Epoch:
    start: int
    reposition_end: int
    end: int
    roundabout_times: tuple[int, ...]


@dataclass(frozen=True)
class EpochPlan:
    epochs: tuple[Epoch, ...]
    rho: int
    budget: int
    k: int
    delta: int


def partition_epochs(
    graph: TemporalGraph,
    tree: SpanningTree,
    k: int,
    delta: int,
    rho: int,
    budget: int,
) -> EpochPlan:
    """Greedy left-to-right epoch layout.

    Each epoch reserves delta steps for repositioning, then extends until
    `budget` snapshots k-deficient with respect to the tree have accumulated.
    Greedy is prefix-optimal: it succeeds whenever any partition does.
    """
    if delta < 1 or rho < 1 or budget < 0 or k < 0:
        raise ValueError("bad epoch parameters")
    epochs: list[Epoch] = []
    cursor = 1
    for e in range(1, rho + 1):
        reposition_end = cursor + delta - 1
        if reposition_end > graph.lifetime:
            raise InsufficientSnapshots(e, budget)
        times: list[int] = []
        t = reposition_end + 1
        while len(times) < budget and t <= graph.lifetime:
            if deficiency_count(graph.edge_set(t), tree).count <= k:
                times.append(t)
            t += 1
        if len(times) < budget:
            raise InsufficientSnapshots(e, budget - len(times))
        end = times[-1] if times else reposition_end
        epochs.append(Epoch(cursor, reposition_end, end, tuple(times)))
        cursor = end + 1
    return EpochPlan(tuple(epochs), rho, budget, k, delta)


@dataclass(frozen=True)
class RefinedIntervals:
    """Common refinement of the start-position families of all epochs."""

    n_positions: int
    points: tuple[int, ...]
    intervals: tuple[CircularInterval, ...]

    @property
    def d(self) -> int:
        return len(self.intervals)


def common_refinement(start_sets: Sequence[Sequence[int]], n_positions: int) -> RefinedIntervals:
    """Partition tour positions at every recorded start position.

    With a single distinct point the lone half-open interval wraps all the
    way around, i.e. it is the full cycle.
    """
    merged: set[int] = set()
    for s in start_sets:
        if not s:
            raise ValueError("every start set must be nonempty")
        merged.update(s)
    points = tuple(sorted(merged))
    if any(not (1 <= p <= n_positions) for p in points):
        raise ValueError("start positions outside the tour")
    n = n_positions
    intervals: list[CircularInterval] = []
    for i, p in enumerate(points):
        nxt = points[(i + 1) % len(points)]
        end = (nxt - 2) % n + 1  # position just before nxt, cyclically
        intervals.append(CircularInterval.closed(p, end, n))
    if sum(iv.size for iv in intervals) != n:
        raise AssertionError("refinement does not partition the tour")
    return RefinedIntervals(n, points, tuple(intervals))


def _arc_mask(start: int, length: int, n: int) -> int:
    if length >= n:
        return (1 << n) - 1
    p = start - 1
    end = p + length
    if end <= n:
        return ((1 << length) - 1) << p
    return (((1 << (end - n)) - 1)) | ((((1 << (n - p)) - 1)) << p)


def _final_arc_masks(trace: RoundaboutTrace) -> dict[int, int]:
    n = trace.n_positions
    return {
        agent: _arc_mask(agent, trace.final.arc_length(i), n)
        for i, agent in enumerate(trace.final.agents)
    }


def is_covering_tuple(
    choice: Sequence[int], traces: Sequence[RoundaboutTrace], n_positions: int
) -> bool:
    """True iff the chosen agents' visited arcs jointly cover every tour position."""
    if len(choice) != len(traces):
        raise ValueError("one choice per epoch required")
    union = 0
    full = (1 << n_positions) - 1
    for s, trace in zip(choice, traces):
        if s not in trace.final.agents:
            raise ValueError(f"{s} is not a surviving start position of its epoch")
        idx = trace.final.agents.index(s)
        union |= _arc_mask(s, trace.final.arc_length(idx), n_positions)
    return union == full


@dataclass(frozen=True)
class LasVegas:
    """Sample uniformly (independent per epoch) until a covering tuple shows up."""

    seed: int = 0
    max_attempts: int = 10_000


@dataclass(frozen=True)
class Enumerate:
    """Lexicographic scan of the whole tuple space; refuses above the cap."""

    cap: int = 1_000_000


Strategy = Union[LasVegas, Enumerate]


def find_covering_tuple(
    traces: Sequence[RoundaboutTrace],
    refined: RefinedIntervals,
    strategy: Strategy,
) -> tuple[tuple[int, ...], int]:
    """Pick one surviving agent per epoch covering the whole tour.

    Returns (tuple, attempts); for the enumerating strategy, attempts is the
    1-based lexicographic rank of the returned tuple. Sampling fails loudly
    after max_attempts rather than looping forever.
    """
    n = refined.n_positions
    full = (1 << n) - 1
    per_epoch: list[list[tuple[int, int]]] = []
    for trace in traces:
        masks = _final_arc_masks(trace)
        per_epoch.append(sorted(masks.items()))

    if isinstance(strategy, LasVegas):
        rng = SplitMix64(strategy.seed)
        for attempt in range(1, strategy.max_attempts + 1):
            union = 0
            sel: list[int] = []
            for options in per_epoch:
                agent, mask = options[rng.below(len(options))]
                sel.append(agent)
                union |= mask
            if union == full:
                return tuple(sel), attempt
        raise TupleSearchExhausted(strategy.max_attempts)

    size = 1
    for options in per_epoch:
        size *= len(options)
        if size > strategy.cap:
            raise EnumerationCapExceeded(size, strategy.cap)
    suffix_sizes = [1] * (len(per_epoch) + 1)
    for j in range(len(per_epoch) - 1, -1, -1):
        suffix_sizes[j] = suffix_sizes[j + 1] * len(per_epoch[j])
    suffix_all = [0] * (len(per_epoch) + 1)
    for j in range(len(per_epoch) - 1, -1, -1):
        level = 0
        for _, mask in per_epoch[j]:
            level |= mask
        suffix_all[j] = suffix_all[j + 1] | level

    sel: list[int] = []
    skipped = 0

    def descend(j: int, union: int) -> Optional[tuple[int, ...]]:
        nonlocal skipped
        if union == full:
            return tuple(sel) + tuple(options[0][0] for options in per_epoch[j:])
        if j == len(per_epoch):
            skipped += 1
            return None
        if union | suffix_all[j] != full:
            skipped += suffix_sizes[j]
            return None
        for agent, mask in per_epoch[j]:
            sel.append(agent)
            found = descend(j + 1, union | mask)
            if found is not None:
                return found
            sel.pop()
        return None

    found = descend(0, 0)
    if found is None:
        raise TupleSearchExhausted(size)
    return found, skipped + 1


def exhaustive_covering_fraction(
    traces: Sequence[RoundaboutTrace], n_positions: int
) -> Fraction:
    """Exact fraction of covering tuples, by dynamic programming over unions."""
    full = (1 << n_positions) - 1
    per_epoch = [sorted(_final_arc_masks(t).items()) for t in traces]
    total = 1
    for options in per_epoch:
        total *= len(options)
    suffix_sizes = [1] * (len(per_epoch) + 1)
    for j in range(len(per_epoch) - 1, -1, -1):
        suffix_sizes[j] = suffix_sizes[j + 1] * len(per_epoch[j])
    covering = 0
    level: dict[int, int] = {0: 1}
    for j, options in enumerate(per_epoch):
        nxt: dict[int, int] = {}
        for union, count in level.items():
            for _, mask in options:
                u2 = union | mask
                if u2 == full:
                    covering += count * suffix_sizes[j + 1]
                else:
                    nxt[u2] = nxt.get(u2, 0) + count
        level = nxt
    return Fraction(covering, total)


# --- schedules ----------------------------------------------------------------

@dataclass(frozen=True)
class Schedule:
    """Per-time-step actions for one explorer over a contiguous window."""

    start: int
    first_step: int
    actions: tuple[Action, ...]
    epoch_bounds: tuple[tuple[int, int], ...] = ()
    chosen: tuple[int, ...] = ()

    @property
    def span(self) -> int:
        return len(self.actions)

    @property
    def length(self) -> int:
        """Number of edge traversals (temporal-walk length)."""
        return sum(1 for a in self.actions if a is not None)

    @property
    def last_step(self) -> int:
        return self.first_step + len(self.actions) - 1


def serialize_schedule(schedule: Schedule) -> str:
    lines = [f"start {schedule.start}"]
    for off, action in enumerate(schedule.actions):
        t = schedule.first_step + off
        if action is None:
            lines.append(f"{t} wait")
        else:
            lines.append(f"{t} move {action[0]} {action[1]}")
    return "\n".join(lines) + "\n"


def parse_schedule(text: str) -> Schedule:
    lines = [
        (no, raw.strip())
        for no, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.strip().startswith("#")
    ]
    if not lines:
        raise ParseError("empty schedule", 1)
    no, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or parts[0] != "start":
        raise ParseError(f"expected 'start <v>', got {header!r}", no)
    try:
        start = int(parts[1])
    except ValueError:
        raise ParseError(f"bad start vertex {parts[1]!r}", no) from None
    actions: list[Action] = []
    first_step: Optional[int] = None
    expected: Optional[int] = None
    for no, line in lines[1:]:
        parts = line.split()
        try:
            t = int(parts[0])
        except (ValueError, IndexError):
            raise ParseError(f"bad schedule line {line!r}", no) from None
        if first_step is None:
            first_step = t
            expected = t
        if t != expected:
            raise ParseError(f"expected step {expected}, got {t}", no)
        expected = t + 1
        if len(parts) == 2 and parts[1] == "wait":
            actions.append(None)
        elif len(parts) == 4 and parts[1] == "move":
            try:
                u, v = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"bad move endpoints in {line!r}", no) from None
            actions.append((u, v))
        else:
            raise ParseError(f"bad schedule line {line!r}", no)
    return Schedule(start, first_step if first_step is not None else 1, tuple(actions))


def assemble_schedule(
    graph: TemporalGraph,
    tour: DfsTour,
    plan: EpochPlan,
    traces: Sequence[RoundaboutTrace],
    choice: Sequence[int],
    start: int,
) -> Schedule:
    """Explorer schedule: per epoch, reposition to the chosen agent's start
    vertex via a foremost walk, then replay that agent's logged moves."""
    if len(traces) != len(plan.epochs) or len(choice) != len(plan.epochs):
        raise ValueError("plan, traces and choice must align")
    span_end = plan.epochs[-1].end
    actions: list[Action] = [None] * span_end
    cur = start
    for number, (epoch, trace, s) in enumerate(zip(plan.epochs, traces, choice), start=1):
        target = tour.vertex(s)
        if cur != target:
            reach = foremost_walk(graph, (epoch.start, epoch.reposition_end), cur)
            if reach.arrival[target] is None:
                raise RepositionFailed(number, target)
            walk = reach.walk_to(target)
            assert walk is not None
            pos = walk.start
            for t, (u, v) in walk.hops:
                nxt = v if pos == u else u
                actions[t - 1] = (pos, nxt)
                pos = nxt
            cur = target
        state = s
        for t, moved in trace.moves_of(s):
            if moved:
                u = tour.vertex(state)
                state = state % tour.n_positions + 1
                v = tour.vertex(state)
                actions[t - 1] = (u, v)
        cur = tour.vertex(state)
    bounds = tuple((e.start, e.end) for e in plan.epochs)
    return Schedule(start, 1, tuple(actions), bounds, tuple(choice))


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    reason: Optional[str] = None
    step: Optional[int] = None
    unvisited: tuple[int, ...] = ()

    def describe(self) -> str:
        if self.ok:
            return "valid"
        where = f" at step {self.step}" if self.step is not None else ""
        return f"invalid: {self.reason}{where}"


def verify_schedule(graph: TemporalGraph, start: int, schedule: Schedule) -> VerifyReport:
    """Independent validation: continuity, edge presence, lifetime, coverage."""
    if not (0 <= start < graph.n):
        return VerifyReport(False, f"start vertex {start} out of range")
    if schedule.start != start:
        return VerifyReport(False, f"schedule declares start {schedule.start}, expected {start}")
    cur = start
    visited = {start}
    for off, action in enumerate(schedule.actions):
        t = schedule.first_step + off
        if not (1 <= t <= graph.lifetime):
            return VerifyReport(False, "time step outside lifetime", t)
        if action is None:
            continue
        u, v = action
        if u != cur:
            return VerifyReport(False, f"move from {u} but explorer is at {cur}", t)
        if not (0 <= v < graph.n) or u == v:
            return VerifyReport(False, f"bad move target {v}", t)
        if canonical_edge(u, v) not in graph.edge_set(t):
            return VerifyReport(False, f"edge ({u},{v}) absent from snapshot", t)
        cur = v
        visited.add(v)
    missing = tuple(sorted(set(range(graph.n)) - visited))
    if missing:
        return VerifyReport(False, f"unvisited vertices {list(missing)}", None, missing)
    return VerifyReport(True)


# --- top-level pipeline -------------------------------------------------------

@dataclass(frozen=True)
class ExploreStats:
    rho: int
    budget: int
    epoch_count: int
    active_counts: tuple[int, ...]
    attempts: int
    span: int
    length: int

    def to_json_dict(self) -> dict:
        return {
            "rho": self.rho,
            "t": self.budget,
            "epochs": self.epoch_count,
            "activeCounts": list(self.active_counts),
            "attempts": self.attempts,
            "scheduleSpan": self.span,
            "scheduleLength": self.length,
        }


def run_epoch_traces(
    graph: TemporalGraph, tour: DfsTour, plan: EpochPlan, check_invariants: bool = False
) -> list[RoundaboutTrace]:
    return [
        run_roundabout(
            graph, tour, epoch.roundabout_times, plan.budget, plan.k, check_invariants
        )
        for epoch in plan.epochs
    ]


@dataclass(frozen=True)
class PipelineRun:
    """Everything the pipeline produced, for diagnostics and the CLI."""

    schedule: Schedule
    stats: ExploreStats
    tree: Optional[SpanningTree]
    plan: Optional[EpochPlan]
    traces: tuple[RoundaboutTrace, ...]


def explore_detailed(
    graph: TemporalGraph,
    k: int,
    delta: int,
    start: int,
    tree: Optional[SpanningTree] = None,
    strategy: Optional[Strategy] = None,
) -> PipelineRun:
    """Compute an exploration schedule from `start`, keeping intermediates.

    With a witness tree the pipeline runs at deficiency k; without one it
    first recovers a tree from the absence counts of a timeline prefix and
    runs at deficiency 2k. Raises InsufficientSnapshots or RepositionFailed
    when the input does not meet the corresponding hypothesis.
    """
    if not (0 <= start < graph.n):
        raise ValueError(f"start {start} out of range")
    if delta < 1:
        raise ValueError("delta must be at least 1")
    if k == 0:
        import warnings

        warnings.warn("k=0 remapped to k=1", stacklevel=2)
        k = 1
    if k < 0:
        raise ValueError("k must be non-negative")
    if strategy is None:
        strategy = LasVegas()
    if graph.n == 1:
        return PipelineRun(Schedule(start, 1, ()), ExploreStats(0, 0, 0, (), 0, 0, 0), None, None, ())

    if tree is None:
        q = recovery_prefix(graph.n, k, delta)
        if 2 * q > graph.lifetime:
            raise InsufficientSnapshots(0, 2 * q - graph.lifetime)
        tree, _ = find_good_tree(graph, k, q)
        effective_k = 2 * k
    else:
        effective_k = k

    rho = rho_for(effective_k)
    budget = step_budget(graph.n, effective_k)
    tour = build_dfs_tour(tree, 0)
    plan = partition_epochs(graph, tree, effective_k, delta, rho, budget)
    traces = run_epoch_traces(graph, tour, plan)
    refined = common_refinement([t.initial_states for t in traces], tour.n_positions)
    choice, attempts = find_covering_tuple(traces, refined, strategy)
    schedule = assemble_schedule(graph, tour, plan, traces, choice, start)
    stats = ExploreStats(
        rho,
        budget,
        len(plan.epochs),
        tuple(len(t.initial_states) for t in traces),
        attempts,
        schedule.span,
        schedule.length,
    )
    return PipelineRun(schedule, stats, tree, plan, tuple(traces))


def explore(
    graph: TemporalGraph,
    k: int,
    delta: int,
    start: int,
    tree: Optional[SpanningTree] = None,
    strategy: Optional[Strategy] = None,
) -> tuple[Schedule, ExploreStats]:
    """Compute an exploration schedule from `start`; see explore_detailed."""
    run = explore_detailed(graph, k, delta, start, tree, strategy)
    return run.schedule, run.stats
