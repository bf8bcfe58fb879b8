from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tempex.core import SpanningTree, TemporalGraph
from tempex.gen import GenSpec, gen_blocking_front, gen_random_deficient
from tempex.roundabout import (
    InvariantViolation,
    RoundaboutState,
    check_state_invariants,
    eliminate_redundant,
    movement_step,
    replay_trace,
    run_roundabout,
)
from tempex.tour import build_dfs_tour, covered_by_union


@pytest.fixture
def path3_tour(path3_tree):
    return build_dfs_tour(path3_tree, 0)


def make_state(n_positions: int, agents_moves: dict[int, int], step: int = 1) -> RoundaboutState:
    """State with the given active agents and per-agent move counts."""
    agents = tuple(sorted(agents_moves))
    states = tuple((a - 1 + agents_moves[a]) % n_positions + 1 for a in agents)
    moves = tuple(agents_moves[a] for a in agents)
    return RoundaboutState(n_positions, step, agents, states, moves)


def restart_scan_eliminate(state: RoundaboutState) -> RoundaboutState:
    """Literal fixpoint: remove the first redundant agent (ascending), restart."""
    keep = list(range(len(state.agents)))
    changed = True
    while changed:
        changed = False
        for pos, i in enumerate(keep):
            target = state.interval(i)
            others = [state.interval(j) for j in keep if j != i]
            if covered_by_union(target, others, state.n_positions):
                keep.pop(pos)
                changed = True
                break
    return RoundaboutState(
        state.n_positions,
        state.step,
        tuple(state.agents[i] for i in keep),
        tuple(state.states[i] for i in keep),
        tuple(state.moves[i] for i in keep),
    )


class TestMovement:
    def test_all_edges_present(self, path3_full, path3_tour):
        state = movement_step(RoundaboutState.initial(4), path3_full.edge_set(1), path3_tour)
        assert state.states == (2, 3, 4, 1)
        assert state.step == 1

    def test_missing_tree_edge_blocks(self, path3_tour):
        snapshot = frozenset({(0, 1)})  # tour edges e_2, e_3 use {1,2}
        state = movement_step(RoundaboutState.initial(4), snapshot, path3_tour)
        assert state.states == (2, 2, 3, 1)

    def test_empty_active_set(self, path3_tour):
        empty = RoundaboutState(4, 0, (), (), ())
        after = movement_step(empty, frozenset({(0, 1)}), path3_tour)
        assert after.agents == ()
        assert after.step == 1


class TestElimination:
    def test_fixpoint_keeps_alternating_agents(self):
        state = make_state(4, {1: 1, 2: 1, 3: 1, 4: 1})
        after = eliminate_redundant(state)
        assert after.agents == (2, 4)

    def test_nested_interval_removed(self):
        state = make_state(4, {1: 1, 2: 0, 3: 0, 4: 0})
        after = eliminate_redundant(state)
        assert after.agents == (1, 3, 4)

    def test_single_agent_never_redundant(self):
        state = make_state(4, {2: 1})
        assert eliminate_redundant(state) == state

    @given(st.integers(2, 12), st.data())
    def test_matches_restart_scan_reference(self, n, data):
        agents = data.draw(
            st.lists(st.integers(1, n), min_size=1, max_size=n, unique=True)
        )
        moves = {a: data.draw(st.integers(0, n - 1)) for a in agents}
        state = make_state(n, moves)
        assert eliminate_redundant(state) == restart_scan_eliminate(state)


class TestRunRoundabout:
    def test_path3_two_steps(self, path3_full, path3_tour):
        trace = run_roundabout(path3_full, path3_tour, [1, 2], 2, k=1, check_invariants=True)
        assert trace.final.agents == (2, 4)
        assert trace.initial_states == (2, 4)
        assert trace.final.states == (4, 2)
        assert set(trace.final_interval(2).indices()) == {2, 3, 4}
        assert set(trace.final_interval(4).indices()) == {4, 1, 2}

    def test_zero_budget_returns_initial(self, path3_full, path3_tour):
        trace = run_roundabout(path3_full, path3_tour, [], 0)
        assert trace.final == RoundaboutState.initial(4)
        assert trace.steps == ()
        assert all(trace.final_interval(a).size == 1 for a in trace.final.agents)

    def test_six_k_bound_trivial_for_small_tour(self, path3_full, path3_tour):
        trace = run_roundabout(path3_full, path3_tour, [1, 2], 2, k=1, check_invariants=True)
        assert len(trace.final.agents) <= 6

    def test_needs_enough_snapshots(self, path3_full, path3_tour):
        with pytest.raises(ValueError):
            run_roundabout(path3_full, path3_tour, [1], 2)

    def test_rejects_non_deficient_snapshot_in_check_mode(self, path3_tour):
        graph = TemporalGraph.build(3, [[]])
        with pytest.raises(InvariantViolation):
            run_roundabout(graph, path3_tour, [1], 1, k=1, check_invariants=True)

    def test_trace_format(self, path3_full, path3_tour):
        trace = run_roundabout(path3_full, path3_tour, [1, 2], 2)
        lines = trace.format_lines()
        assert lines[0] == "1 1 |A|=2 states=3,1"
        assert lines[1] == "2 2 |A|=2 states=4,2"

    @pytest.mark.parametrize("seed", range(6))
    def test_invariants_hold_on_random_instances(self, seed):
        n = 8 + 3 * seed
        k = 1 + seed % 3
        budget = (n - 1) // k
        spec = GenSpec(n=n, lifetime=budget, k=k, seed=seed, tree_shape="random",
                       connectivity="per-snapshot", extra_edge_rate=0.1)
        result = gen_random_deficient(spec)
        tour = build_dfs_tour(result.tree, 0)
        trace = run_roundabout(
            result.graph, tour, range(1, budget + 1), budget, k=k, check_invariants=True
        )
        assert len(trace.final.agents) <= 6 * k

    @pytest.mark.parametrize("seed", range(4))
    def test_replay_reproduces_final_state(self, seed):
        result = gen_blocking_front(7, 2, 20, seed)
        tour = build_dfs_tour(result.tree, 0)
        trace = run_roundabout(result.graph, tour, range(1, 4), 3, k=2)
        assert replay_trace(trace) == trace.final

    def test_moves_of_final_agent_spans_all_steps(self, path3_full, path3_tour):
        trace = run_roundabout(path3_full, path3_tour, [1, 2], 2)
        for agent in trace.final.agents:
            log = trace.moves_of(agent)
            assert [t for t, _ in log] == [1, 2]

    def test_only_first_budget_snapshots_are_used(self, path3_full, path3_tour):
        trace = run_roundabout(path3_full, path3_tour, [3, 5, 6, 7, 8], 2)
        assert [rec.time for rec in trace.steps] == [3, 5]


class TestInvariantChecker:
    def test_detects_shared_state(self):
        bad = RoundaboutState(4, 1, (1, 2), (2, 2), (1, 0))
        with pytest.raises(InvariantViolation):
            check_state_invariants(bad)

    def test_detects_coverage_gap(self):
        bad = RoundaboutState(4, 1, (1,), (2,), (1,))
        with pytest.raises(InvariantViolation):
            check_state_invariants(bad)

    def test_accepts_valid_state(self):
        state = make_state(4, {2: 2, 4: 2})
        check_state_invariants(state, k=1)
