from __future__ import annotations

import json
from pathlib import Path

import pytest

from cliutil import run_cli


@pytest.fixture
def e1_graph_file(tmp_path: Path) -> Path:
    path = tmp_path / "e1.tg"
    path.write_text("3 4\n" + "2\n0 1\n1 2\n" * 4)
    return path


def gen_instance(tmp_path: Path, n: int, lifetime: int, k: int, seed: int) -> tuple[Path, Path]:
    out = tmp_path / "inst"
    proc = run_cli(
        "gen", "--n", str(n), "--L", str(lifetime), "--k", str(k),
        "--seed", str(seed), "--out", str(out),
    )
    assert proc.returncode == 0, proc.stderr
    return tmp_path / "inst.tg", tmp_path / "inst.tg.tree"


class TestPipeline:
    def test_gen_explore_verify_round_trip(self, tmp_path):
        graph, tree = gen_instance(tmp_path, 6, 33 * 10, 1, 7)
        sched = tmp_path / "sched.txt"
        proc = run_cli(
            "explore", "--graph", str(graph), "--k", "1", "--delta", "5",
            "--start", "0", "--tree", str(tree), "--seed", "1", "--out", str(sched),
        )
        assert proc.returncode == 0, proc.stderr
        stats = json.loads(proc.stdout)
        assert stats["rho"] == 33
        assert stats["epochs"] == 33
        assert (tmp_path / "sched.txt.manifest.json").exists()

        proc = run_cli("verify", "--graph", str(graph), "--schedule", str(sched), "--start", "0")
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.strip() == "valid"

    def test_explore_without_tree(self, tmp_path):
        # lifetime 2q for n=5, k=1, delta=4: q = 90 * (4 + 3)
        graph, _ = gen_instance(tmp_path, 5, 2 * 90 * 7, 1, 3)
        proc = run_cli(
            "explore", "--graph", str(graph), "--k", "1", "--delta", "4",
            "--start", "2", "--seed", "5",
        )
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.startswith("start 2\n")

    def test_tampered_schedule_fails_verify(self, tmp_path):
        graph, tree = gen_instance(tmp_path, 5, 33 * 8, 1, 2)
        sched = tmp_path / "s.txt"
        proc = run_cli(
            "explore", "--graph", str(graph), "--k", "1", "--delta", "4",
            "--start", "0", "--tree", str(tree), "--seed", "1", "--out", str(sched),
        )
        assert proc.returncode == 0, proc.stderr
        lines = sched.read_text().splitlines()
        move_at = next(i for i, l in enumerate(lines) if "move" in l)
        t = lines[move_at].split()[0]
        lines[move_at] = f"{t} move 0 4"
        sched.write_text("\n".join(lines) + "\n")
        proc = run_cli("verify", "--graph", str(graph), "--schedule", str(sched))
        assert proc.returncode == 1
        assert "invalid" in proc.stdout

    def test_explore_insufficient_lifetime_exits_1(self, e1_graph_file):
        proc = run_cli(
            "explore", "--graph", str(e1_graph_file), "--k", "1", "--delta", "2",
            "--start", "0",
        )
        assert proc.returncode == 1
        assert "failed" in proc.stderr

    def test_trace_flag_dumps_to_stderr(self, tmp_path):
        graph, tree = gen_instance(tmp_path, 5, 33 * 8, 1, 2)
        proc = run_cli(
            "explore", "--graph", str(graph), "--k", "1", "--delta", "4",
            "--start", "0", "--tree", str(tree), "--seed", "1",
            "--out", str(tmp_path / "s.txt"), "--trace",
        )
        assert proc.returncode == 0
        assert "epoch 1: 1 " in proc.stderr
        assert "|A|=" in proc.stderr

    def test_delta_defaults_with_note(self, tmp_path):
        graph, tree = gen_instance(tmp_path, 4, 33 * 6, 1, 5)
        proc = run_cli(
            "explore", "--graph", str(graph), "--k", "1", "--start", "0",
            "--tree", str(tree), "--out", str(tmp_path / "s.txt"),
        )
        assert proc.returncode == 0, proc.stderr
        assert "delta defaulted to n-1 = 3" in proc.stderr


class TestSubcommands:
    def test_oracle_prints_three(self, e1_graph_file):
        proc = run_cli("oracle", "--graph", str(e1_graph_file), "--start", "1")
        assert proc.returncode == 0
        assert proc.stdout.strip() == "3"

    def test_oracle_infeasible_exits_1(self, tmp_path):
        path = tmp_path / "g.tg"
        path.write_text("3 2\n1\n0 1\n1\n0 1\n")
        proc = run_cli("oracle", "--graph", str(path), "--start", "0")
        assert proc.returncode == 1
        assert proc.stdout.strip() == "infeasible"

    def test_check_delta_accepts(self, e1_graph_file):
        proc = run_cli("check-delta", "--graph", str(e1_graph_file), "--delta", "2")
        assert proc.returncode == 0
        assert "yes" in proc.stdout

    def test_check_delta_rejects(self, tmp_path):
        path = tmp_path / "g.tg"
        path.write_text("3 2\n1\n0 1\n2\n0 1\n1 2\n")
        proc = run_cli("check-delta", "--graph", str(path), "--delta", "1")
        assert proc.returncode == 1
        assert "no" in proc.stdout

    def test_tree_subcommand(self, tmp_path):
        graph, _ = gen_instance(tmp_path, 6, 20, 1, 4)
        out = tmp_path / "found.tree"
        proc = run_cli("tree", "--graph", str(graph), "--k", "1", "--q", "10", "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        stats = json.loads(proc.stdout)
        assert stats["goodCount"] >= 10
        assert out.exists()
        assert (tmp_path / "found.tree.manifest.json").exists()

    def test_bench(self, tmp_path):
        manifest = tmp_path / "rows.json"
        manifest.write_text(json.dumps([
            {"n": 5, "k": 1, "delta": 4, "seed": 0},
            {"n": 6, "k": 1, "delta": 5, "seed": 1},
        ]))
        out = tmp_path / "bench.csv"
        proc = run_cli("bench", "--manifest", str(manifest), "--out", str(out))
        assert proc.returncode == 0, proc.stderr
        lines = out.read_text().splitlines()
        assert lines[0] == (
            "instance,n,k,delta,rho,t,scheduleSpan,scheduleLength,tau,attempts,wallMillis"
        )
        assert len(lines) == 3
        assert lines[1].startswith("bench-0,5,1,4,33,")


class TestExitCodes:
    def test_unknown_subcommand_is_usage_error(self):
        proc = run_cli("frobnicate")
        assert proc.returncode == 2

    def test_malformed_graph_is_format_error(self, tmp_path):
        path = tmp_path / "bad.tg"
        path.write_text("2 1\n1\n0 0\n")
        proc = run_cli("oracle", "--graph", str(path), "--start", "0")
        assert proc.returncode == 2
        assert "line 3" in proc.stderr

    def test_missing_file(self, tmp_path):
        proc = run_cli("oracle", "--graph", str(tmp_path / "nope.tg"), "--start", "0")
        assert proc.returncode == 2


class TestDeterminism:
    def test_gen_twice_identical(self, tmp_path):
        a = tmp_path / "a"
        b = tmp_path / "b"
        for out in (a, b):
            proc = run_cli(
                "gen", "--n", "7", "--L", "50", "--k", "2", "--seed", "11",
                "--tree-shape", "random", "--extra-edge-rate", "0.2", "--out", str(out),
            )
            assert proc.returncode == 0
        assert (tmp_path / "a.tg").read_bytes() == (tmp_path / "b.tg").read_bytes()
        assert (tmp_path / "a.tg.tree").read_bytes() == (tmp_path / "b.tg.tree").read_bytes()

    def test_explore_twice_identical(self, tmp_path):
        graph, tree = gen_instance(tmp_path, 6, 33 * 10, 1, 9)
        outs = []
        for name in ("s1.txt", "s2.txt"):
            sched = tmp_path / name
            proc = run_cli(
                "explore", "--graph", str(graph), "--k", "1", "--delta", "5",
                "--start", "0", "--tree", str(tree), "--seed", "3", "--out", str(sched),
            )
            assert proc.returncode == 0
            outs.append(sched.read_bytes())
        assert outs[0] == outs[1]
