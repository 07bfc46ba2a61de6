"""Tests for trace CSV and schedule JSON serialization."""

import json
import math

import pytest

from groveropt.optimize import Method, RunConfig, run_grover_baseline, run_rga, run_rmn
from groveropt.plane import make_spec
from groveropt.serialize import (
    TRACE_COLUMNS,
    load_schedule,
    replay_schedule,
    schedule_document,
    schedule_oracle_queries,
    schedule_word,
    trace_lines,
    write_schedule_json,
    write_trace_csv,
)
from groveropt.words import wrap_angle


class TestWrapAngle:
    def test_fixed_points(self):
        assert wrap_angle(0.0) == 0.0
        assert wrap_angle(math.pi) == math.pi
        assert wrap_angle(1.0) == 1.0
        assert wrap_angle(-1.0) == -1.0

    def test_open_interval_at_minus_pi(self):
        assert wrap_angle(-math.pi) == math.pi
        assert wrap_angle(3 * math.pi) == pytest.approx(math.pi, abs=1e-15)

    def test_range_and_consistency(self):
        for k in range(-50, 51):
            theta = 0.7 + 2 * math.pi * k
            w = wrap_angle(theta)
            assert -math.pi < w <= math.pi
            assert w == pytest.approx(0.7, abs=1e-13)


class TestTraceCsv:
    def test_header_and_shape(self):
        result = run_rga(make_spec(4, 1), RunConfig(method=Method.RGA, eps=1e-4))
        lines = trace_lines(result.trace)
        assert lines[0] == ",".join(TRACE_COLUMNS)
        assert len(lines) == len(result.trace.records) + 1
        first = lines[1].split(",")
        assert first[0] == "0"
        assert first[1] == "6.2500000000000000e-02"  # q0 with 17 significant digits

    def test_byte_identical_across_runs(self, tmp_path):
        cfg = RunConfig(method=Method.RMN, eps=1e-7)
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        write_trace_csv(a, run_rmn(make_spec(6, 1), cfg).trace)
        write_trace_csv(b, run_rmn(make_spec(6, 1), cfg).trace)
        assert a.read_bytes() == b.read_bytes()


class TestScheduleDocument:
    def test_structure_for_newton_run(self):
        result = run_rmn(make_spec(5, 1), RunConfig(method=Method.RMN, eps=1e-10))
        doc = schedule_document(result)
        assert doc["format"] == 1
        assert doc["spec"] == {"n": 5, "M": 1, "q0": 0.03125}
        assert doc["method"] == "rmn"
        assert len(doc["iterations"]) == result.trace.iterations
        for k, it in enumerate(doc["iterations"]):
            assert it["k"] == k
            assert len(it["gates"]) == 5
            kinds = [g["kind"] for g in it["gates"]]
            assert kinds == ["oracle", "diffusion", "oracle", "diffusion", "oracle"]
            assert all(-math.pi < g["theta"] <= math.pi for g in it["gates"])

    def test_query_totals_match_trace(self):
        result = run_rmn(make_spec(10, 1), RunConfig(method=Method.RMN, eps=1e-10))
        doc = schedule_document(result)
        assert doc["total_oracle_queries"] == schedule_oracle_queries(doc)
        assert doc["total_oracle_queries"] == 3 * result.trace.iterations
        assert doc["trial_queries"] == 3 * result.trace.total_backtracks
        assert (
            doc["total_oracle_queries"] + doc["trial_queries"]
            == result.trace.final.oracle_queries
        )

    def test_grover_baseline_angles(self):
        result = run_grover_baseline(make_spec(3, 1), 3)
        doc = schedule_document(result)
        gates = [g for it in doc["iterations"] for g in it["gates"]]
        assert len(gates) == 6
        assert all(abs(g["theta"]) == math.pi for g in gates)
        assert doc["total_oracle_queries"] == 3

    def test_empty_converged_run(self):
        result = run_rga(make_spec(4, 1), RunConfig(method=Method.RGA, eps=1.0))
        doc = schedule_document(result)
        assert doc["iterations"] == []
        assert doc["total_oracle_queries"] == 0
        assert replay_schedule(doc) == 0.0625


class TestReplay:
    @pytest.mark.parametrize(
        "make_result",
        [
            lambda: run_rga(make_spec(6, 1), RunConfig(method=Method.RGA, eps=1e-7)),
            # fixed experimental step, capped: replay must also hold for a
            # schedule that ends in MAX_ITERS
            lambda: run_rga(
                make_spec(4, 1), RunConfig(method=Method.RGA, eps=1e-8, step=0.5, max_iters=150)
            ),
            lambda: run_rmn(make_spec(8, 1), RunConfig(method=Method.RMN, eps=1e-10)),
            lambda: run_rmn(make_spec(5, 3), RunConfig(method=Method.RMN, eps=1e-7)),
            lambda: run_grover_baseline(make_spec(4, 1), 7),
        ],
    )
    def test_replay_reproduces_final_q(self, make_result):
        result = make_result()
        doc = schedule_document(result)
        assert abs(replay_schedule(doc) - result.trace.final.q) <= 1e-12

    def test_file_round_trip(self, tmp_path):
        result = run_rmn(make_spec(5, 1), RunConfig(method=Method.RMN, eps=1e-10))
        doc = schedule_document(result)
        path = tmp_path / "schedule.json"
        write_schedule_json(path, doc)
        loaded = load_schedule(path)
        assert loaded == doc
        assert abs(replay_schedule(loaded) - result.trace.final.q) <= 1e-12
        assert schedule_word(loaded) == schedule_word(doc)

    def test_json_floats_round_trip_exactly(self, tmp_path):
        result = run_rmn(make_spec(7, 1), RunConfig(method=Method.RMN, eps=1e-6))
        doc = schedule_document(result)
        path = tmp_path / "schedule.json"
        write_schedule_json(path, doc)
        loaded = json.loads(path.read_text())
        for it_a, it_b in zip(doc["iterations"], loaded["iterations"]):
            for g_a, g_b in zip(it_a["gates"], it_b["gates"]):
                assert g_a["theta"] == g_b["theta"]
