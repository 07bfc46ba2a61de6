"""Trace CSV and schedule JSON serialization, plus schedule replay.

Trace files are byte-deterministic: fixed column order, 17 significant
digits in scientific notation for every float.  Schedules are JSON with
shortest-round-trip floats so a replay reproduces the run; angles are
reduced to (-pi, pi] only here, never inside a running trajectory.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from . import plane
from .optimize import IterRecord, IterTrace, RunResult
from .words import Gate, GateKind, GateWord, oracle_count, wrap_angle

SCHEDULE_FORMAT = 1

TRACE_COLUMNS = ("k", "q", "err", "grad_norm", "x", "y", "t", "gamma", "backtracks", "oracle_queries")

_INT_COLUMNS = {"k", "backtracks", "oracle_queries"}


def format_float(value: float) -> str:
    """Fixed scientific notation with 17 significant digits."""
    return f"{value:.16e}"


def record_lines(records: Iterable[IterRecord]) -> list[str]:
    """CSV lines (header first, no newlines)."""
    lines = [",".join(TRACE_COLUMNS)]
    for r in records:
        row = r._asdict()
        lines.append(
            ",".join(
                str(row[c]) if c in _INT_COLUMNS else format_float(row[c])
                for c in TRACE_COLUMNS
            )
        )
    return lines


def trace_lines(trace: IterTrace) -> list[str]:
    return record_lines(trace.records)


def write_trace_csv(path: str | Path, trace: IterTrace) -> None:
    Path(path).write_text("\n".join(trace_lines(trace)) + "\n")


def schedule_document(result: RunResult) -> dict[str, Any]:
    """Build the exportable schedule for a finished run.

    Only accepted words appear (the deployable circuit); the query cost of
    rejected Armijo trials is reported separately as trial_queries so the
    accounting stays honest.  Angles are wrapped to (-pi, pi].
    """
    spec = result.trace.spec
    iterations = [
        {
            "k": k,
            "gates": [
                {"kind": gate.kind.value, "theta": wrap_angle(gate.theta)} for gate in word
            ],
        }
        for k, word in enumerate(result.words)
    ]
    return {
        "format": SCHEDULE_FORMAT,
        "spec": {"n": spec.n, "M": spec.marked_count, "q0": spec.q0},
        "method": result.trace.method.value,
        "iterations": iterations,
        "total_oracle_queries": result.accepted_oracle_queries,
        "trial_queries": result.trial_oracle_queries,
    }


def write_schedule_json(path: str | Path, document: dict[str, Any]) -> None:
    Path(path).write_text(json.dumps(document, indent=2) + "\n")


def load_schedule(path: str | Path) -> dict[str, Any]:
    return json.loads(Path(path).read_text())


def schedule_word(document: dict[str, Any]) -> GateWord:
    """Flatten a schedule document into one long gate word."""
    gates = []
    for it in document["iterations"]:
        for g in it["gates"]:
            gates.append(Gate(GateKind(g["kind"]), float(g["theta"])))
    return tuple(gates)


def schedule_oracle_queries(document: dict[str, Any]) -> int:
    return oracle_count(schedule_word(document))


def replay_schedule(document: dict[str, Any]) -> float:
    """Run an exported schedule through the plane simulator; return final q."""
    spec = plane.make_spec(document["spec"]["n"], document["spec"]["M"])
    state = plane.apply_word(plane.initial_state(spec), schedule_word(document))
    return plane.success_prob(state)


def run_summary(result: RunResult) -> str:
    """One-line human summary printed after a run."""
    t = result.trace
    return (
        f"method={t.method.value} n={t.spec.n} M={t.spec.marked_count} "
        f"status={t.status.value} iterations={t.iterations} "
        f"final_err={t.final.err:.6e} oracle_queries={t.final.oracle_queries}"
    )
