"""The service's work functions, shared by the HTTP app and the CLI.

Each function maps a request model to a response model; neither side does
any numerics of its own.  The scaling study fans runs out to a bounded
process pool and merges results back in qubit order, so responses are
deterministic regardless of worker scheduling.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .. import dense, plane, serialize
from ..optimize import Method, RunConfig, RunResult, RunStatus, run
from .models import (
    CrosscheckRequest,
    CrosscheckResponse,
    CrosscheckRow,
    RunRequest,
    RunResponse,
    ScalingFit,
    ScalingRequest,
    ScalingResponse,
    ScalingRow,
    ScheduleDoc,
    TraceRow,
)

CROSSCHECK_TOLERANCE = 1e-12


class NonConvergenceError(RuntimeError):
    """A run that was required to converge hit its iteration cap."""


def _execute(request: RunRequest) -> RunResult:
    spec = plane.make_spec(request.qubits, request.marked)
    cfg = RunConfig(
        method=request.method,
        eps=request.eps,
        step=request.step,
        delta=request.delta,
        max_iters=request.max_iters,
    )
    return run(spec, cfg, grover_iters=request.iters)


def _run_response(result: RunResult) -> RunResponse:
    trace = result.trace
    return RunResponse(
        status=trace.status,
        iterations=trace.iterations,
        final_q=trace.final.q,
        final_err=trace.final.err,
        final_grad_norm=trace.final.grad_norm,
        oracle_queries=trace.final.oracle_queries,
        trial_queries=result.trial_oracle_queries,
        summary=serialize.run_summary(result),
        trace=[TraceRow(**r._asdict()) for r in trace.records],
        schedule=ScheduleDoc.model_validate(serialize.schedule_document(result)),
    )


def execute_run(request: RunRequest) -> RunResponse:
    return _run_response(_execute(request))


def compile_schedule(request: RunRequest) -> ScheduleDoc:
    """Run inline and return only the exportable gate-angle schedule."""
    return ScheduleDoc.model_validate(serialize.schedule_document(_execute(request)))


def _scaling_run(args: tuple[int, int, float]) -> tuple[int, int, int]:
    n, marked, eps = args
    spec = plane.make_spec(n, marked)
    result = run(spec, RunConfig(method=Method.RMN, eps=eps))
    if result.trace.status is not RunStatus.CONVERGED:
        raise NonConvergenceError(f"newton run at n={n} hit its iteration cap")
    return n, result.trace.iterations, result.trace.final.oracle_queries


def fit_line(xs: list[float], ys: list[float]) -> ScalingFit | None:
    """Least-squares line with R^2; None when the fit is degenerate."""
    if len(xs) < 2:
        return None
    a = np.vstack([np.asarray(xs), np.ones(len(xs))]).T
    yv = np.asarray(ys, dtype=float)
    ss_tot = float(np.sum((yv - yv.mean()) ** 2))
    if ss_tot == 0.0:
        return None
    coef, *_ = np.linalg.lstsq(a, yv, rcond=None)
    residuals = yv - a @ coef
    r_squared = 1.0 - float(np.sum(residuals**2)) / ss_tot
    return ScalingFit(slope=float(coef[0]), intercept=float(coef[1]), r_squared=r_squared)


def execute_scaling(request: ScalingRequest) -> ScalingResponse:
    ns = list(range(request.n_min, request.n_max + 1))
    jobs = [(n, request.marked, request.eps) for n in ns]
    workers = min(4, os.cpu_count() or 1, len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scaling_run, jobs))
    else:
        results = [_scaling_run(job) for job in jobs]
    results.sort(key=lambda r: r[0])
    rows = [
        ScalingRow(n=n, sqrtN=math.sqrt(2**n), iterations=it, oracle_queries=oq)
        for n, it, oq in results
    ]
    fit = fit_line([r.sqrtN for r in rows], [float(r.iterations) for r in rows])
    if fit is None:
        summary = f"{len(rows)} run(s); no fit (need at least two distinct sizes)"
    else:
        summary = (
            f"iterations ~ {fit.slope:.4f} * sqrt(N) + {fit.intercept:.2f}"
            f" (R^2 = {fit.r_squared:.6f}) over n in [{request.n_min}, {request.n_max}]"
        )
    return ScalingResponse(rows=rows, fit=fit, summary=summary)


def _mirror_words(
    label: str,
    words,
    plane_points: list[tuple[float, float, float]],
    world: dense.DenseWorld,
) -> list[CrosscheckRow]:
    """Replay accepted words densely, comparing (q, x, y) step by step."""
    rows = []
    state = dense.initial_dense_state(world)
    for k, word in enumerate(words):
        state = dense.apply_word_dense(state, word, world)
        xd, yd, qd, _ = dense.plane_observables(world, state)
        xp, yp, qp = plane_points[k]
        rows.append(
            CrosscheckRow(
                method=label, k=k, dq=abs(qp - qd), dx=abs(xp - xd), dy=abs(yp - yd)
            )
        )
    return rows


def execute_crosscheck(request: CrosscheckRequest) -> CrosscheckResponse:
    spec = plane.make_spec(request.qubits, request.marked)
    world = dense.build_world(request.qubits, range(request.marked))
    rows: list[CrosscheckRow] = []

    for method in (Method.RGA, Method.RMN):
        result = run(spec, RunConfig(method=method, eps=request.eps))
        points = [(r.x, r.y, r.q) for r in result.trace.records[1:]]
        rows.extend(_mirror_words(method.value, result.words, points, world))

    # seeded random-word segment: same equivalence on arbitrary gate sequences
    rng = np.random.default_rng(request.seed)
    state = plane.initial_state(spec)
    gates = dense.random_word(rng, request.random_gates, request.random_gates)
    points = []
    for gate in gates:
        state = plane.apply_word(state, (gate,))
        c = plane.grad_coeffs(state)
        points.append((c.x, c.y, c.q))
    rows.extend(
        _mirror_words("random", [(g,) for g in gates], points, world)
    )

    max_error = max((max(r.dq, r.dx, r.dy) for r in rows), default=0.0)
    return CrosscheckResponse(
        rows=rows,
        max_error=max_error,
        tolerance=CROSSCHECK_TOLERANCE,
        passed=max_error <= CROSSCHECK_TOLERANCE,
    )
