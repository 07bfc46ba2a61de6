"""Command-line front end: a thin client over the service operations.

Every subcommand builds a request model, executes it (in-process by
default, or against a running service when --server is given), writes the
requested output files, and maps the outcome to an exit code:

    0  converged / check passed
    2  bad flags or invalid parameter combination
    3  non-convergence or a failed run
    4  crosscheck tolerance breach
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from .optimize import BacktrackExhaustedError, IterRecord, RunStatus
from .serialize import format_float, record_lines, write_schedule_json
from .service import operations
from .service.models import (
    CrosscheckRequest,
    CrosscheckResponse,
    RunRequest,
    RunResponse,
    ScalingRequest,
    ScalingResponse,
    ScheduleDoc,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NONCONVERGENCE = 3
EXIT_CROSSCHECK = 4


class _RemoteClient:
    """POSTs request models to a running service instance."""

    def __init__(self, base_url: str):
        self.base_url = base_url.rstrip("/")

    def post(self, route: str, request, response_model):
        import httpx

        reply = httpx.post(
            f"{self.base_url}{route}", json=request.model_dump(mode="json"), timeout=600.0
        )
        if reply.status_code == 422:
            raise ValueError(f"server rejected the request: {reply.text}")
        if reply.status_code != 200:
            raise RuntimeError(f"server error {reply.status_code}: {reply.text}")
        return response_model.model_validate(reply.json())


def _execute_run(args: argparse.Namespace, request: RunRequest) -> RunResponse:
    if args.server:
        return _RemoteClient(args.server).post("/run", request, RunResponse)
    return operations.execute_run(request)


def _step_value(text: str) -> float | None:
    if text == "auto":
        return None
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"step must be 'auto' or a number, got {text!r}") from exc


def _write_trace(path: str, response: RunResponse) -> None:
    records = [IterRecord(**row.model_dump()) for row in response.trace]
    Path(path).write_text("\n".join(record_lines(records)) + "\n")


def _run_request(args: argparse.Namespace) -> RunRequest:
    return RunRequest(
        method=args.method,
        qubits=args.qubits,
        marked=args.marked,
        eps=args.eps,
        step=args.step,
        delta=args.delta,
        max_iters=args.max_iters,
        iters=args.iters,
    )


def cmd_run(args: argparse.Namespace) -> int:
    response = _execute_run(args, _run_request(args))
    if args.trace:
        _write_trace(args.trace, response)
    if args.schedule:
        write_schedule_json(args.schedule, response.schedule.model_dump(mode="json"))
    print(response.summary)
    return EXIT_OK if response.status is RunStatus.CONVERGED else EXIT_NONCONVERGENCE


def cmd_scaling(args: argparse.Namespace) -> int:
    request = ScalingRequest(n_min=args.n_min, n_max=args.n_max, marked=args.marked, eps=args.eps)
    if args.server:
        response = _RemoteClient(args.server).post("/scaling", request, ScalingResponse)
    else:
        response = operations.execute_scaling(request)
    if args.trace:
        lines = ["n,sqrtN,iterations,oracle_queries"]
        lines += [
            f"{r.n},{format_float(r.sqrtN)},{r.iterations},{r.oracle_queries}"
            for r in response.rows
        ]
        Path(args.trace).write_text("\n".join(lines) + "\n")
    print(response.summary)
    return EXIT_OK


def cmd_crosscheck(args: argparse.Namespace) -> int:
    request = CrosscheckRequest(
        qubits=args.qubits, marked=args.marked, eps=args.eps, seed=args.seed
    )
    if args.server:
        response = _RemoteClient(args.server).post("/crosscheck", request, CrosscheckResponse)
    else:
        response = operations.execute_crosscheck(request)
    if args.trace:
        lines = ["method,k,dq,dx,dy"]
        lines += [
            f"{r.method},{r.k},{format_float(r.dq)},{format_float(r.dx)},{format_float(r.dy)}"
            for r in response.rows
        ]
        Path(args.trace).write_text("\n".join(lines) + "\n")
    verdict = "PASS" if response.passed else "FAIL"
    print(
        f"crosscheck n={args.qubits} M={args.marked}: max|error|={response.max_error:.3e} "
        f"tolerance={response.tolerance:.0e} {verdict}"
    )
    return EXIT_OK if response.passed else EXIT_CROSSCHECK


def cmd_export_schedule(args: argparse.Namespace) -> int:
    request = _run_request(args)
    if args.server:
        schedule = _RemoteClient(args.server).post("/schedule", request, ScheduleDoc)
    else:
        schedule = operations.compile_schedule(request)
    write_schedule_json(args.schedule, schedule.model_dump(mode="json"))
    print(
        f"schedule written to {args.schedule}: {len(schedule.iterations)} iteration(s), "
        f"{schedule.total_oracle_queries} oracle queries"
    )
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("groveropt.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def _add_run_flags(p: argparse.ArgumentParser, schedule_required: bool = False) -> None:
    p.add_argument("--method", required=True, choices=["rga", "rmn", "grover"])
    p.add_argument("--qubits", required=True, type=int)
    p.add_argument("--marked", type=int, default=1)
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--step", type=_step_value, default=None,
                   help="retraction step for rga: 'auto' (= 1/L) or a number")
    p.add_argument("--delta", type=float, default=1e-3, help="newton damping floor")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--iters", type=int, default=None, help="iteration count (grover only)")
    if schedule_required:
        p.add_argument("--schedule", required=True, help="output schedule JSON path")
    else:
        p.add_argument("--trace", default=None, help="output trace CSV path")
        p.add_argument("--schedule", default=None, help="output schedule JSON path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groveropt",
        description="Riemannian optimizers for quantum search, with exportable gate schedules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one optimizer and write trace/schedule files")
    _add_run_flags(p_run)
    p_run.add_argument("--server", default=None, help="base URL of a running service")
    p_run.set_defaults(func=cmd_run)

    p_sc = sub.add_parser("scaling", help="newton iteration counts across qubit sizes")
    p_sc.add_argument("--n-min", required=True, type=int)
    p_sc.add_argument("--n-max", required=True, type=int)
    p_sc.add_argument("--marked", type=int, default=1)
    p_sc.add_argument("--eps", type=float, default=1e-6)
    p_sc.add_argument("--trace", default=None, help="output CSV path")
    p_sc.add_argument("--server", default=None, help="base URL of a running service")
    p_sc.set_defaults(func=cmd_scaling)

    p_cc = sub.add_parser(
        "crosscheck", help="mirror identical gate words through the 2x2 and dense paths"
    )
    p_cc.add_argument("--qubits", required=True, type=int)
    p_cc.add_argument("--marked", type=int, default=1)
    p_cc.add_argument("--eps", type=float, default=1e-6)
    p_cc.add_argument("--seed", type=int, default=0, help="seed for the random-word segment")
    p_cc.add_argument("--trace", default=None, help="output error CSV path")
    p_cc.add_argument("--server", default=None, help="base URL of a running service")
    p_cc.set_defaults(func=cmd_crosscheck)

    p_ex = sub.add_parser("export-schedule", help="run inline and write only the schedule")
    _add_run_flags(p_ex, schedule_required=True)
    p_ex.add_argument("--server", default=None, help="base URL of a running service")
    p_ex.set_defaults(func=cmd_export_schedule)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BacktrackExhaustedError, operations.NonConvergenceError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
