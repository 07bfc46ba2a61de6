"""FastAPI app exposing the optimizer runs and schedule compilation.

The service is the multi-client surface: downstream circuit builders can
POST a search instance and get back a gate-angle schedule, and dashboards
can pull traces and scaling studies.  All numerics live in the core
package; routes only translate HTTP to the shared operation functions.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..optimize import BacktrackExhaustedError
from . import operations
from .models import (
    CrosscheckRequest,
    CrosscheckResponse,
    HealthResponse,
    RunRequest,
    RunResponse,
    ScalingRequest,
    ScalingResponse,
    ScheduleDoc,
)


def create_app() -> FastAPI:
    app = FastAPI(
        title="groveropt",
        description="Grover-compatible Riemannian search optimizers with exportable gate schedules",
        version=__version__,
    )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/run", response_model=RunResponse)
    def run_experiment(request: RunRequest) -> RunResponse:
        try:
            return operations.execute_run(request)
        except BacktrackExhaustedError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc

    @app.post("/scaling", response_model=ScalingResponse)
    def scaling_study(request: ScalingRequest) -> ScalingResponse:
        try:
            return operations.execute_scaling(request)
        except (operations.NonConvergenceError, BacktrackExhaustedError) as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc

    @app.post("/crosscheck", response_model=CrosscheckResponse)
    def crosscheck(request: CrosscheckRequest) -> CrosscheckResponse:
        return operations.execute_crosscheck(request)

    @app.post("/schedule", response_model=ScheduleDoc)
    def schedule(request: RunRequest) -> ScheduleDoc:
        try:
            return operations.compile_schedule(request)
        except BacktrackExhaustedError as exc:
            raise HTTPException(status_code=500, detail=str(exc)) from exc

    return app


app = create_app()
