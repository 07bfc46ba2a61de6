"""Pydantic request/response schemas for the experiment service."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field, model_validator

from ..optimize import Method, RunStatus


class RunRequest(BaseModel):
    """Parameters of one optimizer run.

    step=None means the provable automatic step 1/L for gradient ascent;
    iters is required for (and only used by) the grover baseline.
    """

    method: Method
    qubits: int = Field(ge=1, le=62)
    marked: int = Field(default=1, ge=1)
    eps: float = Field(default=1e-6, gt=0)
    step: float | None = Field(default=None, gt=0)
    delta: float = Field(default=1e-3, gt=0)
    max_iters: int | None = Field(default=None, ge=1)
    iters: int | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _consistent(self) -> "RunRequest":
        if self.marked >= 2**self.qubits:
            raise ValueError(
                f"marked={self.marked} must be smaller than the search space 2^{self.qubits}"
            )
        if self.method is Method.GROVER and self.iters is None:
            raise ValueError("the grover baseline requires an explicit iteration count (iters)")
        return self


class TraceRow(BaseModel):
    k: int
    q: float
    err: float
    grad_norm: float
    x: float
    y: float
    t: float
    gamma: float
    backtracks: int
    oracle_queries: int


class ScheduleGate(BaseModel):
    kind: Literal["oracle", "diffusion"]
    theta: float


class ScheduleIteration(BaseModel):
    k: int
    gates: list[ScheduleGate]


class ScheduleSpec(BaseModel):
    n: int
    M: int
    q0: float


class ScheduleDoc(BaseModel):
    """Exported gate-angle schedule, format version 1."""

    format: int
    spec: ScheduleSpec
    method: Method
    iterations: list[ScheduleIteration]
    total_oracle_queries: int
    trial_queries: int


class RunResponse(BaseModel):
    status: RunStatus
    iterations: int
    final_q: float
    final_err: float
    final_grad_norm: float
    oracle_queries: int
    trial_queries: int
    summary: str
    trace: list[TraceRow]
    schedule: ScheduleDoc


class ScalingRequest(BaseModel):
    """Newton-method iteration counts over a range of qubit sizes."""

    n_min: int = Field(ge=2)
    n_max: int = Field(le=40)
    marked: int = Field(default=1, ge=1)
    eps: float = Field(default=1e-6, gt=0)

    @model_validator(mode="after")
    def _consistent(self) -> "ScalingRequest":
        if self.n_min > self.n_max:
            raise ValueError(f"n_min={self.n_min} must not exceed n_max={self.n_max}")
        if self.marked >= 2**self.n_min:
            raise ValueError(
                f"marked={self.marked} must be smaller than the smallest search space 2^{self.n_min}"
            )
        return self


class ScalingRow(BaseModel):
    n: int
    sqrtN: float
    iterations: int
    oracle_queries: int


class ScalingFit(BaseModel):
    slope: float
    intercept: float
    r_squared: float


class ScalingResponse(BaseModel):
    rows: list[ScalingRow]
    fit: ScalingFit | None
    summary: str


class CrosscheckRequest(BaseModel):
    """Mirror identical gate sequences through the 2x2 and dense paths.

    The default tolerance keeps the mirrored runs away from the
    double-precision saturation regime near q = 1 for every allowed size;
    pass a tighter eps for deep runs at sizes where the newton tail is
    known to resolve.
    """

    qubits: int = Field(ge=1, le=10)
    marked: int = Field(default=1, ge=1)
    eps: float = Field(default=1e-6, gt=0)
    seed: int = Field(default=0, ge=0)
    random_gates: int = Field(default=200, ge=0)

    @model_validator(mode="after")
    def _consistent(self) -> "CrosscheckRequest":
        if self.marked >= 2**self.qubits:
            raise ValueError(
                f"marked={self.marked} must be smaller than the search space 2^{self.qubits}"
            )
        return self


class CrosscheckRow(BaseModel):
    method: str
    k: int
    dq: float
    dx: float
    dy: float


class CrosscheckResponse(BaseModel):
    rows: list[CrosscheckRow]
    max_error: float
    tolerance: float
    passed: bool


class HealthResponse(BaseModel):
    status: str
    version: str
