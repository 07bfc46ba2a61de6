"""Iteration engines: gradient ascent, modified Newton, Grover baseline.

All three run entirely on the 2x2 plane simulator.  Each produces an
IterTrace (one record per visited iterate, terminal record included) and
the list of accepted gate words, which concatenated form the executable
schedule for the run.

Oracle-query accounting is conservative: every Armijo trial evaluation
costs one word (three queries for the five-factor retraction) whether or
not the trial is accepted, because on hardware a rejected trial still
burns its circuit executions.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import NamedTuple

from . import plane
from .plane import GradCoeffs, OracleSpec, PlaneState
from .retraction import five_factor_word
from .words import GateWord, diffusion, oracle, oracle_count

# below this the retraction direction is numerically zero and no step exists
_DEGENERATE_DIRECTION = 1e-300


class Method(str, enum.Enum):
    RGA = "rga"          # fixed-step Riemannian gradient ascent
    RMN = "rmn"          # Riemannian modified Newton with Armijo backtracking
    GROVER = "grover"    # fixed-angle Grover iteration baseline


class RunStatus(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERS = "max_iters"


class BacktrackExhaustedError(RuntimeError):
    """Armijo backtracking ran out of halvings; numerical breakdown.

    Fires when no halving can certify an increase.  In practice that means
    the success probability has saturated at machine precision under a
    tolerance below double resolution (eps under ~2e-8: see README,
    numerical notes) or the config is pathological; silently continuing
    would corrupt the trace either way.
    """


def l_rie(spec: OracleSpec) -> float:
    """Smoothness constant 2 + N / sqrt(2 M (N - M)).

    Its reciprocal is the provably convergent fixed step for gradient
    ascent.
    """
    n_items = spec.size
    m = spec.marked_count
    return 2.0 + n_items / math.sqrt(2.0 * m * (n_items - m))


def rmn_gamma(q: float, delta: float) -> float:
    """Modified-Newton scaling 1 / max(delta, 2q - 1).

    For q > 1/2 this is the exact Newton scaling 1/(2q-1); below it the
    damping floor delta keeps the direction an ascent direction.
    """
    return 1.0 / max(delta, 2.0 * q - 1.0)


def default_max_iters(spec: OracleSpec, eps: float) -> int:
    """Iteration cap comfortably above the proven gradient-ascent bound."""
    budget = 20.0 * l_rie(spec) * math.log(1.0 / eps) if eps < 1.0 else 0.0
    return math.ceil(max(budget, 0.0)) + 100


@dataclass(frozen=True)
class RunConfig:
    """Settings for a single optimizer run.

    step=None means the provable default 1/l_rie for gradient ascent (the
    CLI spells it "auto"); pass 0.5 to reproduce the fixed experimental
    step.  max_iters=None resolves per spec via default_max_iters.  The
    max_backtracks cap and the max_iters default are engineering choices:
    legitimate runs never reach either.
    """

    method: Method
    eps: float = 1e-6
    step: float | None = None
    delta: float = 1e-3
    armijo_c: float = 1e-4
    armijo_rho: float = 0.5
    max_iters: int | None = None
    max_backtracks: int = 60

    def __post_init__(self) -> None:
        if not self.eps > 0:
            raise ValueError(f"eps must be positive, got {self.eps}")
        if not 0 < self.armijo_c < 1:
            raise ValueError(f"armijo_c must lie in (0, 1), got {self.armijo_c}")
        if not 0 < self.armijo_rho < 1:
            raise ValueError(f"armijo_rho must lie in (0, 1), got {self.armijo_rho}")
        if self.step is not None and not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.max_iters is not None and self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.max_backtracks < 0:
            raise ValueError(f"max_backtracks must be nonnegative, got {self.max_backtracks}")

    def resolve_max_iters(self, spec: OracleSpec) -> int:
        return self.max_iters if self.max_iters is not None else default_max_iters(spec, self.eps)


class IterRecord(NamedTuple):
    """One trace row.

    State columns (q, err, grad_norm, x, y) describe iterate k.  Step
    columns (t, gamma, backtracks) describe the step taken from k; the
    terminal row carries t=0, gamma=1, backtracks=0.  oracle_queries is
    cumulative through the step recorded on this row, trial evaluations
    included.
    """

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


@dataclass
class IterTrace:
    method: Method
    spec: OracleSpec
    records: list[IterRecord] = field(default_factory=list)
    status: RunStatus = RunStatus.CONVERGED

    @property
    def iterations(self) -> int:
        """Number of accepted steps (the terminal record is not a step)."""
        return len(self.records) - 1

    @property
    def final(self) -> IterRecord:
        return self.records[-1]

    @property
    def total_backtracks(self) -> int:
        return sum(r.backtracks for r in self.records)


@dataclass
class RunResult:
    trace: IterTrace
    words: list[GateWord]

    @property
    def accepted_oracle_queries(self) -> int:
        return sum(oracle_count(w) for w in self.words)

    @property
    def trial_oracle_queries(self) -> int:
        """Query cost of rejected Armijo trials, not part of the schedule."""
        return self.trace.final.oracle_queries - self.accepted_oracle_queries


class ArmijoResult(NamedTuple):
    t: float
    state: PlaneState
    q: float
    backtracks: int


def armijo_search(
    state: PlaneState, coeffs: GradCoeffs, gamma: float, cfg: RunConfig
) -> ArmijoResult:
    """Backtracking line search along the scaled gradient direction.

    Finds the smallest m >= 0 such that t = rho^m satisfies the
    sufficient-increase condition

        q(trial) >= q + c * t * gamma * G,   G = 2 q (1 - q),

    where the trial state applies the five-factor word at scale t*gamma.
    Termination is guaranteed in exact arithmetic because the directional
    derivative gamma*G is positive; if max_backtracks halvings all fail we
    are deep in rounding noise and raise instead of looping.
    """
    q = coeffs.q
    g_sq = 2.0 * q * (1.0 - q)
    t = 1.0
    backtracks = 0
    while True:
        trial = plane.apply_word(state, five_factor_word(t * gamma, coeffs.x, coeffs.y))
        q_trial = plane.success_prob(trial)
        if q_trial >= q + cfg.armijo_c * t * gamma * g_sq:
            return ArmijoResult(t=t, state=trial, q=q_trial, backtracks=backtracks)
        backtracks += 1
        if backtracks > cfg.max_backtracks:
            detail = (
                " (success probability has saturated at machine precision; "
                "the requested tolerance exceeds double-precision resolution)"
                if q >= 1.0 - 1e-12
                else ""
            )
            raise BacktrackExhaustedError(
                f"no acceptable step after {cfg.max_backtracks} halvings at q={q!r}{detail}"
            )
        t *= cfg.armijo_rho


def run_rga(spec: OracleSpec, cfg: RunConfig) -> RunResult:
    """Gradient ascent with a fixed step, terminating on the gradient norm.

    Iterates until sqrt(2 q (1-q)) <= eps or the iteration cap is hit; the
    cap is recorded as a MAX_ITERS status on the trace, not an exception.
    Aggressive fixed steps (e.g. 0.5 at larger sizes) can drive the state
    onto a numerical critical point where the direction coefficients
    underflow while the q-derived norm is still held above eps by rounding;
    no further word can be built there, so that is also recorded as
    non-convergence.
    """
    if cfg.method is not Method.RGA:
        raise ValueError(f"run_rga requires method 'rga', got {cfg.method.value!r}")
    step = cfg.step if cfg.step is not None else 1.0 / l_rie(spec)
    max_iters = cfg.resolve_max_iters(spec)

    trace = IterTrace(method=Method.RGA, spec=spec)
    words: list[GateWord] = []
    state = plane.initial_state(spec)
    queries = 0
    k = 0
    while True:
        c = plane.grad_coeffs(state)
        gn = plane.grad_norm(c.q)
        if gn <= cfg.eps:
            trace.records.append(
                IterRecord(k, c.q, 1.0 - c.q, gn, c.x, c.y, 0.0, 1.0, 0, queries)
            )
            trace.status = RunStatus.CONVERGED
            return RunResult(trace=trace, words=words)
        if k >= max_iters or math.hypot(c.x, c.y) < _DEGENERATE_DIRECTION:
            trace.records.append(
                IterRecord(k, c.q, 1.0 - c.q, gn, c.x, c.y, 0.0, 1.0, 0, queries)
            )
            trace.status = RunStatus.MAX_ITERS
            return RunResult(trace=trace, words=words)
        word = five_factor_word(step, c.x, c.y)
        state = plane.apply_word(state, word)
        words.append(word)
        queries += oracle_count(word)
        trace.records.append(
            IterRecord(k, c.q, 1.0 - c.q, gn, c.x, c.y, step, 1.0, 0, queries)
        )
        k += 1


def run_rmn(spec: OracleSpec, cfg: RunConfig) -> RunResult:
    """Modified Newton: scaled gradient direction plus Armijo backtracking.

    The scaling gamma = 1/max(delta, 2q-1) folds into the retraction as the
    word scale t*gamma.  The success probability increases strictly at
    every accepted step (until it saturates at machine precision), and
    sufficiently near the optimum the unit step is accepted outright,
    giving the quadratic tail.
    """
    if cfg.method is not Method.RMN:
        raise ValueError(f"run_rmn requires method 'rmn', got {cfg.method.value!r}")
    max_iters = cfg.resolve_max_iters(spec)

    trace = IterTrace(method=Method.RMN, spec=spec)
    words: list[GateWord] = []
    state = plane.initial_state(spec)
    queries = 0
    k = 0
    while True:
        c = plane.grad_coeffs(state)
        gn = plane.grad_norm(c.q)
        gamma = rmn_gamma(c.q, cfg.delta)
        if gn <= cfg.eps:
            trace.records.append(
                IterRecord(k, c.q, 1.0 - c.q, gn, c.x, c.y, 0.0, 1.0, 0, queries)
            )
            trace.status = RunStatus.CONVERGED
            return RunResult(trace=trace, words=words)
        if k >= max_iters or math.hypot(c.x, c.y) < _DEGENERATE_DIRECTION:
            trace.records.append(
                IterRecord(k, c.q, 1.0 - c.q, gn, c.x, c.y, 0.0, 1.0, 0, queries)
            )
            trace.status = RunStatus.MAX_ITERS
            return RunResult(trace=trace, words=words)
        found = armijo_search(state, c, gamma, cfg)
        word = five_factor_word(found.t * gamma, c.x, c.y)
        state = found.state
        words.append(word)
        # accepted word plus one word per rejected trial
        queries += oracle_count(word) * (1 + found.backtracks)
        trace.records.append(
            IterRecord(
                k, c.q, 1.0 - c.q, gn, c.x, c.y, found.t, gamma, found.backtracks, queries
            )
        )
        k += 1


def run_grover_baseline(spec: OracleSpec, iters: int) -> RunResult:
    """Textbook Grover iteration: oracle(pi) then diffusion(pi), iters times.

    Runs exactly the requested number of iterations regardless of where q
    lands; the point of the baseline is to expose overshooting when run
    past the optimum.  One oracle query per iteration.
    """
    if iters < 0:
        raise ValueError(f"iteration count must be nonnegative, got {iters}")
    grover_word = (oracle(math.pi), diffusion(math.pi))

    trace = IterTrace(method=Method.GROVER, spec=spec)
    words: list[GateWord] = []
    state = plane.initial_state(spec)
    queries = 0
    for k in range(iters):
        c = plane.grad_coeffs(state)
        state = plane.apply_word(state, grover_word)
        words.append(grover_word)
        queries += 1
        trace.records.append(
            IterRecord(k, c.q, 1.0 - c.q, plane.grad_norm(c.q), c.x, c.y, 1.0, 1.0, 0, queries)
        )
    c = plane.grad_coeffs(state)
    trace.records.append(
        IterRecord(iters, c.q, 1.0 - c.q, plane.grad_norm(c.q), c.x, c.y, 0.0, 1.0, 0, queries)
    )
    trace.status = RunStatus.CONVERGED
    return RunResult(trace=trace, words=words)


def run(spec: OracleSpec, cfg: RunConfig, grover_iters: int | None = None) -> RunResult:
    """Dispatch on cfg.method; grover_iters only applies to the baseline."""
    if cfg.method is Method.RGA:
        return run_rga(spec, cfg)
    if cfg.method is Method.RMN:
        return run_rmn(spec, cfg)
    if grover_iters is None:
        raise ValueError("the grover baseline needs an explicit iteration count")
    return run_grover_baseline(spec, grover_iters)
