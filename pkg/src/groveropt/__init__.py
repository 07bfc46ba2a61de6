"""Classically simulable Riemannian optimizers for quantum unstructured search.

Core idea: circuits built only from oracle and diffusion phase gates keep
the state in a fixed two-dimensional plane, so gradient-ascent and
modified-Newton searches over the unitary group reduce to exact 2x2
recursions whose gate angles can be precomputed classically and exported
as schedules.  A dense full-matrix oracle verifies every geometric
identity the fast path relies on.
"""

__version__ = "0.1.0"

from .optimize import (
    BacktrackExhaustedError,
    IterRecord,
    IterTrace,
    Method,
    RunConfig,
    RunResult,
    RunStatus,
    armijo_search,
    l_rie,
    rmn_gamma,
    run,
    run_grover_baseline,
    run_rga,
    run_rmn,
)
from .plane import (
    GradCoeffs,
    OracleSpec,
    PlaneState,
    apply_word,
    e_h,
    e_psi0,
    grad_coeffs,
    grad_norm,
    initial_state,
    make_spec,
    success_prob,
)
from .retraction import (
    DegenerateDirectionError,
    FiveFactorParams,
    first_order_check,
    five_factor_params,
    five_factor_word,
)
from .words import Gate, GateKind, GateWord, diffusion, oracle, oracle_count, wrap_angle

__all__ = [
    "__version__",
    "BacktrackExhaustedError",
    "DegenerateDirectionError",
    "FiveFactorParams",
    "Gate",
    "GateKind",
    "GateWord",
    "GradCoeffs",
    "IterRecord",
    "IterTrace",
    "Method",
    "OracleSpec",
    "PlaneState",
    "RunConfig",
    "RunResult",
    "RunStatus",
    "apply_word",
    "armijo_search",
    "diffusion",
    "e_h",
    "e_psi0",
    "first_order_check",
    "five_factor_params",
    "five_factor_word",
    "grad_coeffs",
    "grad_norm",
    "initial_state",
    "l_rie",
    "make_spec",
    "oracle",
    "oracle_count",
    "rmn_gamma",
    "run",
    "run_grover_baseline",
    "run_rga",
    "run_rmn",
    "success_prob",
    "wrap_angle",
]
