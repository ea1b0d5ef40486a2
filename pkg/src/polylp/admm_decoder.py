"""ADMM solver for the relaxed decoding LP.

Each iteration averages adjusted per-check replicas into the variable
estimates, projects every check's over-relaxed replica onto the parity
polytope, and takes a dual ascent step.  The iteration stops when the
replicas agree with the variables and have stopped moving, both to a
degree-normalized tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .codes import ParityCheckMatrix, is_codeword
from .parity_polytope import project_batch

# An iterate further than this from {0, 1} in any coordinate is fractional.
INTEGRALITY_TOL = 1e-5

STATUS_CONVERGED = "Converged"
STATUS_MAX_ITERS = "MaxIters"


@dataclass(frozen=True)
class AdmmConfig:
    """Penalty, stopping tolerance, iteration cap, and over-relaxation."""

    mu: float = 3.0
    epsilon: float = 1e-5
    t_max: int = 1000
    rho: float = 1.9

    def __post_init__(self) -> None:
        if self.mu <= 0:
            raise ValueError("mu must be positive")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")
        if not (1.0 <= self.rho < 2.0):
            raise ValueError("rho must be in [1, 2)")


@dataclass
class AdmmState:
    """Iterates of one decode: variables, replicas, and duals.

    Replicas and duals are stored edge-flat in check order; the slice for
    check ``j`` is ``code.check_slice(j)``.  ``w`` carries the
    over-relaxed consensus mixture between the replica and dual updates.
    """

    x: NDArray[np.float64]
    z: NDArray[np.float64]
    lam: NDArray[np.float64]
    z_prev: NDArray[np.float64]
    w: NDArray[np.float64] = field(default_factory=lambda: np.empty(0))
    iterations: int = 0

    @classmethod
    def initial(cls, code: ParityCheckMatrix) -> "AdmmState":
        e = code.n_edges
        return cls(
            x=np.zeros(code.n_vars),
            z=np.zeros(e),
            lam=np.zeros(e),
            z_prev=np.zeros(e),
        )


@dataclass(frozen=True)
class DecodeOutput:
    """Result of one decode: relaxed solution, status, and hard decision.

    ``integral`` means every coordinate is within 1e-5 of a bit value.
    ``ml_certificate`` is set when the output is integral and its hard
    decision satisfies every check: an integral optimum of the relaxation
    is a maximum-likelihood codeword.
    """

    x: NDArray[np.float64]
    status: str
    integral: bool
    iterations: int
    hard_decision: NDArray[np.uint8]
    ml_certificate: bool


def make_output(
    x: NDArray[np.float64], status: str, iterations: int, code: ParityCheckMatrix
) -> DecodeOutput:
    hard = (x > 0.5).astype(np.uint8)
    integral = bool(np.all(np.minimum(np.abs(x), np.abs(1.0 - x)) <= INTEGRALITY_TOL))
    cert = integral and is_codeword(code, hard)
    return DecodeOutput(
        x=x,
        status=status,
        integral=integral,
        iterations=iterations,
        hard_decision=hard,
        ml_certificate=cert,
    )


def x_update(
    state: AdmmState,
    code: ParityCheckMatrix,
    gamma: NDArray[np.float64],
    config: AdmmConfig,
) -> NDArray[np.float64]:
    """Average the dual-adjusted replicas, step against the LLRs, clamp."""
    adj = state.z - state.lam / config.mu
    acc = np.bincount(code.edge_var, weights=adj, minlength=code.n_vars)
    deg = code.var_degrees
    x = np.clip((acc - gamma / config.mu) / np.maximum(deg, 1), 0.0, 1.0)
    if (deg == 0).any():
        # Unconstrained variables take the minimizer of their cost term.
        free = deg == 0
        x[free] = (gamma[free] < 0.0).astype(float)
    state.x = x
    return state.x


def z_update(
    state: AdmmState, code: ParityCheckMatrix, config: AdmmConfig
) -> NDArray[np.float64]:
    """Project each check's over-relaxed replica target onto the polytope."""
    gathered = state.x[code.edge_var]
    w = config.rho * gathered + (1.0 - config.rho) * state.z
    v = w + state.lam / config.mu
    z_new = np.empty_like(v)
    for rows in code.checks_by_degree.values():
        flat = rows.reshape(-1)
        z_new[flat] = project_batch(v[rows]).reshape(-1)
    state.z_prev = state.z
    state.w = w
    state.z = z_new
    return z_new


def lambda_update(
    state: AdmmState, code: ParityCheckMatrix, config: AdmmConfig
) -> NDArray[np.float64]:
    """Dual step against the residual of the same mixture the replicas saw."""
    state.lam = state.lam + config.mu * (state.w - state.z)
    return state.lam


def decode(
    gamma: ArrayLike,
    code: ParityCheckMatrix,
    config: AdmmConfig = AdmmConfig(),
) -> DecodeOutput:
    """Solve the decoding LP for the LLR vector ``gamma``.

    Replicas and duals start at zero.  Convergence requires both the
    replica-to-variable residual and the replica movement to fall below
    ``epsilon^2`` times the total edge count.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (code.n_vars,):
        raise ValueError(f"expected a length-{code.n_vars} LLR vector")
    if not np.all(np.isfinite(gamma)):
        raise ValueError("LLR vector must be finite")
    state = AdmmState.initial(code)
    threshold = config.epsilon**2 * code.n_edges
    status = STATUS_MAX_ITERS
    for t in range(1, config.t_max + 1):
        x_update(state, code, gamma, config)
        z_update(state, code, config)
        gathered = state.x[code.edge_var]
        primal = float(((gathered - state.z) ** 2).sum())
        moved = float(((state.z - state.z_prev) ** 2).sum())
        lambda_update(state, code, config)
        state.iterations = t
        if primal < threshold and moved < threshold:
            status = STATUS_CONVERGED
            break
    return make_output(state.x, status, state.iterations, code)
