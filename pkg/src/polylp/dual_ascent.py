"""Dual subgradient ascent baseline on the un-augmented Lagrangian.

Variables snap to a Heaviside of the accumulated duals, replicas solve a
linear maximization over the parity polytope, and the duals move by a
constant step against the consensus residual.  The variable and replica
phases of one iteration read only the previous duals, so they are fully
parallel.  Kept as a baseline: it needs far more iterations than ADMM.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .admm_decoder import DecodeOutput, STATUS_CONVERGED, STATUS_MAX_ITERS, make_output
from .codes import ParityCheckMatrix
from .parity_polytope import maximize_linear


@dataclass(frozen=True)
class DualAscentConfig:
    """Constant dual step size, iteration cap, and residual tolerance."""

    step: float = 0.1
    t_max: int = 1000
    epsilon: float = 1e-5

    def __post_init__(self) -> None:
        if self.step <= 0:
            raise ValueError("step must be positive")
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")


def decode_dual_ascent(
    gamma: ArrayLike,
    code: ParityCheckMatrix,
    config: DualAscentConfig = DualAscentConfig(),
) -> DecodeOutput:
    """Decode by subgradient ascent on the dual of the decoding LP.

    Stops when the squared consensus residual drops below ``epsilon^2``
    times the total edge count, or at ``t_max``.
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (code.n_vars,):
        raise ValueError(f"expected a length-{code.n_vars} LLR vector")
    if not np.all(np.isfinite(gamma)):
        raise ValueError("LLR vector must be finite")
    ev = code.edge_var
    lam = np.zeros(code.n_edges)
    threshold = config.epsilon**2 * code.n_edges
    x = np.zeros(code.n_vars)
    status = STATUS_MAX_ITERS
    iterations = 0
    for t in range(1, config.t_max + 1):
        iterations = t
        dual_load = np.bincount(ev, weights=lam, minlength=code.n_vars)
        # Heaviside with theta(0) = 0.
        x = ((-gamma - dual_load) > 0.0).astype(float)
        z = np.empty(code.n_edges)
        for j in range(code.n_checks):
            sl = code.check_slice(j)
            z[sl] = maximize_linear(lam[sl])
        residual = x[ev] - z
        if float((residual**2).sum()) < threshold:
            status = STATUS_CONVERGED
            break
        lam += config.step * residual
    return make_output(x, status, iterations, code)
