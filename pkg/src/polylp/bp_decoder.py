"""Flooding-schedule sum-product belief propagation with saturating LLRs.

Baseline decoder for the comparative experiments.  Messages live in the
same nats-valued convention as the channel LLRs (positive favors bit 0),
check updates use the tanh rule with guarded hyperbolic arguments, and
every message saturates at ``llr_clip``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .admm_decoder import DecodeOutput, STATUS_CONVERGED, STATUS_MAX_ITERS
from .codes import ParityCheckMatrix, is_codeword

_ATANH_GUARD = 1.0 - 1e-15


@dataclass(frozen=True)
class BpConfig:
    """Iteration cap, saturation magnitude (nats), and early-exit toggle."""

    t_max: int = 1000
    llr_clip: float = 30.0
    early_stop: bool = True

    def __post_init__(self) -> None:
        if self.t_max < 1:
            raise ValueError("t_max must be at least 1")
        if self.llr_clip <= 0:
            raise ValueError("llr_clip must be positive")


def _check_node_update(
    v2c: NDArray[np.float64], code: ParityCheckMatrix, clip: float
) -> NDArray[np.float64]:
    # tanh-rule with leave-one-out products taken as prefix * suffix so a
    # zero message never forces a division.
    half = np.tanh(np.clip(0.5 * v2c, -0.5 * clip, 0.5 * clip))
    c2v = np.empty_like(v2c)
    for rows in code.checks_by_degree.values():
        t = half[rows]
        left = np.ones_like(t)
        right = np.ones_like(t)
        np.cumprod(t[:, :-1], axis=1, out=left[:, 1:])
        np.cumprod(t[:, :0:-1], axis=1, out=right[:, -2::-1])
        prod = np.clip(left * right, -_ATANH_GUARD, _ATANH_GUARD)
        c2v[rows.reshape(-1)] = np.clip(2.0 * np.arctanh(prod), -clip, clip).reshape(-1)
    return c2v


def posterior_llrs(
    gamma: ArrayLike,
    code: ParityCheckMatrix,
    config: BpConfig = BpConfig(),
) -> tuple[NDArray[np.float64], int, bool]:
    """Run flooding sum-product; return (beliefs, iterations, codeword_found).

    Beliefs are posterior LLRs in the channel convention.  With
    ``early_stop`` the loop exits once the hard decision satisfies every
    check and each bit is strictly decided (no exactly-zero belief).
    """
    gamma = np.asarray(gamma, dtype=float)
    if gamma.shape != (code.n_vars,):
        raise ValueError(f"expected a length-{code.n_vars} LLR vector")
    if not np.all(np.isfinite(gamma)):
        raise ValueError("LLR vector must be finite")
    ev = code.edge_var
    clip = config.llr_clip
    c2v = np.zeros(code.n_edges)
    beliefs = gamma.copy()
    iterations = 0
    found = False
    for t in range(1, config.t_max + 1):
        iterations = t
        totals = gamma + np.bincount(ev, weights=c2v, minlength=code.n_vars)
        v2c = np.clip(totals[ev] - c2v, -clip, clip)
        c2v = _check_node_update(v2c, code, clip)
        beliefs = gamma + np.bincount(ev, weights=c2v, minlength=code.n_vars)
        hard = (beliefs < 0.0).astype(np.uint8)
        if (
            config.early_stop
            and np.all(beliefs != 0.0)
            and is_codeword(code, hard)
        ):
            found = True
            break
    return beliefs, iterations, found


def decode_bp(
    gamma: ArrayLike,
    code: ParityCheckMatrix,
    config: BpConfig = BpConfig(),
) -> DecodeOutput:
    """Sum-product decode; soft outputs are posterior bit-1 probabilities."""
    beliefs, iterations, found = posterior_llrs(gamma, code, config)
    # Stable sigmoid of -belief: probability that the bit is 1.
    p_one = 0.5 * (1.0 - np.tanh(0.5 * beliefs))
    hard = (beliefs < 0.0).astype(np.uint8)
    integral = bool(np.all(np.minimum(p_one, 1.0 - p_one) <= 1e-5))
    return DecodeOutput(
        x=p_one,
        status=STATUS_CONVERGED if found else STATUS_MAX_ITERS,
        integral=integral,
        iterations=iterations,
        hard_decision=hard,
        ml_certificate=False,
    )
