"""Geometry of the parity polytope: membership, two-slice decomposition,
exact Euclidean projection, and linear maximization.

The parity polytope ``PP_d`` is the convex hull of all even-weight binary
vectors of length ``d``.  Projection onto it is the workhorse of the
ADMM LP decoder: every check-node update is one projection.  The methods
here run in O(d log d), dominated by a single descending sort.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

# Absolute tolerance for comparisons against the constituent parity r.
PARITY_TOL = 1e-9


def even_floor(a: float) -> int:
    """Largest even integer less than or equal to ``a``."""
    if math.isnan(a):
        raise ValueError("even_floor of NaN")
    return 2 * math.floor(a / 2.0)


def even_ceil(a: float) -> int:
    """Smallest even integer greater than or equal to ``a``."""
    if math.isnan(a):
        raise ValueError("even_ceil of NaN")
    return 2 * math.ceil(a / 2.0)


def project_hypercube(v: ArrayLike) -> NDArray[np.float64]:
    """Componentwise projection onto the unit hypercube [0, 1]^d."""
    return np.clip(np.asarray(v, dtype=float), 0.0, 1.0)


def constituent_parity(v: ArrayLike) -> int:
    """Constituent parity of the projection of ``v`` onto the parity polytope.

    Equals the even floor of the l1 norm of the hypercube projection of
    ``v``; the l1 norm of the polytope projection is bracketed between
    this value and the even ceiling.
    """
    return even_floor(float(project_hypercube(v).sum()))


@dataclass(frozen=True)
class TwoSliceDecomposition:
    """Convex split of a parity-polytope point across two adjacent slices.

    A point ``u`` with ``r = even_floor(||u||_1)`` is a convex combination
    of a weight-``r`` and a weight-``(r+2)`` permutahedron point, with
    weight ``alpha`` on the lower slice.
    """

    r: int
    alpha: float


def _snapped_parity(s: float) -> int:
    # Snap sums that sit a rounding error below an even integer.
    return even_floor(s + PARITY_TOL)


def membership(u: ArrayLike, tol: float = PARITY_TOL) -> bool:
    """Test whether ``u`` lies in the parity polytope, within ``tol``.

    Uses the majorization characterization: ``u`` must lie in the unit
    hypercube and every sorted prefix sum must stay below the convex mix
    of the two slice bounds ``alpha*min(q, r) + (1-alpha)*min(q, r+2)``.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("membership expects a non-empty 1-D vector")
    d = u.size
    if np.any(u < -tol) or np.any(u > 1.0 + tol):
        return False
    s = min(max(float(u.sum()), 0.0), float(d))
    r = _snapped_parity(s)
    alpha = min(max((2.0 + r - s) / 2.0, 0.0), 1.0)
    if r + 2 > d and alpha < 1.0 - tol:
        # The upper slice does not exist; only an exactly-even total works.
        return False
    prefix = np.cumsum(np.sort(u)[::-1])
    q = np.arange(1, d + 1)
    bound = alpha * np.minimum(q, r) + (1.0 - alpha) * np.minimum(q, r + 2)
    return bool(np.all(prefix <= bound + tol))


def two_slice_decompose(u: ArrayLike, tol: float = PARITY_TOL) -> TwoSliceDecomposition:
    """Decompose a parity-polytope point into its two-slice form.

    Returns ``(r, alpha)`` with ``||u||_1 = alpha*r + (1-alpha)*(r+2)``.
    Raises ``ValueError`` if ``u`` is not in the polytope.
    """
    u = np.asarray(u, dtype=float)
    if not membership(u, tol):
        raise ValueError("vector is not in the parity polytope")
    s = min(max(float(u.sum()), 0.0), float(u.size))
    r = min(_snapped_parity(s), even_floor(float(u.size)))
    alpha = min(max((2.0 + r - s) / 2.0, 0.0), 1.0)
    return TwoSliceDecomposition(r=r, alpha=alpha)


@dataclass
class ProjectionWorkspace:
    """Scratch state and diagnostics for one projection call.

    Owned by a single caller at a time.  After a call that received this
    workspace, the fields describe the solved instance: the descending
    sort and permutation, hypercube projection, constituent parity ``r``,
    ``beta_max``, the merged activation breakpoints clipped to
    ``[0, beta_max]``, the active-range trackers ``a``/``b`` (1-based,
    only set by the incremental march), the running active sum ``V``, the
    last evaluated line value ``Lambda``, and the located ``beta_opt``.
    """

    v_sorted: NDArray[np.float64] | None = None
    perm: NDArray[np.intp] | None = None
    z_hat: NDArray[np.float64] | None = None
    r: int = 0
    beta_max: float = 0.0
    breakpoints: NDArray[np.float64] = field(default_factory=lambda: np.empty(0))
    a: int = 0
    b: int = 0
    V: float = 0.0
    Lambda: float = 0.0
    beta_opt: float = 0.0


def _check_input(u: ArrayLike) -> NDArray[np.float64]:
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ValueError("projection expects a non-empty 1-D vector")
    if not np.all(np.isfinite(u)):
        raise ValueError("projection input must be finite")
    return u


def _sign_pattern(d: int, r: int) -> NDArray[np.float64]:
    # +1 on the r+1 largest coordinates, -1 on the rest.
    f = np.ones(d)
    f[r + 1 :] = -1.0
    return f


def _beta_limit(v: NDArray[np.float64], r: int) -> float:
    d = v.size
    if r <= d - 2:
        return 0.5 * (v[r] - v[r + 1])
    return float(v[r])


def _merged_activation_breakpoints(
    v: NDArray[np.float64], r: int, beta_max: float
) -> NDArray[np.float64]:
    # Betas at which a clipped large coordinate or a zeroed small
    # coordinate enters the active band, restricted to [0, beta_max].
    cand = np.concatenate([v[: r + 1] - 1.0, -v[r + 1 :]])
    cand = cand[(cand >= 0.0) & (cand <= beta_max)]
    cand.sort()
    return cand


def _line_values(
    v: NDArray[np.float64], r: int, betas: NDArray[np.float64]
) -> NDArray[np.float64]:
    """Evaluate f_r . clip(v - beta * f_r, 0, 1) for each beta, in bulk.

    Works from ascending sorts and prefix sums of the two coordinate
    blocks, so a whole grid of betas costs O((d + B) log d).
    """
    lo = np.sort(v[: r + 1])
    hi = np.sort(v[r + 1 :])
    slo = np.concatenate([[0.0], np.cumsum(lo)])
    shi = np.concatenate([[0.0], np.cumsum(hi)])

    i_top = np.searchsorted(lo, 1.0 + betas, side="left")
    i_bot = np.searchsorted(lo, betas, side="right")
    part_lo = (lo.size - i_top) + (slo[i_top] - slo[i_bot]) - betas * (i_top - i_bot)

    j_top = np.searchsorted(hi, 1.0 - betas, side="left")
    j_bot = np.searchsorted(hi, -betas, side="right")
    part_hi = (hi.size - j_top) + (shi[j_top] - shi[j_bot]) + betas * (j_top - j_bot)
    return part_lo - part_hi


def project_parity_polytope(
    u: ArrayLike, workspace: ProjectionWorkspace | None = None
) -> NDArray[np.float64]:
    """Exact Euclidean projection of ``u`` onto the parity polytope.

    The projection preserves the componentwise order of ``u``, so the
    problem reduces to a piecewise-linear root search in a scalar
    ``beta``: the answer is ``clip(v - beta_opt * f_r, 0, 1)`` in sorted
    coordinates.  ``beta_opt`` is located by evaluating the line value at
    every breakpoint of the active set and interpolating on the crossing
    segment.  Cost is one sort plus linear passes, O(d log d).
    """
    u = _check_input(u)
    d = u.size
    perm = np.argsort(-u, kind="stable")
    v = u[perm]
    z_hat = np.clip(v, 0.0, 1.0)
    r = even_floor(float(z_hat.sum()))

    beta_opt = 0.0
    beta_max = 0.0
    breakpoints = np.empty(0)
    lam = 0.0
    z_sorted = z_hat
    if r < d:
        fz = 2.0 * float(z_hat[: r + 1].sum()) - float(z_hat.sum())
        lam = fz
        beta_max = _beta_limit(v, r)
        breakpoints = _merged_activation_breakpoints(v, r, beta_max)
        if fz > r + PARITY_TOL and beta_max > 0.0:
            # Grid of all kinks of the line value: activations plus the
            # betas where an active coordinate saturates at 0 or 1.
            cand = np.concatenate([v[: r + 1], 1.0 - v[r + 1 :]])
            cand = cand[(cand >= 0.0) & (cand <= beta_max)]
            grid = np.concatenate([[0.0], breakpoints, cand, [beta_max]])
            grid.sort()
            g = _line_values(v, r, grid)
            hit = g <= r
            idx = int(np.argmax(hit))
            if not hit[idx]:
                beta_opt = beta_max
                lam = float(g[-1])
            else:
                b0, b1 = grid[idx - 1], grid[idx]
                g0, g1 = g[idx - 1], g[idx]
                beta_opt = b0 + (g0 - r) * (b1 - b0) / (g0 - g1) if g0 > g1 else b1
                lam = float(g1)
            z_sorted = np.clip(v - beta_opt * _sign_pattern(d, r), 0.0, 1.0)

    if workspace is not None:
        workspace.v_sorted = v
        workspace.perm = perm
        workspace.z_hat = z_hat
        workspace.r = r
        workspace.beta_max = beta_max
        workspace.breakpoints = breakpoints
        workspace.Lambda = lam
        workspace.beta_opt = beta_opt

    out = np.empty(d)
    out[perm] = z_sorted
    return out


def project_breakpoint_march(
    u: ArrayLike, workspace: ProjectionWorkspace | None = None
) -> NDArray[np.float64]:
    """Projection via the incremental breakpoint march.

    Same contract as :func:`project_parity_polytope`, maintained as an
    independent mechanism: it walks the activation breakpoints in
    ascending order while updating the active range ``[a, b]`` and the
    running sum ``V``, and solves the crossing segment in closed form.
    Both implementations must agree to 1e-9.
    """
    u = _check_input(u)
    d = u.size
    perm = np.argsort(-u, kind="stable")
    v = u[perm]
    z_hat = np.clip(v, 0.0, 1.0)
    r = even_floor(float(z_hat.sum()))

    beta_opt = 0.0
    beta_max = 0.0
    breakpoints = np.empty(0)
    a = 0
    b = 0
    run_v = 0.0
    lam = 0.0
    z_sorted = z_hat

    if r < d:
        fz = 2.0 * float(z_hat[: r + 1].sum()) - float(z_hat.sum())
        lam = fz
        beta_max = _beta_limit(v, r)
        breakpoints = _merged_activation_breakpoints(v, r, beta_max)
        if fz > r + PARITY_TOL and beta_max > 0.0:
            # 1-based active range: a..r+1 among the large block,
            # r+2..b among the small block.
            a = 1 + int(np.count_nonzero(v[: r + 1] >= 1.0))
            b = (r + 1) + int(np.count_nonzero(v[r + 1 :] > 0.0))
            run_v = float(v[a - 1 : r + 1].sum() - v[r + 1 : b].sum())

            # Tag each breakpoint with which side activates there.
            tagged = sorted(
                [(float(v[i] - 1.0), 0) for i in range(r + 1)]
                + [(float(-v[i]), 1) for i in range(r + 1, d)]
            )
            tagged = [t for t in tagged if 0.0 <= t[0] <= beta_max]

            prev_beta, prev_g, prev_n = 0.0, fz, b - a + 1
            i = 0
            crossed = False
            while i < len(tagged):
                beta = tagged[i][0]
                while i < len(tagged) and tagged[i][0] == beta:
                    if tagged[i][1] == 0:
                        a -= 1
                        run_v += v[a - 1]
                    else:
                        b += 1
                        run_v -= v[b - 1]
                    i += 1
                n_act = b - a + 1
                g = (a - 1) + run_v - beta * n_act
                lam = g
                if g <= r:
                    # A crossing cannot sit on a flat segment; the guard
                    # only protects against rounding drift.
                    beta_opt = (
                        prev_beta + (prev_g - r) / prev_n if prev_n > 0 else beta
                    )
                    crossed = True
                    break
                prev_beta, prev_g, prev_n = beta, g, n_act
            if not crossed:
                if prev_n > 0:
                    beta_opt = min(prev_beta + (prev_g - r) / prev_n, beta_max)
                else:
                    beta_opt = beta_max
            z_sorted = np.clip(v - beta_opt * _sign_pattern(d, r), 0.0, 1.0)

    if workspace is not None:
        workspace.v_sorted = v
        workspace.perm = perm
        workspace.z_hat = z_hat
        workspace.r = r
        workspace.beta_max = beta_max
        workspace.breakpoints = breakpoints
        workspace.a = a
        workspace.b = b
        workspace.V = run_v
        workspace.Lambda = lam
        workspace.beta_opt = beta_opt

    out = np.empty(d)
    out[perm] = z_sorted
    return out


def project_batch(values: ArrayLike) -> NDArray[np.float64]:
    """Row-wise parity-polytope projection of an (m, d) array.

    Vectorizes the same breakpoint search across all rows; intended for
    the per-check projections of a decoder iteration, where ``d`` is a
    check degree (small).  Scratch memory is O(m * d^2).
    """
    vals = np.asarray(values, dtype=float)
    if vals.ndim != 2 or vals.shape[1] == 0:
        raise ValueError("project_batch expects an (m, d) array with d >= 1")
    if not np.all(np.isfinite(vals)):
        raise ValueError("projection input must be finite")
    m, d = vals.shape
    rows = np.arange(m)
    order = np.argsort(-vals, axis=1, kind="stable")
    v = vals[rows[:, None], order]
    z_hat = np.minimum(np.maximum(v, 0.0), 1.0)
    total = z_hat.sum(axis=1)
    r = (2.0 * np.floor(total / 2.0)).astype(np.int64)
    np.minimum(r, d, out=r)
    r_lo = np.minimum(r, d - 1)

    sign = np.where(np.arange(d)[None, :] <= r_lo[:, None], 1.0, -1.0)
    head = np.cumsum(z_hat, axis=1)[rows, r_lo]
    fz = 2.0 * head - total

    v_r1 = v[rows, r_lo]
    v_r2 = v[rows, np.minimum(r + 1, d - 1)]
    beta_max = np.where(r <= d - 2, 0.5 * (v_r1 - v_r2), v_r1)

    done = (r >= d) | (fz <= r + PARITY_TOL) | (beta_max <= 0.0)
    cap = np.where(done, 0.0, beta_max)

    # All kinks per row: activations and saturations on both blocks.
    grid = np.empty((m, 2 * d + 2))
    grid[:, 0] = 0.0
    grid[:, 1 : d + 1] = np.where(sign > 0, v - 1.0, -v)
    grid[:, d + 1 : 2 * d + 1] = np.where(sign > 0, v, 1.0 - v)
    grid[:, 2 * d + 1] = cap
    capcol = cap[:, None]
    np.minimum(np.maximum(grid, 0.0), capcol, out=grid)
    grid.sort(axis=1)

    z_grid = v[:, None, :] - grid[:, :, None] * sign[:, None, :]
    np.minimum(np.maximum(z_grid, 0.0, out=z_grid), 1.0, out=z_grid)
    g = np.einsum("ijk,ik->ij", z_grid, sign)

    hit = g <= r[:, None]
    idx = np.argmax(hit, axis=1)
    missed = idx == 0  # row 0 is beta = 0, never a hit unless masked as done
    np.maximum(idx, 1, out=idx)

    b0 = grid[rows, idx - 1]
    b1 = grid[rows, idx]
    g0 = g[rows, idx - 1]
    g1 = g[rows, idx]
    span = g0 - g1
    safe = span > 0.0
    beta = np.where(
        missed,
        cap,
        np.where(safe, b0 + (g0 - r) * (b1 - b0) / np.where(safe, span, 1.0), b1),
    )

    z = v - beta[:, None] * sign
    np.minimum(np.maximum(z, 0.0, out=z), 1.0, out=z)
    z = np.where(done[:, None], z_hat, z)
    out = np.empty_like(z)
    out[rows[:, None], order] = z
    return out


def maximize_linear(c: ArrayLike) -> NDArray[np.int8]:
    """Vertex of the parity polytope maximizing the linear cost ``c``.

    Sets ones on the strictly positive coordinates; if their count is
    odd, takes the better of turning on the largest non-positive entry
    or dropping the smallest positive one.
    """
    c = np.asarray(c, dtype=float)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("maximize_linear expects a non-empty 1-D vector")
    if not np.all(np.isfinite(c)):
        raise ValueError("maximize_linear input must be finite")
    pos = c > 0.0
    z = pos.astype(np.int8)
    if int(pos.sum()) % 2 == 0:
        return z
    i_p = int(np.argmin(np.where(pos, c, np.inf)))
    if pos.all():
        z[i_p] = 0
        return z
    i_n = int(np.argmax(np.where(~pos, c, -np.inf)))
    if c[i_p] + c[i_n] > 0.0:
        z[i_n] = 1
    else:
        z[i_p] = 0
    return z
