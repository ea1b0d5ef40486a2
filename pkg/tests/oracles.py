"""Independent reference implementations used as test oracles.

Everything here is brute force or delegates to a generic solver: vertex
enumeration, a hull-projection QP with an optimality certificate, GF(2)
codebook enumeration, exhaustive marginalization, and the decoding LP
solved over the explicit facet description.  None of it shares code
paths with the package under test.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linprog, nnls

from polylp import ParityCheckMatrix


def even_weight_vertices(d: int) -> np.ndarray:
    """All even-weight binary vectors of length d, as a (V, d) float array."""
    vs = [v for v in itertools.product((0, 1), repeat=d) if sum(v) % 2 == 0]
    return np.array(vs, dtype=float)


def hull_project(u: np.ndarray, vertices: np.ndarray, certify: bool = True) -> np.ndarray:
    """Euclidean projection of u onto conv(vertices), via nonneg least squares.

    Solves min ||V^T w - u|| over the simplex, with the sum-to-one
    constraint enforced by a heavily weighted penalty row, then verifies
    the variational optimality condition over every vertex.
    """
    scale = 1e6
    a = np.vstack([vertices.T, scale * np.ones(vertices.shape[0])])
    b = np.concatenate([u, [scale]])
    w, _ = nnls(a, b)
    w = np.maximum(w, 0.0)
    w /= w.sum()
    z = vertices.T @ w
    if certify:
        resid = u - z
        gap = float((vertices @ resid).max() - resid @ z)
        assert gap <= 1e-7, f"hull projection not optimal, gap {gap}"
    return z


def hull_membership(u: np.ndarray, vertices: np.ndarray) -> bool:
    """Feasibility LP: is u a convex combination of the given vertices?"""
    nv = vertices.shape[0]
    a_eq = np.vstack([vertices.T, np.ones(nv)])
    b_eq = np.concatenate([u, [1.0]])
    res = linprog(np.zeros(nv), A_eq=a_eq, b_eq=b_eq, bounds=[(0, None)] * nv,
                  method="highs")
    return res.status == 0


def maximize_by_enumeration(c: np.ndarray) -> float:
    """Maximum of c . z over the even-weight vertices, by enumeration."""
    return float((even_weight_vertices(c.size) @ c).max())


def gf2_nullspace(h: np.ndarray) -> np.ndarray:
    """Basis of the GF(2) null space of a binary matrix, rows as vectors."""
    h = np.array(h, dtype=np.uint8) % 2
    m, n = h.shape
    pivots: list[int] = []
    row = 0
    for col in range(n):
        pick = None
        for rr in range(row, m):
            if h[rr, col]:
                pick = rr
                break
        if pick is None:
            continue
        h[[row, pick]] = h[[pick, row]]
        for rr in range(m):
            if rr != row and h[rr, col]:
                h[rr] ^= h[row]
        pivots.append(col)
        row += 1
        if row == m:
            break
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.uint8)
        v[f] = 1
        for rr, pc in enumerate(pivots):
            if rr < row and h[rr, f]:
                v[pc] = 1
        basis.append(v)
    return np.array(basis, dtype=np.uint8) if basis else np.zeros((0, n), np.uint8)


def codebook(h: np.ndarray) -> np.ndarray:
    """Every codeword of the code with parity-check matrix h (dense 0/1)."""
    basis = gf2_nullspace(h)
    k = basis.shape[0]
    if k == 0:
        return np.zeros((1, h.shape[1]), dtype=np.uint8)
    combos = np.array(list(itertools.product((0, 1), repeat=k)), dtype=np.uint8)
    return (combos @ basis) % 2


def exact_marginals(gamma: np.ndarray, code: ParityCheckMatrix) -> np.ndarray:
    """Posterior bit LLRs by summing over every valid configuration.

    The distribution weights configuration x by exp(-gamma . x) times the
    indicator that all checks are satisfied; feasible only for small N.
    """
    n = code.n_vars
    xs = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.uint8)
    ok = np.ones(len(xs), dtype=bool)
    for nb in code.check_neighborhoods:
        ok &= xs[:, nb].sum(axis=1) % 2 == 0
    xs = xs[ok]
    w = np.exp(-(xs @ gamma))
    p0 = np.array([w[xs[:, i] == 0].sum() for i in range(n)])
    p1 = np.array([w[xs[:, i] == 1].sum() for i in range(n)])
    return np.log(p0 / p1)


def fundamental_lp(gamma: np.ndarray, code: ParityCheckMatrix) -> tuple[float, np.ndarray]:
    """Solve the decoding LP directly over its facet description.

    Per check, every odd-size subset S of its neighborhood contributes
    sum(S) - sum(complement) <= |S| - 1; plus the unit box.
    """
    n = code.n_vars
    rows, rhs = [], []
    for nb in code.check_neighborhoods:
        d = len(nb)
        for mask in itertools.product((0, 1), repeat=d):
            if sum(mask) % 2 == 1:
                row = np.zeros(n)
                for i, m in zip(nb, mask):
                    row[i] = 1.0 if m else -1.0
                rows.append(row)
                rhs.append(sum(mask) - 1.0)
    res = linprog(gamma, A_ub=np.array(rows), b_ub=np.array(rhs),
                  bounds=[(0, 1)] * n, method="highs")
    assert res.status == 0
    return float(res.fun), res.x


def random_tree_code(rng: np.random.Generator, n_max: int = 12) -> ParityCheckMatrix:
    """Random cycle-free code: each check joins one existing variable to
    fresh ones, so every check has degree >= 2 and the graph is a tree."""
    checks: list[list[int]] = []
    n = 1
    variables = [0]
    while True:
        deg = int(rng.integers(2, 5))
        if n + (deg - 1) > n_max:
            break
        anchor = int(rng.choice(variables))
        fresh = list(range(n, n + deg - 1))
        n += deg - 1
        variables.extend(fresh)
        checks.append(sorted([anchor] + fresh))
        if len(checks) >= 2 and rng.random() < 0.25:
            break
    if not checks:
        checks = [[0, 1]]
        n = 2
    return ParityCheckMatrix(n, [np.array(c) for c in checks])


def hamming_7_4() -> ParityCheckMatrix:
    return ParityCheckMatrix.from_dense(
        [
            [1, 0, 1, 0, 1, 0, 1],
            [0, 1, 1, 0, 0, 1, 1],
            [0, 0, 0, 1, 1, 1, 1],
        ]
    )
