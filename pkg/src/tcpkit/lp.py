"""Dense two-phase simplex method for small linear programs.

Solves ``min c.x  s.t.  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0`` on a
tableau with Bland's rule, which cannot cycle. Intended for the handful
of variables that appear in the order-2 exact paths.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: np.ndarray | None
    fun: float | None
    pivots: int


def _pivot(T, basis, row, col):
    T[row] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r] -= T[r, col] * T[row]
    basis[row] = col


def _run(T, basis, ncols, eps, max_pivots):
    """Minimise the objective stored in the last row of T over columns < ncols."""
    pivots = 0
    m = T.shape[0] - 1
    while pivots < max_pivots:
        # reduced costs live in the last row; entering column = first negative (Bland)
        cost = T[-1, :ncols]
        entering = np.flatnonzero(cost < -eps)
        if entering.size == 0:
            return OPTIMAL, pivots
        col = int(entering[0])
        colvals = T[:m, col]
        pos = np.flatnonzero(colvals > eps)
        if pos.size == 0:
            return UNBOUNDED, pivots
        ratios = T[pos, -1] / colvals[pos]
        best = ratios.min()
        ties = pos[ratios <= best + eps * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: basis[r]))
        _pivot(T, basis, row, col)
        pivots += 1
    raise RuntimeError("simplex pivot limit reached")


def linprog(c, A_ub=None, b_ub=None, A_eq=None, b_eq=None, eps=1e-11, max_pivots=10_000) -> LPResult:
    c = np.asarray(c, dtype=float)
    nvar = c.size
    rows, rhs = [], []
    n_ub = 0
    if A_ub is not None and len(A_ub):
        A_ub = np.atleast_2d(np.asarray(A_ub, dtype=float))
        n_ub = A_ub.shape[0]
        rows.append(np.hstack([A_ub, np.eye(n_ub)]))
        rhs.append(np.asarray(b_ub, dtype=float))
    if A_eq is not None and len(A_eq):
        A_eq = np.atleast_2d(np.asarray(A_eq, dtype=float))
        rows.append(np.hstack([A_eq, np.zeros((A_eq.shape[0], n_ub))]))
        rhs.append(np.asarray(b_eq, dtype=float))
    if not rows:
        if np.any(c < 0):
            return LPResult(UNBOUNDED, None, None, 0)
        return LPResult(OPTIMAL, np.zeros(nvar), 0.0, 0)

    A = np.vstack(rows)
    b = np.concatenate(rhs)
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    m, ncols = A.shape  # ncols = structural + slack

    # phase 1 tableau: [A | I_art | b], objective = sum of artificials
    T = np.zeros((m + 1, ncols + m + 1))
    T[:m, :ncols] = A
    T[:m, ncols:ncols + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :ncols] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(ncols, ncols + m))

    status, p1 = _run(T, basis, ncols + m, eps, max_pivots)
    if status != OPTIMAL:
        raise RuntimeError("phase 1 cannot be unbounded")
    if -T[-1, -1] > 1e-9 * max(1.0, np.abs(b).max()):
        return LPResult(INFEASIBLE, None, None, p1)

    # drive remaining artificials out of the basis, dropping redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= ncols:
            nz = np.flatnonzero(np.abs(T[r, :ncols]) > eps)
            if nz.size:
                _pivot(T, basis, r, int(nz[0]))
                keep.append(r)
        else:
            keep.append(r)
    T = np.vstack([T[keep][:, list(range(ncols)) + [T.shape[1] - 1]], np.zeros((1, ncols + 1))])
    basis = [basis[r] for r in keep]

    # phase 2 objective expressed in the current basis
    cfull = np.concatenate([c, np.zeros(ncols - nvar)])
    T[-1, :ncols] = cfull
    T[-1, -1] = 0.0
    for r, bv in enumerate(basis):
        if cfull[bv] != 0.0:
            T[-1] -= cfull[bv] * T[r]

    status, p2 = _run(T, basis, ncols, eps, max_pivots)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None, p1 + p2)
    sol = np.zeros(ncols)
    for r, bv in enumerate(basis):
        sol[bv] = T[r, -1]
    x = np.maximum(sol[:nvar], 0.0)
    return LPResult(OPTIMAL, x, float(c @ x), p1 + p2)


def minimax_on_simplex(B) -> tuple[float, np.ndarray]:
    """Minimise max_k (B x)_k over the unit simplex.

    Epigraph LP in (x, t+, t-): B x - t+ + t- <= 0, sum x = 1, min t+ - t-.
    Returns the optimal value and a minimiser.
    """
    B = np.atleast_2d(np.asarray(B, dtype=float))
    r = B.shape[1]
    c = np.concatenate([np.zeros(r), [1.0, -1.0]])
    A_ub = np.hstack([B, -np.ones((B.shape[0], 1)), np.ones((B.shape[0], 1))])
    A_eq = np.concatenate([np.ones(r), [0.0, 0.0]])[None, :]
    res = linprog(c, A_ub, np.zeros(B.shape[0]), A_eq, [1.0])
    if res.status != OPTIMAL:
        raise RuntimeError(f"minimax LP ended with status {res.status}")
    x = res.x[:r]
    x = x / x.sum()
    return float(np.max(B @ x)), x
