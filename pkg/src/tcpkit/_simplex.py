"""Helpers for searching over the unit simplex {x >= 0, sum x = 1}."""
from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb

import numpy as np


def grid_size(r: int, h: int) -> int:
    return comb(h + r - 1, r - 1)


@lru_cache(maxsize=64)
def _grid(r: int, h: int):
    # compositions of h into r nonnegative parts, lexicographic
    pts = []
    for bars in itertools.combinations(range(h + r - 1), r - 1):
        prev = -1
        parts = []
        for b in bars:
            parts.append(b - prev - 1)
            prev = b
        parts.append(h + r - 1 - prev - 1)
        pts.append(parts)
    P = np.array(pts, dtype=np.int64).reshape(-1, r)
    index = {tuple(p): i for i, p in enumerate(P)}
    nbrs = [[] for _ in range(len(P))]
    for i, p in enumerate(P):
        for a in range(r):
            if p[a] == 0:
                continue
            for b in range(r):
                if b == a:
                    continue
                q = p.copy()
                q[a] -= 1
                q[b] += 1
                nbrs[i].append(index[tuple(q)])
    # pad neighbour lists to a rectangle using the point itself
    width = max((len(v) for v in nbrs), default=0)
    nb = np.array([v + [i] * (width - len(v)) for i, v in enumerate(nbrs)], dtype=np.int64)
    if width == 0:
        nb = np.arange(len(P))[:, None]
    X = P / h
    X.setflags(write=False)
    nb.setflags(write=False)
    return X, nb


def simplex_grid(r: int, h: int) -> np.ndarray:
    """All points of the r-simplex with coordinates in {0, 1/h, ..., 1}."""
    return _grid(r, h)[0]


def grid_neighbors(r: int, h: int) -> np.ndarray:
    """Rows list the grid points one unit move (e_b - e_a)/h away."""
    return _grid(r, h)[1]


def pick_spacing(r: int, base: int, max_points: int) -> int:
    h = base
    while h > 1 and grid_size(r, h) > max_points:
        h -= 1
    return h


def project_simplex(V: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row of V onto the unit simplex."""
    V = np.atleast_2d(V)
    n = V.shape[1]
    U = -np.sort(-V, axis=1)
    css = np.cumsum(U, axis=1) - 1.0
    ind = np.arange(1, n + 1)
    cond = U - css / ind > 0
    rho = np.count_nonzero(cond, axis=1)
    theta = css[np.arange(len(V)), rho - 1] / rho
    return np.maximum(V - theta[:, None], 0.0)


def local_lower_estimate(F: np.ndarray, nbrs: np.ndarray) -> np.ndarray:
    """Per-point heuristic lower estimate of each component over a grid star.

    F has shape (p, k): k component values at p grid points. The estimate
    at point p subtracts the largest change to any neighbour; it assumes
    the components are close to linear at the grid scale.
    """
    diff = np.abs(F[nbrs] - F[:, None, :]).max(axis=1)
    return F - diff


def projected_descent(fun_grad, X0, iters: int, step0: float = 1.0, armijo: float = 1e-4):
    """Batch projected gradient descent with per-row backtracking.

    fun_grad maps a (p, r) array to (values, gradients). Returns the final
    points, their values, and the number of function evaluations.
    """
    X = project_simplex(np.array(X0, dtype=float))
    f, G = fun_grad(X)
    evals = len(X)
    step = np.full(len(X), step0)
    active = np.ones(len(X), dtype=bool)
    for _ in range(iters):
        if not active.any():
            break
        Y = project_simplex(X - step[:, None] * G)
        fy, Gy = fun_grad(Y)
        evals += len(Y)
        dec = np.einsum("pi,pi->p", G, X - Y)
        ok = fy <= f - armijo * dec
        moved = np.abs(Y - X).max(axis=1)
        ok &= active
        X[ok] = Y[ok]
        f[ok] = fy[ok]
        G[ok] = Gy[ok]
        step[ok] = np.minimum(step[ok] * 2.0, 1e6)
        step[~ok] *= 0.5
        active &= ~((ok & (moved < 1e-14)) | (step < 1e-16))
    return X, f, evals
