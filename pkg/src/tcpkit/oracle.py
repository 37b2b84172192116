"""Exact reference answers for small matrices (order-2 tensors).

These run in rational or 50-digit decimal arithmetic and share no code
with the floating-point classifiers, so they can serve as test oracles.
"""
from __future__ import annotations

import itertools
from decimal import Decimal, localcontext
from fractions import Fraction

ZERO_EPS = Decimal("1e-30")


def _frac_matrix(M):
    return [[Fraction(x).limit_denominator(10**12) if not isinstance(x, int) else Fraction(x) for x in row]
            for row in M]


def _solve(Mat, rhs):
    # Gauss-Jordan over Fractions; None when singular
    n = len(Mat)
    T = [list(Mat[i]) + [rhs[i]] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if T[r][c] != 0), None)
        if p is None:
            return None
        T[c], T[p] = T[p], T[c]
        piv = T[c][c]
        T[c] = [v / piv for v in T[c]]
        for r in range(n):
            if r != c and T[r][c] != 0:
                f = T[r][c]
                T[r] = [a - f * b for a, b in zip(T[r], T[c])]
    return [T[i][n] for i in range(n)]


def minimax_exact(B) -> Fraction:
    """min over the simplex of max_k (B x)_k, by enumerating polytope vertices.

    Unknowns are (x_1..x_r, t); each vertex makes sum x = 1 and r of the
    2r inequalities x_i >= 0, t >= (B x)_k active.
    """
    B = _frac_matrix(B)
    r = len(B)
    ineqs = []  # (coeffs over (x, t), kind, index)
    for i in range(r):
        ineqs.append([Fraction(int(j == i)) for j in range(r)] + [Fraction(0)])
    for k in range(r):
        ineqs.append([-B[k][j] for j in range(r)] + [Fraction(1)])
    eq = [Fraction(1)] * r + [Fraction(0)]
    best = None
    for active in itertools.combinations(range(2 * r), r):
        rows = [eq] + [ineqs[a] for a in active]
        rhs = [Fraction(1)] + [Fraction(0)] * r
        y = _solve(rows, rhs)
        if y is None:
            continue
        x, t = y[:r], y[r]
        if any(v < 0 for v in x):
            continue
        if any(t < sum(B[k][j] * x[j] for j in range(r)) for k in range(r)):
            continue
        if best is None or t < best:
            best = t
    return best


def semi_positive_values(M) -> dict:
    """Exact minimax value of every principal submatrix, keyed by 0-based subset."""
    n = len(M)
    out = {}
    for r in range(1, n + 1):
        for N in itertools.combinations(range(n), r):
            out[N] = minimax_exact([[M[i][j] for j in N] for i in N])
    return out


def is_semi_positive(M) -> bool:
    return all(v >= 0 for v in semi_positive_values(M).values())


def is_strictly_semi_positive(M) -> bool:
    return all(v > 0 for v in semi_positive_values(M).values())


def copositive_min_exact(M) -> Fraction:
    """min of x'Sx over the simplex (S the symmetric part) via face KKT systems."""
    M = _frac_matrix(M)
    n = len(M)
    S = [[(M[i][j] + M[j][i]) / 2 for j in range(n)] for i in range(n)]
    best = None
    for r in range(1, n + 1):
        for N in itertools.combinations(range(n), r):
            K = [[2 * S[i][j] for j in N] + [Fraction(-1)] for i in N] + [[Fraction(1)] * r + [Fraction(0)]]
            y = _solve(K, [Fraction(0)] * r + [Fraction(1)])
            if y is None or any(v < 0 for v in y[:r]):
                continue
            w = y[:r]
            val = sum(w[a] * S[N[a]][N[b]] * w[b] for a in range(r) for b in range(r))
            if best is None or val < best:
                best = val
    return best


def _sign(d: Decimal) -> int:
    return 0 if abs(d) < ZERO_EPS else (1 if d > 0 else -1)


def hadeler(M, strict: bool = False) -> bool:
    """Closed-form copositivity test for symmetric parts of size n <= 3."""
    n = len(M)
    if n > 3:
        raise ValueError("closed form only for n <= 3")
    with localcontext() as ctx:
        ctx.prec = 50
        S = [[(Decimal(str(M[i][j])) + Decimal(str(M[j][i]))) / 2 for j in range(n)] for i in range(n)]

        def ok(d):
            s = _sign(d)
            return s > 0 if strict else s >= 0

        diag = [S[i][i] for i in range(n)]
        if not all(ok(d) for d in diag):
            return False
        if n == 1:
            return True
        root = [d.sqrt() if d > 0 else Decimal(0) for d in diag]
        bar = {}
        for i, j in itertools.combinations(range(n), 2):
            bar[i, j] = S[i][j] + root[i] * root[j]
            if not ok(bar[i, j]):
                return False
        if n == 2:
            return True
        prod = 2 * bar[0, 1] * bar[0, 2] * bar[1, 2]
        expr = (root[0] * root[1] * root[2] + S[0][1] * root[2] + S[0][2] * root[1] + S[1][2] * root[0]
                + (prod.sqrt() if prod > 0 else Decimal(0)))
        return ok(expr)
