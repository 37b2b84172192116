"""Solvers and verification for the tensor complementarity problem.

TCP(q, A): find x >= 0 with w = q + A x^{m-1} >= 0 and x.w = 0.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import generate
from .lp import OPTIMAL, linprog
from .tensor import Tensor, as_tensor, check_index_set, embed, map_apply, map_jacobian, subsets

VERIFY_TOL = 1e-8
WEAK = "weak"
STRICT = "strict"


@dataclass(frozen=True)
class SolveBudget:
    newton_iters: int = 100
    extra_seeds: int = 4  # Newton seeds per support = extra_seeds + |N|
    fb_iters: int = 200
    fb_starts: int = 4  # random FB starts tried by the probe after the fixed ones
    max_solutions: int = 1000


DEFAULT_SOLVE_BUDGET = SolveBudget()


@dataclass(frozen=True, eq=False)
class TcpInstance:
    A: Tensor
    q: np.ndarray

    def __post_init__(self):
        A = as_tensor(self.A)
        q = np.array(self.q, dtype=np.float64)
        if q.shape != (A.dim,):
            raise ValueError(f"q has shape {q.shape}, expected ({A.dim},)")
        if not np.all(np.isfinite(q)):
            raise ValueError("q must be finite")
        q.setflags(write=False)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "q", q)

    def w(self, x) -> np.ndarray:
        return self.q + map_apply(self.A, x)


@dataclass
class TcpSolution:
    x: np.ndarray
    nonneg_x: float
    nonneg_w: float
    compl: float
    support: tuple
    accepted: bool

    @property
    def residuals(self) -> dict:
        return {"nonneg_x": self.nonneg_x, "nonneg_w": self.nonneg_w, "compl": self.compl}

    def to_record(self) -> dict:
        return {"x": [float(v) for v in self.x], "support": [i + 1 for i in self.support],
                "residuals": self.residuals}


@dataclass
class SolveReport:
    solutions: list
    complete: bool
    continuum_suspected: bool = False
    exhausted: bool = False
    merit: float | None = None
    newton_stats: dict = field(default_factory=dict)

    @property
    def solved(self) -> bool:
        return bool(self.solutions)

    def has_nonzero(self, tol: float = VERIFY_TOL) -> bool:
        return any(np.max(s.x) > tol for s in self.solutions)


def verify_solution(inst: TcpInstance, x, tol: float = VERIFY_TOL) -> TcpSolution:
    """Residuals of x for TCP(q, A); ``accepted`` iff all are within tol.

    The complementarity residual is allowed tol * (1 + |q|_inf).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != inst.q.shape:
        raise ValueError(f"x has shape {x.shape}, expected {inst.q.shape}")
    w = inst.w(x)
    nx = max(0.0, -float(x.min()))
    nw = max(0.0, -float(w.min()))
    cp = abs(float(x @ w))
    ok = bool(np.all(np.isfinite(w))) and nx <= tol and nw <= tol
    ok = ok and cp <= tol * (1.0 + float(np.abs(inst.q).max(initial=0.0)))
    support = tuple(int(i) for i in np.flatnonzero(x > tol))
    return TcpSolution(x.copy(), nx, nw, cp, support, ok)


def _same(x, y, tol=1e-6):
    a = x / (1.0 + np.abs(x).max())
    b = y / (1.0 + np.abs(y).max())
    return np.abs(a - b).max() <= tol


class _Collector:
    def __init__(self, limit):
        self.sols = []
        self.limit = limit
        self.continuum = False

    def add(self, sol: TcpSolution) -> bool:
        if any(_same(s.x, sol.x) for s in self.sols):
            return False
        if sol.support and any(s.support == sol.support for s in self.sols):
            self.continuum = True
        self.sols.append(sol)
        return True

    @property
    def full(self):
        return len(self.sols) >= self.limit


def _newton_support(inst: TcpInstance, N, z0, iters):
    # damped Newton for (q + A x^{m-1})_i = 0, i in N, with x = 0 off N
    n = inst.A.dim
    idx = list(N)
    scale = 1.0 + float(np.abs(inst.q).max(initial=0.0))
    z = z0.copy()
    x = embed(z, idx, n)
    F = inst.w(x)[idx]
    nF = np.abs(F).max()
    for it in range(iters):
        if nF <= 1e-13 * scale:
            return z, True, it
        J = map_jacobian(inst.A, x)[np.ix_(idx, idx)]
        d = np.linalg.lstsq(J, -F, rcond=None)[0]
        t = 1.0
        for _ in range(40):
            zt = z + t * d
            xt = embed(zt, idx, n)
            Ft = inst.w(xt)[idx]
            if np.all(np.isfinite(Ft)) and np.abs(Ft).max() < nF:
                break
            t *= 0.5
        else:
            return z, False, it
        z, x, F, nF = zt, xt, Ft, np.abs(Ft).max()
    return z, nF <= 1e-10 * scale, iters


def _lp_support(inst: TcpInstance, N, tol):
    # max t s.t. A_NN z = -q_N, q_o + A_oN z >= 0, z >= t, t <= 1
    A = inst.A.data
    n = inst.A.dim
    N = list(N)
    off = [i for i in range(n) if i not in N]
    r = len(N)
    c = np.zeros(r + 1)
    c[-1] = -1.0
    ub_rows, ub_rhs = [], []
    for i in off:
        ub_rows.append(np.concatenate([-A[i, N], [0.0]]))
        ub_rhs.append(inst.q[i])
    for k in range(r):
        row = np.zeros(r + 1)
        row[k] = -1.0
        row[-1] = 1.0
        ub_rows.append(row)
        ub_rhs.append(0.0)
    row = np.zeros(r + 1)
    row[-1] = 1.0
    ub_rows.append(row)
    ub_rhs.append(1.0)
    A_eq = np.hstack([A[np.ix_(N, N)], np.zeros((r, 1))])
    res = linprog(c, np.array(ub_rows), np.array(ub_rhs), A_eq, -inst.q[N])
    if res.status != OPTIMAL or res.x[-1] <= tol:
        return None
    return res.x[:r]


def solve_support_enum(inst: TcpInstance, budget: SolveBudget = DEFAULT_SOLVE_BUDGET, tol: float = VERIFY_TOL,
                       seed: int = 0) -> SolveReport:
    """Enumerate supports N and solve (q + A x^{m-1})_N = 0 with x = 0 off N.

    Order 2 uses a linear solve (an LP when the block is singular), so the
    enumeration is complete; higher orders use multistart damped Newton.
    """
    A = inst.A
    n, m = A.dim, A.order
    rng = np.random.default_rng(seed)
    out = _Collector(budget.max_solutions)
    stats = {"supports": 0, "starts": 0, "converged": 0}
    if np.all(inst.q >= -tol):
        out.add(verify_solution(inst, np.zeros(n), tol))
    scale = (1.0 + float(np.abs(inst.q).max(initial=0.0))) ** (1.0 / (m - 1))
    for N in subsets(n):
        if out.full:
            return SolveReport(out.sols, False, out.continuum, True, newton_stats=stats)
        stats["supports"] += 1
        idx = list(N)
        cands = []
        if m == 2:
            B = A.data[np.ix_(idx, idx)]
            if np.linalg.cond(B) < 1e12:
                cands.append(np.linalg.solve(B, -inst.q[idx]))
            else:
                z = _lp_support(inst, N, tol)
                if z is not None:
                    cands.append(z)
                    out.continuum = True
        else:
            seeds = rng.uniform(0.0, 1.0, size=(budget.extra_seeds + len(idx), len(idx))) * scale
            for z0 in seeds:
                stats["starts"] += 1
                z, ok, _ = _newton_support(inst, N, z0, budget.newton_iters)
                if ok:
                    stats["converged"] += 1
                    cands.append(z)
        for z in cands:
            if np.all(z > tol):
                sol = verify_solution(inst, embed(z, idx, n), tol)
                if sol.accepted:
                    out.add(sol)
    # a continuum means the listed solutions are representatives, not all of them
    return SolveReport(out.sols, m == 2 and not out.continuum, out.continuum, newton_stats=stats)


def _fb(a, b):
    return a + b - np.sqrt(a * a + b * b)


def solve_fb_newton(inst: TcpInstance, x0, budget: SolveBudget = DEFAULT_SOLVE_BUDGET,
                    tol: float = VERIFY_TOL) -> SolveReport:
    """Semismooth Newton on the Fischer-Burmeister residual with Armijo search.

    phi(a, b) = a + b - sqrt(a^2 + b^2) vanishes iff a >= 0, b >= 0, ab = 0,
    so zeros of the merit 1/2 |phi(x, w(x))|^2 are exactly the TCP solutions.
    """
    x = np.array(x0, dtype=np.float64)
    if x.shape != inst.q.shape or not np.all(np.isfinite(x)):
        raise ValueError("x0 must be a finite vector of the instance dimension")
    n = x.size
    c0 = 1.0 - 1.0 / np.sqrt(2.0)

    def merit(x):
        w = inst.w(x)
        phi = _fb(x, w)
        return phi, w, 0.5 * float(phi @ phi)

    phi, w, psi = merit(x)
    it = 0
    for it in range(budget.fb_iters):
        if psi <= 1e-24:
            break
        r = np.sqrt(x * x + w * w)
        tiny = r < 1e-14
        rs = np.where(tiny, 1.0, r)
        da = np.where(tiny, c0, 1.0 - x / rs)
        db = np.where(tiny, c0, 1.0 - w / rs)
        H = np.diag(da) + db[:, None] * map_jacobian(inst.A, x)
        grad = H.T @ phi
        try:
            d = np.linalg.solve(H, -phi)
            if not np.all(np.isfinite(d)) or grad @ d > -1e-10 * np.dot(d, d) ** 1.05:
                d = -grad
        except np.linalg.LinAlgError:
            d = -grad
        t = 1.0
        slope = float(grad @ d)
        for _ in range(60):
            xt = x + t * d
            phit, wt, psit = merit(xt)
            if np.isfinite(psit) and psit <= psi + 1e-4 * t * slope:
                break
            t *= 0.5
        else:
            break
        if not np.all(np.isfinite(xt)):
            break
        x, phi, w, psi = xt, phit, wt, psit
    stats = {"iterations": it, "merit": psi}
    sols = []
    if np.all(np.isfinite(x)):
        cand = np.where(np.abs(x) <= 1e-12, 0.0, x)
        sol = verify_solution(inst, cand, tol)
        if sol.accepted:
            sols.append(sol)
    return SolveReport(sols, False, merit=psi, newton_stats=stats)


def counterexample_q(A, witness, N, mode: str = WEAK, tol: float = VERIFY_TOL) -> np.ndarray:
    """A q >= 0 for which both 0 and the witness solve TCP(q, A).

    q_i = -(A x^{m-1})_i on N and max(0, -(A x^{m-1})_i) + 1 off N. In WEAK
    mode the witness must make A x^{m-1} negative on N, so q > 0; in STRICT
    mode it only has to be nonpositive there and q >= 0.
    """
    A = as_tensor(A)
    N = check_index_set(N, A.dim)
    x = np.asarray(witness, dtype=np.float64)
    if x.shape != (A.dim,):
        raise ValueError("witness has the wrong dimension")
    off = np.ones(A.dim, dtype=bool)
    off[list(N)] = False
    if np.any(x < 0) or np.any(x[off] != 0) or not np.any(x > 0):
        raise ValueError("witness must be nonnegative, nonzero and supported on N")
    v = map_apply(A, x)
    vN = v[list(N)]
    if mode == WEAK:
        if not np.all(vN < 0):
            raise ValueError("witness does not make A x^{m-1} negative on N")
        q = -v
    elif mode == STRICT:
        if not np.all(vN <= tol):
            raise ValueError("witness does not make A x^{m-1} nonpositive on N")
        q = np.maximum(-v, 0.0)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    q[off] = np.maximum(0.0, -v[off]) + 1.0
    return q


@dataclass
class ProbeReport:
    samples: list
    solved: int
    unsolved: int
    disproofs: list

    @property
    def summary(self) -> str:
        k = self.solved + self.unsolved
        if self.disproofs:
            return f"{len(self.disproofs)} q vectors proven unsolvable in {k} samples"
        if self.unsolved:
            return f"{self.unsolved} of {k} samples unsolved (not a proof)"
        return f"no counterexample found in {k} samples"


Q_KINDS = (generate.POS, generate.NONNEG, generate.MIXED, generate.NEG)


def solve_any(inst: TcpInstance, budget: SolveBudget = DEFAULT_SOLVE_BUDGET, seed: int = 0, tol=VERIFY_TOL):
    """Try FB Newton from a few starts, then fall back to support enumeration.

    Returns ``(solution or None, method, enum_report or None)``.
    """
    n, m = inst.A.dim, inst.A.order
    rng = np.random.default_rng(seed)
    guess = np.maximum(-inst.q, 0.0) ** (1.0 / (m - 1))
    starts = [np.zeros(n), guess, np.ones(n)]
    scale = (1.0 + float(np.abs(inst.q).max(initial=0.0))) ** (1.0 / (m - 1))
    starts += list(rng.uniform(0.0, 1.0, size=(budget.fb_starts, n)) * scale)
    for x0 in starts:
        rep = solve_fb_newton(inst, x0, budget, tol)
        if rep.solved:
            return rep.solutions[0], "fb-newton", None
    rep = solve_support_enum(inst, budget, tol, seed=seed)
    if rep.solved:
        nz = [s for s in rep.solutions if s.support] or rep.solutions
        return nz[0], "support-enum", rep
    return None, None, rep


def q_tensor_probe(A, num_samples: int = 50, seed: int = 0,
                   budget: SolveBudget = DEFAULT_SOLVE_BUDGET) -> ProbeReport:
    """Sample q vectors and try to solve each TCP(q, A).

    Never certifies Q-tensor status. An unsolved q is a disproof only for
    order 2, where support enumeration is complete.
    """
    if num_samples < 1:
        raise ValueError("num_samples must be >= 1")
    A = as_tensor(A)
    samples, disproofs = [], []
    solved = 0
    for k in range(num_samples):
        kind = Q_KINDS[k % len(Q_KINDS)]
        q = generate.sample_q(kind, A.dim, seed * 1_000_003 + k)
        inst = TcpInstance(A, q)
        sol, method, rep = solve_any(inst, budget, seed=seed + k)
        rec = {"index": k, "q_kind": kind, "q": [float(v) for v in q], "solved": sol is not None}
        if sol is not None:
            solved += 1
            rec["method"] = method
            rec["x"] = [float(v) for v in sol.x]
        elif rep is not None and rep.complete and not rep.exhausted:
            rec["proof"] = "complete support enumeration found no solution"
            disproofs.append(q)
        samples.append(rec)
    return ProbeReport(samples, solved, num_samples - solved, disproofs)
