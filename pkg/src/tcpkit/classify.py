"""Semi-positivity and copositivity classifiers.

Every classifier returns a three-valued :class:`Verdict`. ``FAILS`` always
carries a witness vector that can be re-checked with :func:`witness_violates`;
``HOLDS`` is only emitted once every subset has been ruled out (exactly for
order 2, by a grid lower bound otherwise); anything in between is ``UNKNOWN``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from . import _simplex as sx
from .lp import minimax_on_simplex
from .tensor import (
    Tensor,
    as_tensor,
    check_index_set,
    embed,
    is_symmetric,
    map_apply,
    map_apply_batch,
    map_jacobian_batch,
    poly_eval,
    poly_eval_batch,
    principal_subtensor,
    subsets,
    symmetrize,
)


class Status(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNKNOWN = "unknown"


class Feasible(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class Mode(str, enum.Enum):
    STRICT_NEG = "strict_neg"  # A^N x^{m-1} < 0, x >= 0
    NONPOS = "nonpos"  # A^N x^{m-1} <= 0, x >= 0, x != 0


SEMI_POSITIVE = "semi_positive"
STRICTLY_SEMI_POSITIVE = "strictly_semi_positive"
COPOSITIVE = "copositive"
STRICTLY_COPOSITIVE = "strictly_copositive"
PROPERTIES = (SEMI_POSITIVE, STRICTLY_SEMI_POSITIVE, COPOSITIVE, STRICTLY_COPOSITIVE)


@dataclass(frozen=True)
class Tolerances:
    strict: float = 1e-8  # margin for "< 0"
    zero: float = 1e-9  # slack for "<= 0"


@dataclass(frozen=True)
class SearchBudget:
    evals: int = 2_000_000
    grid_spacing: int = 16
    max_grid: int = 6000
    refinements: int = 2
    starts: int = 6
    iters: int = 40
    temperatures: tuple = (10.0, 31.6, 100.0, 316.0, 1000.0)

    def __post_init__(self):
        if self.evals <= 0 or self.grid_spacing <= 0 or self.max_grid <= 0:
            raise ValueError("search budget must be positive")


DEFAULT_TOL = Tolerances()
DEFAULT_BUDGET = SearchBudget()


class Meter:
    """Counts map/polynomial evaluations against a budget."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def charge(self, k: int):
        self.used += int(k)

    @property
    def exhausted(self) -> bool:
        return self.used >= self.limit


@dataclass
class NecessaryCheckResult:
    passed: bool
    failing_index: int | None = None


@dataclass
class FeasibilityResult:
    feasible: Feasible
    point: np.ndarray | None
    best_value: float
    lower_bound: float
    certificate: str
    evals: int = 0


@dataclass
class MinReport:
    minimizer: np.ndarray
    min_value: float
    lam: float
    kkt_res: float
    kkt_offsupport: float
    starts: int
    lower_estimate: float
    exact: bool
    evals: int = 0

    @property
    def support(self) -> tuple:
        return tuple(int(i) for i in np.flatnonzero(self.minimizer > 1e-10))


@dataclass
class Verdict:
    property: str
    status: Status
    witness: np.ndarray | None = None
    witness_set: tuple | None = None
    certificate: object = None
    min_value: float | None = None
    evals: int = 0
    notes: list = field(default_factory=list)

    def to_record(self) -> dict:
        rec = {"property": self.property, "status": self.status.value}
        if self.witness is not None:
            rec["witness"] = [float(v) for v in self.witness]
        if self.witness_set is not None:
            rec["witness_set"] = [int(i) + 1 for i in self.witness_set]
        if self.min_value is not None:
            rec["min_value"] = float(self.min_value)
        rec["evals"] = int(self.evals)
        return rec


# ---------------------------------------------------------------- necessary checks


def diag_check(A, strict: bool = False, tol: float = 0.0) -> NecessaryCheckResult:
    """Diagonal sign test: semi-positive needs a_{i..i} >= 0, strictly needs > 0.

    A failure at index i is a refutation with witness e_i.
    """
    d = as_tensor(A).diagonal()
    bad = np.flatnonzero(d <= tol) if strict else np.flatnonzero(d < -tol)
    if bad.size:
        return NecessaryCheckResult(False, int(bad[0]))
    return NecessaryCheckResult(True)


def rowsum_check(A, strict: bool = False, tol: float = 0.0) -> NecessaryCheckResult:
    """Some row sum of A must be >= 0 (strictly: > 0); the test vector is e.

    Row sums are compared after normalising e onto the simplex, i.e. divided
    by n^{m-1}, so ``tol`` is on the same scale as the feasibility search.
    """
    A = as_tensor(A)
    s = A.row_sums() / A.dim ** (A.order - 1)
    passed = bool(np.any(s > tol)) if strict else bool(np.any(s >= -tol))
    return NecessaryCheckResult(passed, None if passed else int(np.argmax(s)))


# ---------------------------------------------------------------- feasibility


def _is_yes(v, mode, tol):
    return v < -tol.strict if mode is Mode.STRICT_NEG else v <= tol.zero


def _is_no(lb, mode, tol):
    return lb >= -tol.strict if mode is Mode.STRICT_NEG else lb > tol.zero


def _lse_fun_grad(B: Tensor, T: float):
    def fg(X):
        F = map_apply_batch(B, X)
        J = map_jacobian_batch(B, X)
        Fmax = F.max(axis=1, keepdims=True)
        w = np.exp(T * (F - Fmax))
        Z = w.sum(axis=1, keepdims=True)
        val = Fmax[:, 0] + np.log(Z[:, 0]) / T
        sig = w / Z
        return val, np.einsum("pk,pkj->pj", sig, J)

    return fg


def _lipschitz_rows(B: Tensor) -> np.ndarray:
    # |d f_k / d x_j| <= (m-1) max |B'_{k j ...}| on the simplex
    m, r = B.order, B.dim
    Bs = np.abs(B.trailing_symmetric()).reshape(r, r, -1).max(axis=2)
    return (m - 1) * Bs.max(axis=1)


def feasibility_search(A, N, mode: Mode = Mode.STRICT_NEG, budget: SearchBudget = DEFAULT_BUDGET,
                       tol: Tolerances = DEFAULT_TOL, meter: Meter | None = None) -> FeasibilityResult:
    """Search the |N|-simplex for x minimising g(x) = max_k (A^N x^{m-1})_k.

    Homogeneity of degree m-1 means the simplex loses nothing. STRICT_NEG
    asks whether g can be pushed below zero, NONPOS whether it reaches zero.
    """
    A = as_tensor(A)
    mode = Mode(mode)
    N = check_index_set(N, A.dim)
    if budget.evals <= 0:
        raise ValueError("budget must be positive")
    meter = meter or Meter(budget.evals)
    B = principal_subtensor(A, N)
    m, r = B.order, B.dim
    start = meter.used

    def result(feasible, point, best, lb, cert):
        return FeasibilityResult(feasible, point, float(best), float(lb), cert, meter.used - start)

    if r == 1:
        v = float(B.data.flat[0])
        meter.charge(1)
        return result(Feasible.YES if _is_yes(v, mode, tol) else Feasible.NO, np.ones(1), v, v, "exact")

    if m == 2:
        v, x = minimax_on_simplex(B.data)
        meter.charge(1)
        if _is_yes(v, mode, tol):
            return result(Feasible.YES, x, v, v, "lp")
        return result(Feasible.NO, x, v, v, "lp")

    h = sx.pick_spacing(r, budget.grid_spacing, budget.max_grid)
    best_val, best_pt = np.inf, None
    lipschitz = _lipschitz_rows(B)
    ran_descent = False
    for level in range(budget.refinements + 1):
        X = sx.simplex_grid(r, h)
        F = map_apply_batch(B, X)
        meter.charge(len(X))
        g = F.max(axis=1)
        i = int(np.argmin(g))
        if g[i] < best_val:
            best_val, best_pt = float(g[i]), X[i].copy()
        if _is_yes(best_val, mode, tol):
            return result(Feasible.YES, best_pt, best_val, -np.inf, "grid")

        if level == 0 and np.all(B.data >= 0):
            if mode is Mode.STRICT_NEG:
                return result(Feasible.NO, best_pt, best_val, 0.0, "nonnegative")
            lb = B.diagonal().min() / r ** (m - 1)
            if _is_no(lb, mode, tol):
                return result(Feasible.NO, best_pt, best_val, lb, "nonnegative")

        if not ran_descent:
            ran_descent = True
            order = np.argsort(g, kind="stable")[: budget.starts]
            X0 = np.vstack([X[order], np.full((1, r), 1.0 / r)])
            Xc = X0
            for T in budget.temperatures:
                Xc, _, ev = sx.projected_descent(_lse_fun_grad(B, T), Xc, budget.iters,
                                                 step0=0.1 / (1.0 + np.abs(B.data).max()))
                meter.charge(2 * ev)
            gd = map_apply_batch(B, Xc).max(axis=1)
            meter.charge(len(Xc))
            j = int(np.argmin(gd))
            if gd[j] < best_val:
                best_val, best_pt = float(gd[j]), Xc[j].copy()
            if _is_yes(best_val, mode, tol):
                return result(Feasible.YES, best_pt, best_val, -np.inf, "descent")

        delta = r / h
        lb_rig = float(np.min(np.max(F - lipschitz[None, :] * delta, axis=1)))
        if _is_no(lb_rig, mode, tol):
            return result(Feasible.NO, best_pt, best_val, lb_rig, "lipschitz")
        est = sx.local_lower_estimate(F, sx.grid_neighbors(r, h))
        lb_heur = min(float(np.min(est.max(axis=1))), best_val)
        if _is_no(lb_heur, mode, tol):
            return result(Feasible.NO, best_pt, best_val, lb_heur, "grid-heuristic")

        h2 = 2 * h
        if sx.grid_size(r, h2) > budget.max_grid or meter.used + sx.grid_size(r, h2) > meter.limit:
            break
        h = h2
    return result(Feasible.UNKNOWN, best_pt, best_val, lb_heur, "ambiguous")


# ---------------------------------------------------------------- witnesses


def witness_violates(A, x, prop: str, tol: Tolerances = DEFAULT_TOL) -> bool:
    """True iff x refutes the named property, with margin tol/2 for strict inequalities."""
    A = as_tensor(A)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or not np.any(x > 0):
        return False
    if prop in (COPOSITIVE, STRICTLY_COPOSITIVE):
        v = poly_eval(A, x / x.sum())
        return v < -tol.strict / 2 if prop == COPOSITIVE else v <= tol.zero
    w = map_apply(A, x / x.sum())[x > 0]
    if prop == SEMI_POSITIVE:
        return bool(np.all(w < -tol.strict / 2))
    if prop == STRICTLY_SEMI_POSITIVE:
        return bool(np.all(w <= tol.zero))
    raise ValueError(f"unknown property {prop!r}")


# ---------------------------------------------------------------- semi-positivity


def _sweep(A, mode: Mode, budget, tol) -> Verdict:
    A = as_tensor(A)
    strict = mode is Mode.NONPOS
    prop = STRICTLY_SEMI_POSITIVE if strict else SEMI_POSITIVE
    n = A.dim
    meter = Meter(budget.evals)

    dc = diag_check(A, strict=strict, tol=tol.zero if strict else tol.strict)
    if not dc.passed:
        i = dc.failing_index
        return Verdict(prop, Status.FAILS, embed(1.0, [i], n), (i,), "diagonal", evals=n)
    rc = rowsum_check(A, strict=strict, tol=tol.zero if strict else tol.strict)
    if not rc.passed:
        return Verdict(prop, Status.FAILS, np.full(n, 1.0 / n), tuple(range(n)), "row-sums", evals=2 * n)

    certs = {}
    unknown_sets = []
    for N in subsets(n):
        if meter.exhausted:
            return Verdict(prop, Status.UNKNOWN, certificate=certs, evals=meter.used,
                           notes=["evaluation budget exhausted"])
        fr = feasibility_search(A, N, mode, budget, tol, meter)
        certs[fr.certificate] = certs.get(fr.certificate, 0) + 1
        if fr.feasible is Feasible.YES:
            x = embed(fr.point, N, n)
            return Verdict(prop, Status.FAILS, x, N, fr.certificate, min_value=fr.best_value, evals=meter.used)
        if fr.feasible is Feasible.UNKNOWN:
            unknown_sets.append(N)
    if unknown_sets:
        return Verdict(prop, Status.UNKNOWN, certificate=certs, evals=meter.used,
                       notes=[f"undecided subsets: {[tuple(i + 1 for i in s) for s in unknown_sets]}"])
    return Verdict(prop, Status.HOLDS, certificate=certs, evals=meter.used)


def classify_semi_positive(A, budget: SearchBudget = DEFAULT_BUDGET, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Semi-positive iff no principal sub-tensor admits A^N x^{m-1} < 0 with x >= 0."""
    return _sweep(A, Mode.STRICT_NEG, budget, tol)


def classify_strictly_semi_positive(A, budget: SearchBudget = DEFAULT_BUDGET,
                                    tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Strictly semi-positive iff no sub-tensor admits A^N x^{m-1} <= 0, x >= 0, x != 0."""
    return _sweep(A, Mode.NONPOS, budget, tol)


# ---------------------------------------------------------------- simplex minimisation


def kkt_residual(A, x, support_tol: float = 1e-10):
    """Stationarity residuals of x as a minimiser of A x^m on the simplex.

    Returns ``(support_term, offsupport_term, lam)`` where lam = A x^m and
    the support term is max |(A x^{m-1})_k - lam| over x_k > support_tol.
    The off-support term max(0, lam - (A x^{m-1})_k) need not vanish.
    """
    A = as_tensor(A)
    x = np.asarray(x, dtype=float)
    v = map_apply(A, x)
    lam = float(x @ v)
    on = x > support_tol
    sup = float(np.max(np.abs(v[on] - lam))) if on.any() else 0.0
    off = float(np.max(np.maximum(0.0, lam - v[~on]))) if (~on).any() else 0.0
    return sup, off, lam


def _kkt_polish(S: Tensor, x: np.ndarray, iters: int = 30) -> np.ndarray:
    # Newton on B w^{m-1} = lam e, sum w = 1 over the support of x
    supp = np.flatnonzero(x > 1e-10)
    m = S.order
    B = principal_subtensor(S, supp)
    r = len(supp)
    w = x[supp] / x[supp].sum()
    lam = poly_eval(B, w)
    e = np.ones(r)
    for _ in range(iters):
        F = np.concatenate([map_apply(B, w) - lam, [w.sum() - 1.0]])
        if np.max(np.abs(F)) < 1e-15:
            break
        J = np.zeros((r + 1, r + 1))
        J[:r, :r] = (m - 1) * _partial(B, w)
        J[:r, r] = -e
        J[r, :r] = 1.0
        step = np.linalg.lstsq(J, -F, rcond=None)[0]
        w = w + step[:r]
        lam = lam + step[r]
        if np.any(w <= 0):
            return x
    y = embed(w / w.sum(), supp, S.dim)
    return y


def _partial(B: Tensor, w):
    Js = B.trailing_symmetric()
    for _ in range(B.order - 2):
        Js = Js @ w
    return Js


def _face_enumeration(S: Tensor):
    # exact minimum of x'Sx on the simplex via nonsingular KKT systems on every face
    n = S.dim
    best_val, best_x = np.inf, None
    for N in subsets(n):
        B = S.data[np.ix_(N, N)]
        r = len(N)
        K = np.zeros((r + 1, r + 1))
        K[:r, :r] = 2 * B
        K[:r, r] = -1.0
        K[r, :r] = 1.0
        if np.linalg.cond(K) > 1e12:
            continue
        sol = np.linalg.solve(K, np.concatenate([np.zeros(r), [1.0]]))
        w = sol[:r]
        if np.any(w < -1e-12):
            continue
        w = np.maximum(w, 0.0)
        w /= w.sum()
        val = float(w @ B @ w)
        if val < best_val - 1e-15:
            best_val, best_x = val, embed(w, N, n)
    return best_val, best_x, 2 ** n - 1


def simplex_minimize(A, budget: SearchBudget = DEFAULT_BUDGET, meter: Meter | None = None) -> MinReport:
    """Minimise A x^m over the unit simplex.

    Order 2 enumerates faces exactly. Higher orders seed projected gradient
    descent from the best points of a regular simplex grid and polish the
    result with Newton's method on the support KKT system.
    """
    A = as_tensor(A)
    S = A if is_symmetric(A) else symmetrize(A)
    n, m = S.dim, S.order
    meter = meter or Meter(budget.evals)
    start = meter.used

    def report(x, nstarts, lower, exact):
        sup, off, lam = kkt_residual(S, x)
        return MinReport(x, poly_eval(S, x), lam, sup, off, nstarts, lower, exact, meter.used - start)

    if n == 1:
        meter.charge(1)
        x = np.ones(1)
        return report(x, 1, float(S.data.flat[0]), True)
    if m == 2:
        val, x, ev = _face_enumeration(S)
        meter.charge(ev)
        return report(x, 0, val, True)

    h = sx.pick_spacing(n, budget.grid_spacing, budget.max_grid)
    X = sx.simplex_grid(n, h)
    v = poly_eval_batch(S, X)
    meter.charge(len(X))
    order = np.argsort(v, kind="stable")[: budget.starts]
    X0 = np.vstack([X[order], np.full((1, n), 1.0 / n)])

    def fg(Y):
        V = map_apply_batch(S, Y)
        return np.einsum("pi,pi->p", Y, V), m * V

    iters = budget.iters * len(budget.temperatures)
    Xd, fd, ev = sx.projected_descent(fg, X0, iters, step0=0.1 / (1.0 + np.abs(S.data).max()))
    meter.charge(ev)

    best_x, best_v = X[order[0]].copy(), float(v[order[0]])
    for y in Xd:
        yv = poly_eval(S, y)
        z = _kkt_polish(S, y)
        zv = poly_eval(S, z)
        if zv <= yv + 1e-12:
            y, yv = z, zv
        if yv < best_v - 1e-15:
            best_x, best_v = y, yv
    meter.charge(2 * len(Xd))
    est = sx.local_lower_estimate(v[:, None], sx.grid_neighbors(n, h))[:, 0]
    lower = min(float(est.min()), best_v)
    return report(best_x, len(X0), lower, False)


# ---------------------------------------------------------------- copositivity


def classify_copositive(A, strict: bool = False, budget: SearchBudget = DEFAULT_BUDGET,
                        tol: Tolerances = DEFAULT_TOL) -> Verdict:
    """Decide (strict) copositivity from the minimum of A x^m on the simplex.

    Nonsymmetric input is symmetrised first; the form is unchanged.
    """
    A = as_tensor(A)
    prop = STRICTLY_COPOSITIVE if strict else COPOSITIVE
    meter = Meter(budget.evals)
    rep = simplex_minimize(A, budget, meter)
    v = rep.min_value

    def fails():
        return Verdict(prop, Status.FAILS, rep.minimizer, rep.support, rep, min_value=v, evals=meter.used)

    def verdict(status, notes=()):
        return Verdict(prop, status, certificate=rep, min_value=v, evals=meter.used, notes=list(notes))

    if not strict:
        if v < -tol.strict:
            return fails()
        if rep.exact or v > tol.strict:
            return verdict(Status.HOLDS)
        # ambiguity band: try finer grids before giving up
        b = budget
        for _ in range(budget.refinements + 1):
            if rep.lower_estimate >= -tol.strict:
                return verdict(Status.HOLDS, ["grid lower estimate"])
            b = replace(b, grid_spacing=2 * b.grid_spacing)
            if sx.grid_size(A.dim, b.grid_spacing) > b.max_grid:
                break
            rep = simplex_minimize(A, b, meter)
            v = rep.min_value
            if v < -tol.strict:
                return fails()
        return verdict(Status.UNKNOWN, ["minimum inside the ambiguity band"])

    if v <= tol.zero:
        return fails()
    if rep.exact or v > tol.strict:
        return verdict(Status.HOLDS)
    return verdict(Status.UNKNOWN, ["minimum inside the ambiguity band"])


def classify(A, prop: str, budget: SearchBudget = DEFAULT_BUDGET, tol: Tolerances = DEFAULT_TOL) -> Verdict:
    if prop == SEMI_POSITIVE:
        return classify_semi_positive(A, budget, tol)
    if prop == STRICTLY_SEMI_POSITIVE:
        return classify_strictly_semi_positive(A, budget, tol)
    if prop == COPOSITIVE:
        return classify_copositive(A, False, budget, tol)
    if prop == STRICTLY_COPOSITIVE:
        return classify_copositive(A, True, budget, tol)
    raise ValueError(f"unknown property {prop!r}; expected one of {PROPERTIES}")
