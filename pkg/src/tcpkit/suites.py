"""Property batteries linking tensor classes to uniqueness and solvability of TCP(q, A).

Each battery returns a :class:`SuiteResult` holding one record per trial
(in trial order) and a summary. Failing records embed the tensor so that a
trial can be replayed in isolation.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import classify as cl
from . import generate as gen
from . import oracle
from .io import tensor_to_obj
from .solve import (STRICT, WEAK, TcpInstance, counterexample_q, q_tensor_probe, solve_support_enum,
                    verify_solution)
from .tensor import (from_matrix, identity, map_apply, poly_eval, principal_subtensor, subsets, symmetrize,
                     zeros)

VERIFY_TOL = 1e-8
DIAG_TOL = 1e-8


@dataclass
class SuiteResult:
    name: str
    passed: bool
    records: list
    summary: dict

    def summary_record(self) -> dict:
        return {"suite": self.name, "passed": self.passed, **self.summary}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("TCPKIT_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    items = list(items)
    k = _threads()
    if k == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------- trial tensors

_FAMILY = (
    (gen.SYMMETRIC_GAUSSIAN, ()),
    (gen.DIAG_BOOSTED, (1.0,)),
    (gen.NONNEGATIVE, ()),
    (gen.DIAG_BOOSTED, (3.0,)),
    (gen.MATRIX_EMBED, ()),
    (gen.DIAG_BOOSTED, (50.0,)),
    (gen.DIAG_BOOSTED, (0.5,)),
    (gen.DIAG_BOOSTED, (2.0,)),
)


def trial_tensor(i: int, seed: int, symmetric: bool = False):
    """The i-th battery tensor: order cycles 2,3,4, dimension 2,3,4, then family.

    Returns ``(spec, symmetrized, tensor)``.
    """
    m = (2, 3, 4)[i % 3]
    n = (2, 3, 4)[(i // 3) % 3]
    s = seed * 100_003 + i
    if i % 25 == 24:
        spec = gen.GenSpec(gen.ZERO, m, n, s)
    elif i % 25 == 12:
        spec = gen.GenSpec(gen.IDENTITY, m, n, s)
    else:
        kind, params = _FAMILY[(i // 9) % len(_FAMILY)]
        if kind == gen.MATRIX_EMBED:
            if m == 2:
                params = tuple(gen.random_int_matrix(n, s).ravel())
            else:
                kind, params = gen.DIAG_BOOSTED, (1.5,)
        spec = gen.GenSpec(kind, m, n, s, params)
    A = gen.generate(spec)
    sym = symmetric and spec.kind in (gen.NONNEGATIVE, gen.MATRIX_EMBED)
    if sym:
        A = symmetrize(A)
    return spec, sym, A


def _base_record(i, spec, sym, A):
    return {"trial": i, "spec": spec.to_record(), "symmetrized": sym,
            "diag_min": float(A.diagonal().min())}


# ---------------------------------------------------------------- uniqueness batteries


def _uniqueness_check(A, q_kind, count, seed):
    # support enumeration over `count` q vectors must return only x = 0
    bad = []
    for k in range(count):
        q = gen.sample_q(q_kind, A.dim, seed + k)
        rep = solve_support_enum(TcpInstance(A, q))
        if len(rep.solutions) != 1 or np.any(rep.solutions[0].x != 0):
            bad.append([float(v) for v in q])
    return bad


def _counterexample_check(A, v, mode):
    inst_q = counterexample_q(A, v.witness, v.witness_set, mode)
    inst = TcpInstance(A, inst_q)
    sol = verify_solution(inst, v.witness, VERIFY_TOL)
    zero = verify_solution(inst, np.zeros(A.dim), VERIFY_TOL)
    q_ok = bool(np.all(inst_q > 0)) if mode == WEAK else bool(np.all(inst_q >= 0))
    ok = q_ok and sol.accepted and zero.accepted and bool(np.any(v.witness > 0))
    return ok, inst_q, sol


def _uniqueness_battery(prop, classifier, mode, q_kind, trials, seed, q_samples):
    def trial(i):
        spec, sym, A = trial_tensor(i, seed)
        rec = _base_record(i, spec, sym, A)
        v = classifier(A)
        rec["status"] = rec[prop] = v.status.value
        ok = True
        if v.status is cl.Status.FAILS:
            ok, q, sol = _counterexample_check(A, v, mode)
            rec["q"] = [float(x) for x in q]
            rec["witness"] = [float(x) for x in v.witness]
            rec["residuals"] = sol.residuals
        elif v.status is cl.Status.HOLDS and A.order == 2:
            bad = _uniqueness_check(A, q_kind, q_samples, seed * 7919 + i * 101)
            rec["q_checked"] = q_samples
            if bad:
                ok = False
                rec["nonunique_q"] = bad
        rec["ok"] = ok
        if not ok:
            rec["tensor"] = tensor_to_obj(A)
        return rec

    records = _map(trial, range(trials))
    counts = {s.value: sum(r["status"] == s.value for r in records) for s in cl.Status}
    n_bad = sum(not r["ok"] for r in records)
    return records, counts, n_bad


def thm31(trials: int = 200, seed: int = 42, q_samples: int = 20) -> SuiteResult:
    """FAILS => counterexample q > 0 with a verified nonzero solution;
    HOLDS (order 2) => TCP(q, A) has only x = 0 for random q > 0."""
    records, counts, bad = _uniqueness_battery(cl.SEMI_POSITIVE, cl.classify_semi_positive, WEAK, gen.POS,
                                               trials, seed, q_samples)
    return SuiteResult("thm31", bad == 0, records, {"trials": trials, "seed": seed, "failures": bad, **counts})


def thm32(trials: int = 200, seed: int = 42, q_samples: int = 20) -> SuiteResult:
    """Strict analogue with q >= 0; the zero tensor must be refuted."""
    records, counts, bad = _uniqueness_battery(cl.STRICTLY_SEMI_POSITIVE, cl.classify_strictly_semi_positive, STRICT, gen.NONNEG,
                                               trials, seed, q_samples)
    zero_ok = True
    for m in (2, 3, 4):
        for n in (1, 2, 3):
            Z = zeros(m, n)
            v = cl.classify_strictly_semi_positive(Z)
            ok = v.status is cl.Status.FAILS and _counterexample_check(Z, v, STRICT)[0]
            records.append({"trial": f"zero-{m}-{n}", "status": v.status.value, "ok": ok,
                            cl.STRICTLY_SEMI_POSITIVE: v.status.value,
                            "diag_min": 0.0, "spec": {"kind": gen.ZERO, "order": m, "dim": n}})
            zero_ok &= ok
    bad += 0 if zero_ok else 1
    return SuiteResult("thm32", bad == 0, records,
                       {"trials": trials, "seed": seed, "failures": bad, "zero_tensor_ok": zero_ok, **counts})


def thm33(trials: int = 200, seed: int = 42, max_unknown_rate: float = 0.30) -> SuiteResult:
    """Symmetric tensors: semi-positivity and copositivity verdicts agree
    (and their strict versions), whenever both are decided."""
    def trial(i):
        spec, sym, A = trial_tensor(i, seed, symmetric=True)
        rec = _base_record(i, spec, sym, A)
        sp = cl.classify_semi_positive(A)
        cp = cl.classify_copositive(A, strict=False)
        ssp = cl.classify_strictly_semi_positive(A)
        scp = cl.classify_copositive(A, strict=True)
        rec.update(semi_positive=sp.status.value, copositive=cp.status.value,
                   strictly_semi_positive=ssp.status.value, strictly_copositive=scp.status.value)
        pairs = [(sp, cp), (ssp, scp)]
        rec["unknown_pairs"] = sum(cl.Status.UNKNOWN in (a.status, b.status) for a, b in pairs)
        rec["disagreements"] = sum(a.status != b.status for a, b in pairs
                                   if cl.Status.UNKNOWN not in (a.status, b.status))
        # strict infeasibility implies weak infeasibility
        rec["monotone_ok"] = not (ssp.status is cl.Status.HOLDS and sp.status is not cl.Status.HOLDS)
        rec["ok"] = rec["disagreements"] == 0 and rec["monotone_ok"]
        if not rec["ok"]:
            rec["tensor"] = tensor_to_obj(A)
        return rec

    records = _map(trial, range(trials))
    dis = sum(r["disagreements"] for r in records)
    unk = sum(r["unknown_pairs"] for r in records) / (2 * trials)
    mono = sum(not r["monotone_ok"] for r in records)
    passed = dis == 0 and mono == 0 and unk < max_unknown_rate
    return SuiteResult("thm33", passed, records, {"trials": trials, "seed": seed, "disagreements": dis,
                                                  "monotone_violations": mono, "unknown_rate": unk})


def cor35(tensors: int = 20, q_samples: int = 50, seed: int = 42, beta: float = gen.DEFAULT_BOOST) -> SuiteResult:
    """Strictly copositive symmetric tensors are solvable for every sampled q."""
    records = []
    solved = attempts = reseeds = 0
    for t in range(tensors):
        m = (2, 3, 4)[t % 3]
        n = (2, 3, 4)[(t // 3) % 3]
        s = seed * 100_003 + t
        while True:
            spec = gen.GenSpec(gen.DIAG_BOOSTED, m, n, s, (beta,))
            A = gen.generate(spec)
            v = cl.classify_copositive(A, strict=True)
            if v.status is cl.Status.HOLDS:
                break
            reseeds += 1
            records.append({"tensor_index": t, "spec": spec.to_record(), "reseeded": v.status.value})
            s += 1_000_000_007
        probe = q_tensor_probe(A, q_samples, seed=s)
        solved += probe.solved
        attempts += q_samples
        rec = {"tensor_index": t, "spec": spec.to_record(), "solved": probe.solved, "samples": q_samples,
               "ok": probe.unsolved == 0}
        if probe.unsolved:
            rec["unsolved_q"] = [r["q"] for r in probe.samples if not r["solved"]]
            rec["tensor"] = tensor_to_obj(A)
        records.append(rec)
    return SuiteResult("cor35", solved == attempts, records,
                       {"tensors": tensors, "seed": seed, "solved": solved, "attempts": attempts,
                        "reseeds": reseeds})


def prop21(results) -> SuiteResult:
    """No negative diagonal entry in a semi-positive verdict, no nonpositive
    one in a strictly semi-positive verdict, across the given batteries."""
    records = []
    scanned = 0
    for res in results:
        for r in res.records:
            if "diag_min" not in r:
                continue
            scanned += 1
            d = r["diag_min"]
            bad = []
            holds = cl.Status.HOLDS.value
            if d < -DIAG_TOL and r.get(cl.SEMI_POSITIVE) == holds:
                bad.append("negative diagonal classified semi-positive")
            if d <= 0 and r.get(cl.STRICTLY_SEMI_POSITIVE) == holds:
                bad.append("nonpositive diagonal classified strictly semi-positive")
            if bad:
                records.append({"suite": res.name, "trial": r["trial"], "violations": bad})
    return SuiteResult("prop21", not records, records, {"scanned": scanned, "violations": len(records)})


def prop22(count: int = 50, seed: int = 42, max_draws: int = 2000) -> SuiteResult:
    """Principal sub-tensors of semi-positive tensors are never refuted."""
    records = []
    found = violations = 0
    i = 0
    while found < count and i < max_draws:
        spec, sym, A = trial_tensor(i, seed + 1)
        i += 1
        v = cl.classify_semi_positive(A)
        if v.status is not cl.Status.HOLDS:
            continue
        found += 1
        vs = cl.classify_strictly_semi_positive(A)
        rec = _base_record(i - 1, spec, sym, A)
        rec.update({cl.SEMI_POSITIVE: v.status.value, cl.STRICTLY_SEMI_POSITIVE: vs.status.value})
        bad = []
        for N in subsets(A.dim):
            B = principal_subtensor(A, N)
            if cl.classify_semi_positive(B).status is cl.Status.FAILS:
                bad.append({"set": [k + 1 for k in N], "property": cl.SEMI_POSITIVE})
            if vs.status is cl.Status.HOLDS and \
                    cl.classify_strictly_semi_positive(B).status is cl.Status.FAILS:
                bad.append({"set": [k + 1 for k in N], "property": cl.STRICTLY_SEMI_POSITIVE})
        rec["ok"] = not bad
        if bad:
            violations += len(bad)
            rec["violations"] = bad
            rec["tensor"] = tensor_to_obj(A)
        records.append(rec)
    passed = violations == 0 and found == count
    return SuiteResult("prop22", passed, records, {"tensors": found, "draws": i, "violations": violations})


def m2oracle(trials: int = 100, seed: int = 42, q_samples: int = 5) -> SuiteResult:
    """Order 2: classifier verdicts equal exact rational answers, and the
    complete LCP support enumeration confirms each semi-positivity verdict."""
    def trial(i):
        n = 1 + i % 3
        M = gen.random_int_matrix(n, seed * 100_003 + i)
        Mi = M.astype(int).tolist()
        A = from_matrix(M)
        ref = {cl.SEMI_POSITIVE: oracle.is_semi_positive(Mi),
               cl.STRICTLY_SEMI_POSITIVE: oracle.is_strictly_semi_positive(Mi),
               cl.COPOSITIVE: oracle.hadeler(Mi),
               cl.STRICTLY_COPOSITIVE: oracle.hadeler(Mi, strict=True)}
        rec = {"trial": i, "matrix": Mi, "diag_min": float(np.diag(M).min())}
        ok = True
        for prop in cl.PROPERTIES:
            v = cl.classify(A, prop)
            rec[prop] = v.status.value
            if v.status is cl.Status.UNKNOWN or (v.status is cl.Status.HOLDS) != ref[prop]:
                ok = False
            if prop in (cl.SEMI_POSITIVE, cl.STRICTLY_SEMI_POSITIVE):
                mode, q_kind = (WEAK, gen.POS) if prop == cl.SEMI_POSITIVE else (STRICT, gen.NONNEG)
                if v.status is cl.Status.FAILS:
                    q = counterexample_q(A, v.witness, v.witness_set, mode)
                    rep = solve_support_enum(TcpInstance(A, q))
                    # a continuum of solutions is expected here, so only ask for a nonzero one
                    ok &= not rep.exhausted and rep.has_nonzero()
                elif v.status is cl.Status.HOLDS:
                    ok &= not _uniqueness_check(A, q_kind, q_samples, seed * 31 + i * 7)
        rec["oracle"] = {k: bool(b) for k, b in ref.items()}
        rec["ok"] = bool(ok)
        return rec

    records = _map(trial, range(trials))
    agree = sum(r["ok"] for r in records)
    return SuiteResult("m2oracle", agree == trials, records, {"trials": trials, "seed": seed, "agree": agree})


def _fd_gradient(A, x, h=1e-5):
    g = np.zeros_like(x)
    for j in range(len(x)):
        e = np.zeros_like(x)
        e[j] = h
        g[j] = (poly_eval(A, x + e) - poly_eval(A, x - e)) / (2 * h)
    return g


def kernels(trials: int = 50, seed: int = 42) -> SuiteResult:
    """Finite-difference gradient check and the two reference minimisations."""
    records = []
    worst = 0.0
    for i in range(trials):
        m = (2, 3, 4)[i % 3]
        n = (2, 3, 4)[(i // 3) % 3]
        A = gen.generate(gen.GenSpec(gen.SYMMETRIC_GAUSSIAN, m, n, seed * 100_003 + i))
        x = -1.0 + 2.0 * gen.uniforms(seed * 100_003 + i, 7, n)
        g = m * map_apply(A, x)
        fd = _fd_gradient(A, x)
        rel = float(np.abs(g - fd).max() / max(np.abs(g).max(), 1e-300))
        worst = max(worst, rel)
        records.append({"trial": i, "order": m, "dim": n, "rel_err": rel, "ok": rel <= 1e-6})
    grad_ok = worst <= 1e-6

    r1 = cl.simplex_minimize(identity(3, 2))
    r2 = cl.simplex_minimize(from_matrix([[0.0, -1.0], [-1.0, 0.0]]))
    min_ok = (abs(r1.min_value - 0.25) <= 1e-8 and abs(r2.min_value + 0.5) <= 1e-8
              and r1.kkt_res <= 1e-6 and r2.kkt_res <= 1e-6)
    records.append({"case": "identity-3-2", "min_value": r1.min_value, "kkt_res": r1.kkt_res,
                    "minimizer": r1.minimizer.tolist()})
    records.append({"case": "matrix[[0,-1],[-1,0]]", "min_value": r2.min_value, "kkt_res": r2.kkt_res,
                    "minimizer": r2.minimizer.tolist()})
    return SuiteResult("kernels", grad_ok and min_ok, records,
                       {"trials": trials, "worst_rel_err": worst, "minimize_ok": min_ok})


SUITES = {
    "thm31": thm31,
    "thm32": thm32,
    "thm33": thm33,
    "cor35": cor35,
    "prop22": prop22,
    "m2oracle": m2oracle,
    "kernels": kernels,
}


def run_suite(name: str, trials: int | None = None, seed: int = 42) -> list:
    """Run a battery by name; ``prop21`` and ``all`` run several.

    Returns a list of results (one per battery run).
    """
    kw = {"seed": seed}
    if name == "prop21":
        parts = [fn(seed=seed) for fn in (thm31, thm32, thm33, prop22)]
        return parts + [prop21(parts)]
    if name == "all":
        parts = [SUITES[k](seed=seed) for k in SUITES]
        return parts + [prop21([p for p in parts if p.name in ("thm31", "thm32", "thm33", "prop22", "m2oracle")])]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES) + ['prop21', 'all']}")
    if trials is not None:
        key = {"cor35": "tensors", "prop22": "count"}.get(name, "trials")
        kw[key] = trials
    return [SUITES[name](**kw)]
