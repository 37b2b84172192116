"""Command-line entry point: ``tcpkit {classify,solve,probe,gen,suite}``.

Reports are written as JSON lines followed by a summary record. Exit codes:
0 completed, 1 usage or input error, 2 internal failure (including a failed
suite or an exhausted solver budget).
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys

import numpy as np

from . import classify as cl
from . import generate as gen
from . import io, solve, suites

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive_float(s):
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(s):
    v = int(s)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tcpkit", description="Tensor complementarity toolkit")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    c = sub.add_parser("classify", help="classify a tensor")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--property", action="append", choices=list(cl.PROPERTIES) + ["all"])
    c.add_argument("--tol", type=_positive_float)
    c.add_argument("--budget", type=_positive_int)
    c.add_argument("--out")

    s = sub.add_parser("solve", help="solve a TCP instance")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--method", choices=["support-enum", "fb-newton", "both"], default="both")
    s.add_argument("--tol", type=_positive_float, default=solve.VERIFY_TOL)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")

    q = sub.add_parser("probe", help="sample q vectors and try to solve TCP(q, A)")
    q.add_argument("--in", dest="input", required=True)
    q.add_argument("--trials", type=_positive_int, default=50)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out")

    g = sub.add_parser("gen", help="generate a tensor or instance")
    g.add_argument("--spec", help="JSON file with kind/order/dim/seed/params")
    g.add_argument("--kind", choices=gen.KINDS)
    g.add_argument("--order", type=int)
    g.add_argument("--dim", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--params", type=float, nargs="*", default=[])
    g.add_argument("--q-kind", choices=gen.Q_KINDS)
    g.add_argument("--q-seed", type=int)
    g.add_argument("--out", required=True)

    t = sub.add_parser("suite", help="run a verification battery")
    t.add_argument("--name", required=True, choices=sorted(suites.SUITES) + ["prop21", "all"])
    t.add_argument("--trials", type=_positive_int)
    t.add_argument("--seed", type=int, default=42)
    t.add_argument("--out")
    return p


def _emit(records, path):
    text = io.dumps_records(records)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_classify(args):
    A = io.load(args.input, "tensor")
    props = args.property or ["all"]
    if "all" in props:
        props = list(cl.PROPERTIES)
    budget = cl.SearchBudget(evals=args.budget) if args.budget else cl.DEFAULT_BUDGET
    tol = cl.Tolerances(strict=args.tol, zero=args.tol / 10) if args.tol else cl.DEFAULT_TOL
    records = [cl.classify(A, p, budget, tol).to_record() for p in props]
    summary = {"summary": True, "order": A.order, "dim": A.dim,
               "statuses": {r["property"]: r["status"] for r in records}}
    _emit(records + [summary], args.out)
    return EXIT_OK


def _cmd_solve(args):
    inst = io.load(args.input, "instance")
    reports = []
    if args.method in ("support-enum", "both"):
        reports.append(("support-enum", solve.solve_support_enum(inst, tol=args.tol, seed=args.seed)))
    if args.method in ("fb-newton", "both"):
        rng = np.random.default_rng(args.seed)
        m = inst.A.order
        starts = [np.zeros(inst.A.dim), np.maximum(-inst.q, 0) ** (1.0 / (m - 1)), np.ones(inst.A.dim)]
        starts += list(rng.uniform(0, 1, size=(4, inst.A.dim)))
        rep = None
        for x0 in starts:
            rep = solve.solve_fb_newton(inst, x0, tol=args.tol)
            if rep.solved:
                break
        reports.append(("fb-newton", rep))
    records = []
    seen = []
    for method, rep in reports:
        for s in rep.solutions:
            if any(np.abs(s.x - t).max() <= 1e-6 * (1 + np.abs(s.x).max()) for t in seen):
                continue
            seen.append(s.x)
            records.append({**s.to_record(), "method": method})
    complete = any(rep.complete for _, rep in reports)
    exhausted = any(rep.exhausted for _, rep in reports)
    records.append({"complete": complete, "num_solutions": len(seen), "exhausted": exhausted,
                    "continuum_suspected": any(rep.continuum_suspected for _, rep in reports)})
    _emit(records, args.out)
    return EXIT_FAIL if exhausted else EXIT_OK


def _cmd_probe(args):
    A = io.load(args.input, "tensor")
    rep = solve.q_tensor_probe(A, args.trials, args.seed)
    summary = {"summary": rep.summary, "solved": rep.solved, "unsolved": rep.unsolved,
               "disproofs": len(rep.disproofs)}
    _emit(rep.samples + [summary], args.out)
    return EXIT_OK


def _cmd_gen(args):
    if args.spec:
        with open(args.spec, encoding="utf-8") as fh:
            obj = json.load(fh)
        fields = {f.name for f in dataclasses.fields(gen.GenSpec)}
        unknown = set(obj) - fields
        if unknown:
            raise UsageError(f"spec file has unknown fields {sorted(unknown)}")
        spec = gen.GenSpec(**obj)
    else:
        if args.kind is None or args.order is None or args.dim is None:
            raise UsageError("gen needs --spec or all of --kind, --order, --dim")
        spec = gen.GenSpec(args.kind, args.order, args.dim, args.seed, tuple(args.params))
    if args.q_kind:
        inst = gen.gen_instance(spec, args.q_kind, args.seed if args.q_seed is None else args.q_seed)
        io.store(args.out, inst, "instance")
    else:
        io.store(args.out, gen.generate(spec), "tensor")
    return EXIT_OK


def _cmd_suite(args):
    results = suites.run_suite(args.name, args.trials, args.seed)
    records = []
    for res in results:
        records.extend({"suite": res.name, **r} for r in res.records)
        records.append(res.summary_record())
    ok = all(r.passed for r in results)
    records.append({"summary": True, "passed": ok, "suites": {r.name: r.passed for r in results}})
    _emit(records, args.out)
    return EXIT_OK if ok else EXIT_FAIL


_COMMANDS = {"classify": _cmd_classify, "solve": _cmd_solve, "probe": _cmd_probe, "gen": _cmd_gen,
             "suite": _cmd_suite}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError(parser.format_usage().strip())
        return _COMMANDS[args.command](args)
    except (UsageError, io.FormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
