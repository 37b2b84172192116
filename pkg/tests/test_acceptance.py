"""Acceptance criteria 1-8 at their stated sizes and tolerances.

Each test prints one ``[PASS]``/``[FAIL]`` line. Run directly with
``python tests/test_acceptance.py`` for just the summary lines.
"""
import functools
import sys
import time

import pytest

from tcpkit import suites

SEED = 42


@functools.lru_cache(maxsize=None)
def battery(name):
    t0 = time.perf_counter()
    fn = suites.SUITES[name]
    res = fn(seed=SEED)
    return res, time.perf_counter() - t0


def _line(num, title, res, detail):
    status = "PASS" if res.passed else "FAIL"
    return f"[{status}] criterion {num}: {title}: {detail}"


def criterion_1():
    res, dt = battery("thm31")
    s = res.summary
    return res, _line(1, "semi-positive uniqueness battery", res,
                      f"{s['trials']} trials, holds={s['holds']} fails={s['fails']} unknown={s['unknown']}, "
                      f"failures={s['failures']}, {dt:.1f}s") + ("" if dt <= 300 else " (over 5 min)")


def criterion_2():
    res, dt = battery("thm32")
    s = res.summary
    return res, _line(2, "strict semi-positive battery", res,
                      f"{s['trials']} trials, failures={s['failures']}, zero tensor ok={s['zero_tensor_ok']}")


def criterion_3():
    res, _ = battery("thm33")
    s = res.summary
    return res, _line(3, "symmetric agreement", res,
                      f"disagreements={s['disagreements']}, unknown rate={s['unknown_rate']:.3f} (< 0.30)")


def criterion_4():
    res, _ = battery("cor35")
    s = res.summary
    return res, _line(4, "boosted tensors solvable", res,
                      f"{s['solved']}/{s['attempts']} solved, reseeds={s['reseeds']}")


def criterion_5():
    parts = [battery(k)[0] for k in ("thm31", "thm32", "thm33", "prop22", "m2oracle")]
    res = suites.prop21(parts)
    s = res.summary
    return res, _line(5, "diagonal consistency", res, f"{s['scanned']} verdicts scanned, violations={s['violations']}")


def criterion_6():
    res, _ = battery("prop22")
    s = res.summary
    return res, _line(6, "sub-tensor inheritance", res,
                      f"{s['tensors']} tensors from {s['draws']} draws, violations={s['violations']}")


def criterion_7():
    res, _ = battery("m2oracle")
    s = res.summary
    return res, _line(7, "order-2 exact oracle", res, f"{s['agree']}/{s['trials']} agree")


def criterion_8():
    res, _ = battery("kernels")
    s = res.summary
    rec = {r["case"]: r for r in res.records if "case" in r}
    vals = ", ".join(f"{k} min={v['min_value']:.10g}" for k, v in rec.items())
    return res, _line(8, "numerical kernels", res,
                      f"worst gradient rel err={s['worst_rel_err']:.2e}, {vals}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 9)])
def test_criterion(criterion, capsys):
    res, line = criterion()
    with capsys.disabled():
        print("\n" + line)
    bad = [r for r in res.records if r.get("ok") is False or "violations" in r]
    assert res.passed, f"{line}; first bad records: {bad[:3]}"


if __name__ == "__main__":
    ok = True
    for c in CRITERIA:
        res, line = c()
        ok &= res.passed
        print(line, flush=True)
    sys.exit(0 if ok else 1)
