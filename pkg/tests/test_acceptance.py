"""Acceptance suite: one test and one summary line per criterion (1-12).

Each criterion is run on every built-in algebra it applies to.  The summary
lines are printed at the end of the pytest run (see conftest.py) and also when
this file is executed directly with ``python tests/test_acceptance.py``.
"""
import time

import pytest

from superw.liealg import builtin
from superw.suite import CRITERIA, ONLY_FOR, run_criterion

ALGEBRAS = ("osp12", "sl21")
TIME_LIMITS = {1: 60.0, 7: 300.0}
RESULTS = {}


def evaluate(n):
    parts, seconds = [], 0.0
    for name in ALGEBRAS:
        need = ONLY_FOR.get(n)
        if need and need != name:
            continue
        t0 = time.perf_counter()
        crit = run_criterion(n, builtin(name))
        seconds += time.perf_counter() - t0
        parts.append((name, crit))
    ok = all(c.ok for _, c in parts)
    fails = [f"{name}: {r.title}: {e[0]}" + (f" ({e[2]})" if e[2] else "")
             for name, c in parts for r in c.reports for e in r.failures()]
    limit = TIME_LIMITS.get(n)
    if limit is not None and seconds > limit:
        ok = False
        fails.append(f"runtime {seconds:.1f}s exceeds {limit:.0f}s")
    line = (f"criterion {n:2d} [{'PASS' if ok else 'FAIL'}] {CRITERIA[n]} "
            f"({', '.join(name for name, _ in parts)}; {seconds:.1f}s)")
    if fails:
        line += "\n    " + "\n    ".join(fails)
    RESULTS[n] = line
    return ok, line


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n):
    ok, line = evaluate(n)
    assert ok, line


if __name__ == "__main__":
    for n in sorted(CRITERIA):
        print(evaluate(n)[1])
