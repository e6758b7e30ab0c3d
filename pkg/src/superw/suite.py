"""The verification suite: every check grouped into numbered criteria.

``run_suite(spec)`` returns a list of :class:`Criterion`; a criterion passes
when all of its reports pass.  Criteria tied to one specific algebra are
skipped (and marked so) for the other.
"""
from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from gmpy2 import mpq

from .liealg import AlgebraSpec, Report, builtin, check_algebra

SCHEMA = "superw.verify/1"

CRITERIA: Dict[int, str] = {
    1: "lambda- and Lambda-bracket axioms",
    2: "d^2 = 0",
    3: "building-block closure",
    4: "osp(1|2) golden displays",
    5: "sl(2|1) golden displays",
    6: "central charge",
    7: "screening operators",
    8: "Zhu algebra layer",
    9: "finite SUSY W-algebra example",
    10: "ghost center",
    11: "complexes and the iota bridge",
    12: "dimension counts and two-path agreement",
}


@dataclass
class Criterion:
    number: int
    name: str
    reports: List[Report] = field(default_factory=list)
    skipped: str = ""

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.reports)

    def status(self) -> str:
        return "SKIP" if self.skipped else ("PASS" if self.ok else "FAIL")

    def as_dict(self):
        return {"id": self.number, "name": self.name, "status": self.status(),
                "skipped": self.skipped, "reports": [r.as_dict() for r in self.reports]}


# ---------------------------------------------------------------------------
# negative controls
# ---------------------------------------------------------------------------

CORRUPTIONS = ("jacobi", "skew", "form")


def corrupt_spec(spec: AlgebraSpec, axiom: str) -> AlgebraSpec:
    """A copy of ``spec`` with one defect planted, for exercising the failure paths."""
    bad = copy.deepcopy(spec)
    o = bad.osp
    E, F, H = (next(iter(x)) for x in (o.E, o.F, o.H))
    if axiom == "jacobi":
        # double [E, F] = H; skew-symmetry survives, Jacobi does not
        key = (E, F) if (E, F) in bad.structure else (F, E)
        bad.structure[key] = {l: 2 * c for l, c in bad.structure[key].items()}
    elif axiom == "skew":
        bad.structure[(E, F)] = {H: mpq(1)}
        bad.structure[(F, E)] = {H: mpq(1)}
    elif axiom == "form":
        bad.form_table[(H, H)] = bad.form_table.get((H, H), mpq(0)) + 1
    else:
        raise ValueError(f"unknown corruption {axiom!r}; choose from {', '.join(CORRUPTIONS)}")
    bad.name = spec.name
    return bad


# ---------------------------------------------------------------------------
# the criteria
# ---------------------------------------------------------------------------

def _axioms(spec, opts) -> List[Report]:
    from .brst import build_complex
    from .susy import twist_check
    from .vertex import axiom_check
    reps = [check_algebra(spec)]
    if not reps[0].ok:
        return reps
    for flavor in ("nonsusy", "susy"):
        cs = build_complex(spec, flavor, reduced=False)
        reps.append(axiom_check(cs.raw))
    reps.append(twist_check(spec))
    return reps


def _d_squared(spec, opts) -> List[Report]:
    from .brst import build_complex, check_d_squared
    return [check_d_squared(build_complex(spec, f, reduced=False), opts["sample_k"])
            for f in ("nonsusy", "susy")]


def _closure(spec, opts) -> List[Report]:
    from .brst import build_complex, check_closure
    return [check_closure(build_complex(spec, f)) for f in ("nonsusy", "susy")]


def _osp(spec, opts):
    from .worked import osp_golden
    return [osp_golden()]


def _sl21(spec, opts):
    from .worked import sl21_golden
    return [sl21_golden()]


def _cc(spec, opts):
    from .worked import central_charge_report
    return [central_charge_report(spec)]


def _screening(spec, opts):
    from .worked import screening_report
    return [screening_report(spec, opts["cutoff"])]


def _zhu(spec, opts):
    from .zhu import zhu_report
    return zhu_report(spec)


def _finite(spec, opts):
    from .env import check_finite_example
    return [check_finite_example()]


def _ghost(spec, opts):
    from .env import check_ghost_center
    return [check_ghost_center(spec)]


def _bridge(spec, opts):
    from .env import (character, check_bridge, check_homology_complex, check_lie_complex,
                      check_takiff, takiff, takiff_envelope, check_character)
    T = takiff(spec)
    U = takiff_envelope(T, level=1)
    chi = character(T, 1)
    return [check_takiff(T), check_character(T, chi), check_lie_complex(U, chi)[0],
            check_homology_complex(U), check_bridge(spec)]


def _dims(spec, opts):
    from .worked import dimension_report
    return [dimension_report(spec, opts["cutoff"])]


RUNNERS: Dict[int, Callable] = {1: _axioms, 2: _d_squared, 3: _closure, 4: _osp, 5: _sl21,
                                6: _cc, 7: _screening, 8: _zhu, 9: _finite, 10: _ghost,
                                11: _bridge, 12: _dims}
ONLY_FOR = {4: "osp12", 5: "sl21", 9: "osp12", 10: "osp12"}


def run_criterion(n: int, spec: AlgebraSpec, sample_k: Sequence = (1, 2, 5), cutoff=3) -> Criterion:
    crit = Criterion(n, CRITERIA[n])
    need = ONLY_FOR.get(n)
    if need and spec.name != need:
        crit.skipped = f"specific to {need}"
        return crit
    opts = {"sample_k": tuple(sample_k), "cutoff": cutoff}
    try:
        crit.reports = RUNNERS[n](spec, opts)
    except Exception as exc:              # report, do not crash the suite
        r = Report(f"{CRITERIA[n]}: {spec.name}")
        r.add("computation completed", False, f"{type(exc).__name__}: {exc}")
        crit.reports = [r]
    return crit


def run_suite(spec: AlgebraSpec, sample_k: Sequence = (1, 2, 5), cutoff=3,
              only: Optional[Sequence[int]] = None, stop_on_axiom_failure: bool = True) -> List[Criterion]:
    out = []
    for n in (only or sorted(CRITERIA)):
        c = run_criterion(n, spec, sample_k, cutoff)
        out.append(c)
        if n == 1 and stop_on_axiom_failure and not c.ok:
            break
    return out


def suite_text(spec_name: str, results: List[Criterion]) -> str:
    lines = [f"verification suite for {spec_name}"]
    for c in results:
        lines.append(f"[{c.status()}] criterion {c.number}: {c.name}" + (f" ({c.skipped})" if c.skipped else ""))
        for r in c.reports:
            lines.extend("    " + ln for ln in r.text().splitlines())
    ok = all(c.ok for c in results)
    lines.append("overall: " + ("PASS" if ok else "FAIL"))
    return "\n".join(lines)


def suite_dict(spec_name: str, results: List[Criterion]) -> dict:
    return {"schema": SCHEMA, "algebra": spec_name, "ok": all(c.ok for c in results),
            "criteria": [c.as_dict() for c in results]}
