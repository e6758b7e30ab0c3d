"""Finite-dimensional Lie superalgebras given by structure constants.

Elements are sparse dicts ``{basis_index: coefficient}``.  Coefficients are
exact (gmpy2 ``mpq`` or :class:`~superw.scalar.GaussianRational`).

Two algebras are built in, constructed from 3x3 supermatrices (rows and
columns 1, 2 even, 3 odd) with the supertrace form ``(a|b) = str(ab)``:

* ``osp12``: basis E, e, H, f, F, with (E|F) = 1, (H|H) = 2, (e|f) = -2.
* ``sl21``: basis E, H, F, U, e, f, et, ft (``et``, ``ft`` are the tilde
  elements), containing two osp(1|2) triples.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import linalg
from .scalar import GaussianRational, _canon

Elt = Dict[int, object]

__all__ = [
    "AlgebraSpec", "GradingData", "Osp12Data", "AlgebraError",
    "osp12", "sl21", "builtin", "load_spec", "dump_spec",
    "check_algebra", "grade_decompose", "centralizer", "dual_bases",
]

SPEC_FORMAT_VERSION = 1


class AlgebraError(ValueError):
    pass


def _parse_coeff(x):
    if isinstance(x, str):
        x = x.replace(" ", "")
        if "i" in x:
            from .scalar import parse_scalar
            v = parse_scalar(x)
            return v.constant_value()
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    return _canon(x)


def _fmt_coeff(c) -> str:
    if isinstance(c, GaussianRational):
        return str(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class Osp12Data:
    """Positions of the osp(1|2) generators inside the algebra."""
    E: Elt
    e: Elt
    H: Elt
    f: Elt
    F: Elt


@dataclass
class GradingData:
    """Eigenvalues j of ad(H/2) per basis vector and the induced subspaces."""
    weight: List[Fraction]
    m_values: Dict[int, Fraction]
    n_plus: List[int]
    n_minus: List[int]
    g0: List[int]
    g_half: List[int]

    def I(self, j) -> List[int]:
        return [i for i, w in enumerate(self.weight) if w == j]


class AlgebraSpec:
    """A Lie superalgebra with an even invariant supersymmetric form."""

    def __init__(self, name: str, basis: Sequence[Tuple[str, int]],
                 structure: Dict[Tuple[int, int], Elt], form: Dict[Tuple[int, int], object],
                 osp: Optional[Osp12Data], dual_coxeter, cartan: Sequence[int] = (),
                 display: Optional[Dict[str, str]] = None):
        self.name = name
        self.names = [b[0] for b in basis]
        self.parity = [int(b[1]) % 2 for b in basis]
        self.dim = len(basis)
        self.index = {n: i for i, n in enumerate(self.names)}
        self.structure = {key: {i: _canon(c) for i, c in v.items() if c}
                          for key, v in structure.items()}
        self.form_table = {key: _canon(c) for key, c in form.items() if c}
        self.osp = osp
        self.dual_coxeter = _canon(dual_coxeter) if dual_coxeter is not None else None
        self.cartan = list(cartan)
        self.display = dict(display or {})

    # elements -------------------------------------------------------------
    def basis_elt(self, name_or_index) -> Elt:
        i = self.index[name_or_index] if isinstance(name_or_index, str) else name_or_index
        if not 0 <= i < self.dim:
            raise AlgebraError(f"basis index {i} out of range")
        return {i: mpq(1)}

    def __getitem__(self, name: str) -> Elt:
        return self.basis_elt(name)

    def parity_of(self, a: Elt) -> int:
        ps = {self.parity[i] for i in a}
        if len(ps) > 1:
            raise AlgebraError("element is not parity-homogeneous")
        return ps.pop() if ps else 0

    def bracket_basis(self, i: int, j: int) -> Elt:
        if not (0 <= i < self.dim and 0 <= j < self.dim):
            raise AlgebraError("basis index out of range")
        if (i, j) in self.structure:
            return self.structure[(i, j)]
        if (j, i) in self.structure:
            sign = -1 if self.parity[i] * self.parity[j] == 0 else 1
            return {l: sign * c for l, c in self.structure[(j, i)].items()}
        return {}

    def bracket(self, a: Elt, b: Elt) -> Elt:
        out: Elt = {}
        for i, x in a.items():
            for j, y in b.items():
                br = self.bracket_basis(i, j)
                if br:
                    out = linalg.vadd(out, br, x * y)
        return out

    def form(self, a: Elt, b: Elt):
        acc = mpq(0)
        for i, x in a.items():
            for j, y in b.items():
                c = self.form_table.get((i, j))
                if c is None:
                    c = self.form_table.get((j, i))
                    if c is not None and self.parity[i] * self.parity[j]:
                        c = -c
                if c:
                    acc = acc + x * y * c
        return _canon(acc) if not isinstance(acc, GaussianRational) else acc

    def ad_matrix(self, a: Elt) -> Dict[int, Elt]:
        return {j: self.bracket(a, {j: mpq(1)}) for j in range(self.dim)}

    def fmt(self, a: Elt) -> str:
        if not a:
            return "0"
        parts = []
        for i in sorted(a):
            c = a[i]
            parts.append(f"{_fmt_coeff(c)}*{self.names[i]}" if c != 1 else self.names[i])
        return " + ".join(parts)

    def sdim(self, idx: Sequence[int]) -> int:
        return sum(1 if self.parity[i] == 0 else -1 for i in idx)

    # negative controls ------------------------------------------------------
    def corrupted(self, what: str) -> "AlgebraSpec":
        """A copy with one deliberately broken entry (for negative tests)."""
        st = {k: dict(v) for k, v in self.structure.items()}
        fm = dict(self.form_table)
        if what == "jacobi":
            key = sorted(st)[0]
            l = sorted(st[key])[0]
            st[key][l] = st[key][l] * 2 + 1
        elif what == "form":
            key = sorted(k for k in fm if self.parity[k[0]])[0]
            fm[key] = -fm[key]
        else:
            raise AlgebraError(f"unknown corruption {what!r}")
        basis = list(zip(self.names, self.parity))
        return AlgebraSpec(self.name + "-corrupt-" + what, basis, st, fm, self.osp,
                           self.dual_coxeter, self.cartan, self.display)


# --------------------------------------------------------------------------
# Construction from supermatrices
# --------------------------------------------------------------------------

_ODD_IDX = (2,)


def _mparity(i, j):
    return int((i in _ODD_IDX) != (j in _ODD_IDX))


def _mat(entries: Dict[Tuple[int, int], int]) -> Dict[Tuple[int, int], mpq]:
    return {(i - 1, j - 1): mpq(c) for (i, j), c in entries.items()}


def _mmul(a, b):
    out = {}
    for (i, j), x in a.items():
        for (j2, l), y in b.items():
            if j == j2:
                out[(i, l)] = out.get((i, l), 0) + x * y
    return {key: v for key, v in out.items() if v}


def _supercomm(a, pa, b, pb):
    """[a,b] = ab - (-1)^{p(a)p(b)} ba."""
    sign = -1 if pa * pb else 1
    out = dict(_mmul(a, b))
    for key, v in _mmul(b, a).items():
        out[key] = out.get(key, 0) - sign * v
    return {key: v for key, v in out.items() if v}


def _str(m):
    return sum((v if i not in _ODD_IDX else -v) for (i, j), v in m.items() if i == j)


def _from_matrices(name, mats, osp_names, cartan_names, display=None) -> AlgebraSpec:
    names = [n for n, _, _ in mats]
    par = [p for _, p, _ in mats]
    ms = [_mat(m) for _, _, m in mats]
    keys = sorted({key for m in ms for key in m})
    cols = {i: {key: m.get(key, 0) for key in keys if m.get(key, 0)} for i, m in enumerate(ms)}
    structure, form = {}, {}
    for i in range(len(ms)):
        for j in range(i, len(ms)):
            c = _supercomm(ms[i], par[i], ms[j], par[j])
            if c:
                sol = linalg.solve(cols, list(range(len(ms))), c)
                if sol is None:
                    raise AlgebraError("basis not closed under the bracket")
                structure[(i, j)] = sol
            v = _str(_mmul(ms[i], ms[j]))
            if v:
                form[(i, j)] = v
    idx = {n: i for i, n in enumerate(names)}
    osp = Osp12Data(*({idx[n]: mpq(1)} for n in osp_names))
    spec = AlgebraSpec(name, list(zip(names, par)), structure, form, osp, None,
                       [idx[n] for n in cartan_names], display)
    spec.dual_coxeter = _canon(_compute_dual_coxeter(spec))
    return spec


def _compute_dual_coxeter(spec: AlgebraSpec):
    for i in range(spec.dim):
        for j in range(spec.dim):
            f = spec.form({i: 1}, {j: 1})
            if f:
                return _killing(spec, {i: 1}, {j: 1}) / (2 * f)
    return mpq(0)


def _killing(spec: AlgebraSpec, a: Elt, b: Elt):
    acc = mpq(0)
    for l in range(spec.dim):
        v = spec.bracket(a, spec.bracket(b, {l: 1}))
        c = v.get(l, 0)
        if c:
            acc += c if spec.parity[l] == 0 else -c
    return acc


def osp12() -> AlgebraSpec:
    """osp(1|2) with basis E, e, H, f, F."""
    mats = [
        ("E", 0, {(1, 2): 1}),
        ("e", 1, {(1, 3): 1, (3, 2): 1}),
        ("H", 0, {(1, 1): 1, (2, 2): -1}),
        ("f", 1, {(3, 1): -1, (2, 3): 1}),
        ("F", 0, {(2, 1): 1}),
    ]
    return _from_matrices("osp12", mats, ("E", "e", "H", "f", "F"), ("H",))


def sl21() -> AlgebraSpec:
    """sl(2|1) with basis E, H, F, U, e, f, et, ft (et, ft are the tilde elements)."""
    mats = [
        ("E", 0, {(1, 2): 1}),
        ("H", 0, {(1, 1): 1, (2, 2): -1}),
        ("F", 0, {(2, 1): 1}),
        ("U", 0, {(1, 1): -1, (2, 2): -1, (3, 3): -2}),
        ("e", 1, {(1, 3): 1, (3, 2): 1}),
        ("f", 1, {(3, 1): -1, (2, 3): 1}),
        ("et", 1, {(1, 3): 1, (3, 2): -1}),
        ("ft", 1, {(3, 1): -1, (2, 3): -1}),
    ]
    return _from_matrices("sl21", mats, ("E", "e", "H", "f", "F"), ("H", "U"))


_BUILTINS = {"osp12": osp12, "sl21": sl21}
_CACHE: Dict[str, AlgebraSpec] = {}


def builtin(name: str) -> AlgebraSpec:
    key = name.lower().replace("(", "").replace(")", "").replace("|", "").replace(" ", "")
    key = {"osp1|2": "osp12", "sl2|1": "sl21"}.get(key, key)
    if key not in _BUILTINS:
        raise AlgebraError(f"unknown built-in algebra {name!r}")
    if key not in _CACHE:
        _CACHE[key] = _BUILTINS[key]()
    return _CACHE[key]


# --------------------------------------------------------------------------
# Spec files (JSON, exact rationals as strings)
# --------------------------------------------------------------------------

def dump_spec(spec: AlgebraSpec) -> str:
    """Serialize deterministically (byte-stable for a given spec)."""
    def elt(a):
        return {spec.names[i]: _fmt_coeff(c) for i, c in sorted(a.items())}
    data = {
        "format": "superw-algebra",
        "version": SPEC_FORMAT_VERSION,
        "name": spec.name,
        "basis": [[n, p] for n, p in zip(spec.names, spec.parity)],
        "brackets": [[spec.names[i], spec.names[j], elt(v)]
                     for (i, j), v in sorted(spec.structure.items())],
        "form": [[spec.names[i], spec.names[j], _fmt_coeff(c)]
                 for (i, j), c in sorted(spec.form_table.items())],
        "cartan": [spec.names[i] for i in spec.cartan],
        "dual_coxeter": _fmt_coeff(spec.dual_coxeter) if spec.dual_coxeter is not None else None,
    }
    if spec.osp is not None:
        data["osp12"] = {k: elt(getattr(spec.osp, k)) for k in ("E", "e", "H", "f", "F")}
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def load_spec(text_or_path: str) -> AlgebraSpec:
    """Load a spec from JSON text or a file path; validates axioms."""
    text = text_or_path
    if not text_or_path.lstrip().startswith("{"):
        with open(text_or_path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraError(f"spec parse error: {exc}") from exc
    if data.get("format") != "superw-algebra" or data.get("version") != SPEC_FORMAT_VERSION:
        raise AlgebraError("unsupported spec format or version")
    basis = [(n, int(p)) for n, p in data["basis"]]
    idx = {n: i for i, (n, _) in enumerate(basis)}

    def elt(d):
        try:
            return {idx[n]: _parse_coeff(c) for n, c in d.items()}
        except KeyError as exc:
            raise AlgebraError(f"unknown basis name {exc}") from None
    structure = {}
    for a, b, v in data.get("brackets", []):
        structure[(idx[a], idx[b])] = elt(v)
    form = {(idx[a], idx[b]): _parse_coeff(c) for a, b, c in data.get("form", [])}
    osp = None
    if "osp12" in data:
        o = data["osp12"]
        osp = Osp12Data(*(elt(o[k]) for k in ("E", "e", "H", "f", "F")))
    hv = data.get("dual_coxeter")
    spec = AlgebraSpec(data.get("name", "custom"), basis, structure, form, osp,
                       _parse_coeff(hv) if hv is not None else None,
                       [idx[n] for n in data.get("cartan", [])])
    if spec.dual_coxeter is None:
        spec.dual_coxeter = _canon(_compute_dual_coxeter(spec))
    return spec


# --------------------------------------------------------------------------
# Checks and derived data
# --------------------------------------------------------------------------

@dataclass
class Report:
    title: str
    entries: List[Tuple[str, bool, str]] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = ""):
        self.entries.append((name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(e[1] for e in self.entries)

    def failures(self):
        return [e for e in self.entries if not e[1]]

    def text(self) -> str:
        lines = [self.title]
        for name, ok, detail in self.entries:
            lines.append(f"  [{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        lines.extend(f"  [NOTE] {n}" for n in self.notes)
        return "\n".join(lines)

    def as_dict(self):
        return {"title": self.title, "ok": self.ok,
                "entries": [{"name": n, "ok": o, "detail": d} for n, o, d in self.entries],
                "notes": list(self.notes)}


def check_algebra(spec: AlgebraSpec) -> Report:
    """Verify skew-symmetry, Jacobi, form symmetry/invariance/nondegeneracy,
    grading compatibility and the Killing-form normalization."""
    rep = Report(f"algebra axioms: {spec.name}")
    n, p = spec.dim, spec.parity
    E = [{i: mpq(1)} for i in range(n)]

    bad = []
    for i, j in product(range(n), repeat=2):
        lhs = spec.bracket(E[i], E[j])
        rhs = {l: -(-1) ** (p[i] * p[j]) * c for l, c in spec.bracket(E[j], E[i]).items()}
        if linalg.vadd(lhs, rhs, -1):
            bad.append((spec.names[i], spec.names[j]))
        # parity of the bracket
        if any(spec.parity[l] != (p[i] + p[j]) % 2 for l in lhs):
            bad.append(("parity", spec.names[i], spec.names[j]))
    rep.add("skew-symmetry", not bad, str(bad[:3]) if bad else "")

    bad = []
    for i, j, l in product(range(n), repeat=3):
        a = spec.bracket(E[i], spec.bracket(E[j], E[l]))
        b = spec.bracket(spec.bracket(E[i], E[j]), E[l])
        c = spec.bracket(E[j], spec.bracket(E[i], E[l]))
        r = linalg.vadd(linalg.vadd(a, b, -1), c, -(-1) ** (p[i] * p[j]))
        if r:
            bad.append((spec.names[i], spec.names[j], spec.names[l]))
    rep.add("Jacobi", not bad, str(bad[:3]) if bad else "")

    bad = []
    for i, j in product(range(n), repeat=2):
        f1 = spec.form(E[i], E[j])
        f2 = spec.form(E[j], E[i])
        if f1 != (-1) ** (p[i] * p[j]) * f2 or (f1 and p[i] != p[j]):
            bad.append((spec.names[i], spec.names[j]))
    rep.add("form even and supersymmetric", not bad, str(bad[:3]) if bad else "")

    bad = []
    for i, j, l in product(range(n), repeat=3):
        lhs = spec.form(spec.bracket(E[i], E[j]), E[l])
        rhs = spec.form(E[i], spec.bracket(E[j], E[l]))
        if lhs != rhs:
            bad.append(f"([{spec.names[i]},{spec.names[j]}]|{spec.names[l]}) = {_fmt_coeff(_canon(lhs))}"
                       f" vs ({spec.names[i]}|[{spec.names[j]},{spec.names[l]}]) = {_fmt_coeff(_canon(rhs))}")
    rep.add("form invariant", not bad, "; ".join(bad[:2]))

    gram = {j: {i: spec.form(E[i], E[j]) for i in range(n) if spec.form(E[i], E[j])} for j in range(n)}
    nd = not linalg.nullspace(gram, list(range(n))) if n else True
    rep.add("form nondegenerate", nd)

    if spec.osp is not None:
        try:
            g = grade_decompose(spec)
            badg = []
            for i, j in product(range(n), repeat=2):
                for l in spec.bracket(E[i], E[j]):
                    if g.weight[l] != g.weight[i] + g.weight[j]:
                        badg.append((spec.names[i], spec.names[j]))
            rep.add("grading compatible", not badg, str(badg[:3]) if badg else "")
        except AlgebraError as exc:
            rep.add("grading compatible", False, str(exc))
        o = spec.osp
        ok = (spec.bracket(o.H, o.E) == linalg.vscale(o.E, 2)
              and spec.bracket(o.H, o.F) == linalg.vscale(o.F, -2)
              and spec.bracket(o.E, o.F) == o.H
              and linalg.vscale(spec.bracket(o.f, o.f), mpq(-1, 2)) == o.F
              and spec.bracket(o.E, o.f) == o.e and spec.bracket(o.F, o.e) == o.f
              and spec.bracket(o.H, o.e) == o.e and spec.bracket(o.H, o.f) == linalg.vscale(o.f, -1))
        rep.add("osp(1|2) relations", ok)

    bad = []
    hv = spec.dual_coxeter or 0
    for i, j in product(range(n), repeat=2):
        if _killing(spec, E[i], E[j]) != 2 * hv * spec.form(E[i], E[j]):
            bad.append((spec.names[i], spec.names[j]))
    rep.add("Killing form = 2 h^vee (.|.)", not bad, str(bad[:3]) if bad else "")
    return rep


def grade_decompose(spec: AlgebraSpec) -> GradingData:
    """Eigen-decomposition of ad(H/2) on the stored basis."""
    if spec.osp is None:
        raise AlgebraError("no osp(1|2) data / H designated")
    H = spec.osp.H
    weight = []
    for i in range(spec.dim):
        v = spec.bracket(H, {i: mpq(1)})
        if not v:
            weight.append(Fraction(0))
            continue
        if set(v) != {i}:
            raise AlgebraError(f"ad(H/2) is not diagonal on {spec.names[i]}")
        c = v[i] / 2
        weight.append(Fraction(int(c.numerator), int(c.denominator)))
    m_values = {i: w for i, w in enumerate(weight) if w > 0}
    return GradingData(
        weight=weight, m_values=m_values,
        n_plus=[i for i, w in enumerate(weight) if w > 0],
        n_minus=[i for i, w in enumerate(weight) if w < 0],
        g0=[i for i, w in enumerate(weight) if w == 0],
        g_half=[i for i, w in enumerate(weight) if w == Fraction(1, 2)],
    )


def centralizer(spec: AlgebraSpec, v: Elt) -> List[Elt]:
    """Basis of ker ad(v), echelonized (free columns from the end of the basis)."""
    cols = {j: spec.bracket(v, {j: mpq(1)}) for j in range(spec.dim)}
    return linalg.nullspace(cols, list(range(spec.dim)))


@dataclass
class DualData:
    upper: Dict[int, Elt]        # alpha in I_+  ->  u^alpha in n_-
    full_upper: Dict[int, Elt]   # v^i with (v^i | v_j) = delta


def dual_bases(spec: AlgebraSpec, n_plus: Optional[Sequence[int]] = None,
               n_minus: Optional[Sequence[int]] = None) -> DualData:
    """u^alpha in span(n_minus) with (u^alpha|u_beta) = delta, plus full dual basis."""
    if n_plus is None or n_minus is None:
        g = grade_decompose(spec)
        n_plus, n_minus = g.n_plus, g.n_minus
    upper = {}
    for a in n_plus:
        cols = {m: {b: spec.form({m: 1}, {b: 1}) for b in n_plus if spec.form({m: 1}, {b: 1})}
                for m in n_minus}
        sol = linalg.solve(cols, list(n_minus), {a: mpq(1)})
        if sol is None:
            raise AlgebraError("degenerate pairing between n_+ and n_-")
        upper[a] = {m: _canon(c) for m, c in sol.items()}
    full = {}
    allidx = list(range(spec.dim))
    for a in allidx:
        cols = {m: {b: spec.form({m: 1}, {b: 1}) for b in allidx if spec.form({m: 1}, {b: 1})}
                for m in allidx}
        sol = linalg.solve(cols, allidx, {a: mpq(1)})
        if sol is None:
            raise AlgebraError("degenerate form")
        full[a] = {m: _canon(c) for m, c in sol.items()}
    return DualData(upper, full)
