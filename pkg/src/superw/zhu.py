"""H-twisted Zhu algebras of freely generated vertex algebras.

For a vertex algebra presented by generators with conformal weights Delta,
Zhu_H is the enveloping algebra of the (nonlinear) Lie superalgebra spanned by
the generator images, with

    [Zhu a, Zhu b] = sum_j binom(Delta_a - 1, j) Zhu(a_(j) b),
    Zhu(:a b:)     = Zhu(a) Zhu(b) - sum_j binom(Delta_a, j + 1) Zhu(a_(j) b),
    Zhu(d a)       = -Delta_a Zhu(a).

Elements are kept in PBW normal form: words of generator indices in
non-decreasing order, odd generators not repeated.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import linalg
from .brst import (BRSTError, ComplexSpec, apply_d0, build_complex, building_block,
                   cohomology_generators, sigma)
from .liealg import AlgebraSpec, Report
from .scalar import LevelScalar, ONE, ZERO, to_scalar, K
from .vertex import NMASK, SHIFT, VertexAlgebra, VertexPoly
from .pbw import PBWAlgebra, PBWElement, Word, acc as _acc

ZhuElement = PBWElement

__all__ = [
    "ZhuAlgebra", "ZhuElement", "zhu_project", "zhu_bracket", "induced_Q",
    "check_bracket_table", "check_Q_formulas", "check_Q_squared",
    "check_good_almost_linear", "affine_profile", "finite_profile", "wfin_closure",
    "zhu_report",
]



def gbinom(x: Fraction, n: int) -> Fraction:
    """Generalized binomial coefficient x choose n."""
    out = Fraction(1)
    for i in range(n):
        out *= (x - i)
    return out / factorial(n)


class ZhuAlgebra(PBWAlgebra):
    """Zhu_H of a vertex algebra given by generators and a lambda-bracket table."""

    def __init__(self, alg: VertexAlgebra, label: str = "Zhu"):
        super().__init__([g.name for g in alg.gens], [g.parity for g in alg.gens], label)
        self.alg = alg
        self.wt = [Fraction(g.weight) for g in alg.gens]
        self._zm: Dict[tuple, Dict[Word, LevelScalar]] = {}

    def compute_bracket(self, g: int, h: int) -> Dict[Word, LevelScalar]:
        L = self.alg.bracket_letters(g << SHIFT, h << SHIFT)
        r: Dict[Word, LevelScalar] = {}
        for j, P in L.items():
            coef = gbinom(self.wt[g] - 1, j) * factorial(j)
            if coef:
                for m, c in P.items():
                    _acc(r, self._zhu_mono(m), c * to_scalar(coef))
        return r

    # -- projection -----------------------------------------------------------------
    def _zhu_letter(self, x: int) -> Dict[Word, LevelScalar]:
        g, n = x >> SHIFT, x & NMASK
        c = Fraction(1)
        for i in range(n):
            c *= -(self.wt[g] + i)
        return {(g,): to_scalar(c)} if c else {}

    def _zhu_mono(self, m: tuple) -> Dict[Word, LevelScalar]:
        r = self._zm.get(m)
        if r is not None:
            return r
        if not m:
            r = {(): ONE}
        elif len(m) == 1:
            r = self._zhu_letter(m[0])
        else:
            x, R = m[0], m[1:]
            dx = self.wt[x >> SHIFT] + (x & NMASK)
            r = {}
            A = self._zhu_letter(x)
            Bz = self._zhu_mono(R)
            for u, a in A.items():
                for v, b in Bz.items():
                    _acc(r, self.normal_word(u + v), a * b)
            L = self.alg.bracket_mono((x,), R)
            for j, P in L.items():
                coef = gbinom(dx, j + 1) * factorial(j)
                if coef:
                    for mm, c in P.items():
                        _acc(r, self._zhu_mono(mm), -c * to_scalar(coef))
        self._zm[m] = r
        return r

    def project(self, X: VertexPoly) -> ZhuElement:
        if X.alg is not self.alg:
            raise ValueError("element of a different vertex algebra")
        out: Dict[Word, LevelScalar] = {}
        for m, c in X.terms.items():
            _acc(out, self._zhu_mono(m), c)
        return ZhuElement(self, out)


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------

_ZHU: Dict[Tuple[int, str], ZhuAlgebra] = {}


def zhu_of(cs: ComplexSpec, which: str = "raw") -> ZhuAlgebra:
    """Zhu algebra of the full complex (``raw``) or of the reduced one (``blocks``)."""
    key = (id(cs), which)
    if key not in _ZHU:
        alg = cs.raw if which == "raw" else cs.blocks
        _ZHU[key] = ZhuAlgebra(alg, f"Zhu({alg.name})")
    return _ZHU[key]


def zhu_project(Z: ZhuAlgebra, X: VertexPoly) -> ZhuElement:
    return Z.project(X)


def zhu_bracket(A: ZhuElement, B: ZhuElement) -> ZhuElement:
    return A.Z.sbracket(A, B)


def induced_Q(cs: ComplexSpec, which: str = "raw") -> Callable[[ZhuElement], ZhuElement]:
    """Q on Zhu_H of the complex, induced from d_0 on generators."""
    Z = zhu_of(cs, which)
    alg = Z.alg
    on = {}
    for gi, g in enumerate(alg.gens):
        on[gi] = Z.project(apply_d0(cs, alg.gen(g.name)))
    return Z.derivation(on, odd=True)


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


class _Notation:
    """Bold elements of Zhu_H C written the way the displays use them."""

    def __init__(self, cs: ComplexSpec):
        self.cs = cs
        self.spec = cs.algebra
        self.Z = zhu_of(cs, "raw")
        self.kappa = K + self.spec.dual_coxeter
        g = cs.grading
        self.Ip = list(g.n_plus)
        self.x = {i: c * mpq(1, 2) for i, c in self.spec.osp.H.items()}

    def bar(self, y: Mapping[int, object]) -> ZhuElement:
        out = self.Z.scalar(0)
        for i, c in y.items():
            out = out + self.Z[self.spec.names[i] + "b"] * to_scalar(c)
        return out

    def bold(self, y: Mapping[int, object]) -> ZhuElement:
        """a := Zhu(D abar) - (k + h^vee)(x|a)."""
        out = self.Z.scalar(0)
        for i, c in y.items():
            out = out + self.Z["D" + self.spec.names[i] + "b"] * to_scalar(c)
        return out - self.kappa * to_scalar(self.spec.form(self.x, y))

    def phi_up_bar(self, m: Mapping[int, object]) -> ZhuElement:
        """phi^{mbar} = sum_gamma (m|u_gamma) Zhu(ph^gamma)."""
        out = self.Z.scalar(0)
        for gam in self.Ip:
            c = self.spec.form(m, {gam: 1})
            if c:
                out = out + self.Z[f"ph^{self.spec.names[gam]}"] * to_scalar(c)
        return out

    def phi_up(self, m: Mapping[int, object]) -> ZhuElement:
        out = self.Z.scalar(0)
        for gam in self.Ip:
            c = self.spec.form(m, {gam: 1})
            if c:
                out = out + self.Z[f"Dph^{self.spec.names[gam]}"] * to_scalar(c)
        return out

    def phi_low(self, n: Mapping[int, object]) -> ZhuElement:
        out = self.Z.scalar(0)
        for i, c in n.items():
            if i not in self.Ip:
                raise BRSTError("phi_n needs n in n_+")
            out = out + self.Z[f"ph_{self.spec.names[i]}"] * to_scalar(c)
        return out

    def phi_low_bar(self, n: Mapping[int, object]) -> ZhuElement:
        out = self.Z.scalar(0)
        for i, c in n.items():
            if i not in self.Ip:
                raise BRSTError("phi_nbar needs n in n_+")
            out = out + self.Z[f"Dph_{self.spec.names[i]}"] * to_scalar(c)
        return out


def check_bracket_table(cs: ComplexSpec) -> Report:
    """The commutation relations of Zhu_H C derived from the Lambda-table."""
    N = _Notation(cs)
    spec, Z = N.spec, N.Z
    rep = Report(f"Zhu bracket table: {spec.name}")
    kap = N.kappa
    E = [{i: mpq(1)} for i in range(spec.dim)]
    bad = {"bar-bar": [], "bar-a": [], "a-b": []}
    for i in range(spec.dim):
        for j in range(spec.dim):
            pa, pb = spec.parity[i], spec.parity[j]
            lhs = Z.sbracket(N.bar(E[i]), N.bar(E[j]))
            if lhs != Z.scalar(kap * to_scalar(spec.form(E[i], E[j]))):
                bad["bar-bar"].append((spec.names[i], spec.names[j]))
            lhs = Z.sbracket(N.bar(E[i]), N.bold(E[j]))
            if lhs != N.bar(spec.bracket(E[i], E[j])) * _sign(pa * pb):
                bad["bar-a"].append((spec.names[i], spec.names[j]))
            lhs = Z.sbracket(N.bold(E[i]), N.bold(E[j]))
            if lhs != N.bold(spec.bracket(E[i], E[j])) * _sign(pa * pb):
                bad["a-b"].append((spec.names[i], spec.names[j]))
    rep.add("[abar, bbar]_* = (k+h^vee)(a|b)", not bad["bar-bar"], str(bad["bar-bar"][:3]))
    rep.add("[abar, b]_* = (-1)^{p(a)p(b)} [a,b]bar", not bad["bar-a"], str(bad["bar-a"][:3]))
    rep.add("[a, b]_* = (-1)^{p(a)p(b)} [a,b]", not bad["a-b"], str(bad["a-b"][:3]))
    # ghosts: m in n_-, n in n_+
    badg = []
    for m in N.Ip:
        um = cs.dual.upper[m]
        for nidx in N.Ip:
            n = E[nidx]
            pm = spec.parity[m]
            val = to_scalar(spec.form(um, n))
            checks = [
                (Z.sbracket(N.phi_up(um), N.phi_low(n)), val),
                (Z.sbracket(N.phi_up_bar(um), N.phi_low_bar(n)) * _sign(pm), val),
                (Z.sbracket(N.phi_up_bar(um), N.phi_low(n)), ZERO),
                (Z.sbracket(N.phi_up(um), N.phi_low_bar(n)), ZERO),
            ]
            for lhs, v in checks:
                if lhs != Z.scalar(v):
                    badg.append((spec.names[m], spec.names[nidx]))
    rep.add("[phi^m, phi_n]_* = (-1)^{p(m)}[phi^mbar, phi_nbar]_* = (m|n), mixed pairings vanish",
            not badg, str(badg[:3]))
    # hat a = Zhu(D abar): [hat a, hat b] = (-1)^{p(a)p(b)}(hat [a,b] - (k+h^vee)([x,a]|b))
    badh = []
    for i in range(spec.dim):
        for j in range(spec.dim):
            ha = Z["D" + spec.names[i] + "b"]
            hb = Z["D" + spec.names[j] + "b"]
            br = spec.bracket(E[i], E[j])
            hat = Z.scalar(0)
            for l, c in br.items():
                hat = hat + Z["D" + spec.names[l] + "b"] * to_scalar(c)
            corr = kap * to_scalar(spec.form(spec.bracket(N.x, E[i]), E[j]))
            rhs = (hat - corr) * _sign(spec.parity[i] * spec.parity[j])
            if Z.sbracket(ha, hb) != rhs:
                badh.append((spec.names[i], spec.names[j]))
    rep.add("[hat a, hat b]_* = (-1)^{p(a)p(b)}(hat[a,b] - (k+h^vee)([x,a]|b))", not badh, str(badh[:3]))
    return rep


def expected_Q(cs: ComplexSpec) -> Dict[str, Tuple[str, ZhuElement, ZhuElement]]:
    """Both sides of the six generator formulas for Q, per generator.

    Returns {label: (formula name, Q(generator) computed, displayed right side)}.
    """
    N = _Notation(cs)
    spec, Z = N.spec, N.Z
    Q = induced_Q(cs, "raw")
    kap = N.kappa
    E = [{i: mpq(1)} for i in range(spec.dim)]
    p = spec.parity
    f = spec.osp.f
    out = {}
    for i in range(spec.dim):
        a = E[i]
        pa = p[i]
        pab = pa + 1
        rhs1 = Z.scalar(0)
        rhs2 = Z.scalar(0)
        for b in N.Ip:
            ub = cs.dual.upper[b]
            pb = p[b]
            br = spec.bracket(E[b], a)
            rhs1 = rhs1 + N.phi_up_bar(ub) * N.bar(br) * _sign(pab * pb)
            rhs1 = rhs1 + N.phi_up(ub) * (kap * to_scalar(spec.form(E[b], a)) * _sign(pb + 1))
            rhs2 = rhs2 + N.phi_up(ub) * N.bar(br) * _sign(pab * pb + 1)
            rhs2 = rhs2 + N.phi_up_bar(ub) * N.bold(br) * _sign(pa * pb)
        out[f"Q({spec.names[i]}b)"] = ("Q(abar)", Q(N.bar(a)), rhs1)
        out[f"Q({spec.names[i]})"] = ("Q(a)", Q(N.bold(a)), rhs2)
    for al in N.Ip:
        ua = cs.dual.upper[al]
        pa = p[al]
        pab = pa + 1
        r3 = Z.scalar(0)
        r4 = Z.scalar(0)
        r5 = N.bar(E[al]) * _sign(pab) - to_scalar(spec.form(f, E[al]))
        r6 = N.bold(E[al]) * _sign(pa)
        for b in N.Ip:
            ub = cs.dual.upper[b]
            pb = p[b]
            m = spec.bracket(E[b], ua)
            r3 = r3 + N.phi_up_bar(ub) * N.phi_up_bar(m) * (_sign(pab * pb) * mpq(1, 2))
            r4 = r4 + N.phi_up(ub) * N.phi_up_bar(m) * (_sign(pab * pb + 1) * mpq(1, 2))
            r4 = r4 + N.phi_up_bar(ub) * N.phi_up(m) * (_sign(pa * pb) * mpq(1, 2))
            n = spec.bracket(E[b], E[al])
            r5 = r5 + N.phi_up_bar(ub) * N.phi_low(n) * _sign(pab * pb)
            r6 = r6 + N.phi_up(ub) * N.phi_low(n) * _sign(pab * pb + 1)
            r6 = r6 + N.phi_up_bar(ub) * N.phi_low_bar(n) * _sign(pa * pb)
        nm = spec.names[al]
        out[f"Q(phi^{nm}bar)"] = ("Q(phi^{ubar^alpha})", Q(N.phi_up_bar(ua)), r3)
        out[f"Q(phi^{nm})"] = ("Q(phi^{u^alpha})", Q(N.phi_up(ua)), r4)
        out[f"Q(phi_{nm})"] = ("Q(phi_{u_alpha})", Q(N.phi_low(E[al])), r5)
        out[f"Q(phi_{nm}bar)"] = ("Q(phi_{ubar_alpha})", Q(N.phi_low_bar(E[al])), r6)
    return out


def check_Q_formulas(cs: ComplexSpec) -> Report:
    rep = Report(f"Q on Zhu_H C: {cs.algebra.name}")
    res = expected_Q(cs)
    groups: Dict[str, List[str]] = {}
    for label, (formula, lhs, rhs) in res.items():
        groups.setdefault(formula, [])
        if lhs != rhs:
            groups[formula].append(f"{label}: {lhs - rhs}")
    for formula, bad in groups.items():
        rep.add(f"{formula} formula on all generators", not bad, "; ".join(bad[:2]))
    return rep


def check_Q_squared(cs: ComplexSpec, which: str = "raw") -> Report:
    Z = zhu_of(cs, which)
    Q = induced_Q(cs, which)
    bad = []
    for gi, g in enumerate(Z.alg.gens):
        r = Q(Q(ZhuElement(Z, {(gi,): ONE})))
        if r:
            bad.append(f"{g.name}: {r}")
    rep = Report(f"Q^2 = 0 on Zhu_H ({which}): {cs.algebra.name}")
    rep.add("Q(Q(g)) = 0 for every generator g", not bad, "; ".join(bad[:2]))
    # and on all words of length 2
    bad2 = []
    n = Z.n
    for a in range(n):
        for b in range(a, n):
            w = Z.mul(ZhuElement(Z, {(a,): ONE}), ZhuElement(Z, {(b,): ONE}))
            if Q(Q(w)):
                bad2.append((Z.alg.gens[a].name, Z.alg.gens[b].name))
    rep.add("Q(Q(w)) = 0 for all products of two generators", not bad2, str(bad2[:3]))
    return rep


# ---------------------------------------------------------------------------
# Good almost linear differentials
# ---------------------------------------------------------------------------

Bideg = Tuple[Fraction, Fraction]


def affine_profile(cs: ComplexSpec) -> Dict[str, Bideg]:
    """gr(J_{ubar_alpha}) = (j, -j), gr(phi^alpha) = (-j + 1/2, j + 1/2), gr(D) = 0."""
    spec, g = cs.algebra, cs.grading
    out = {}
    for gen in cs.blocks.gens:
        nm = gen.name
        base = nm[1:] if nm.startswith("D") else nm
        if base.startswith("J["):
            j = g.weight[spec.index[base[2:-2]]]
            out[nm] = (j, -j)
        elif base.startswith("phi^"):
            j = g.weight[spec.index[base[4:]]]
            out[nm] = (-j + Fraction(1, 2), j + Fraction(1, 2))
        else:
            raise BRSTError(f"no bidegree for {nm}")
    return out


def finite_profile(cs: ComplexSpec) -> Dict[str, Bideg]:
    """Same table read on the Zhu generators J_abar, J_a, phi^{ubar}, phi^{u}."""
    return affine_profile(cs)


def _bideg(prof: Mapping[int, Bideg], word) -> Bideg:
    p = sum((prof[g][0] for g in word), Fraction(0))
    q = sum((prof[g][1] for g in word), Fraction(0))
    return (p, q)


def check_good_almost_linear(letters: Sequence[Tuple[object, Bideg, object]],
                             image: Callable[[object], Mapping[tuple, object]],
                             letter_of: Callable[[tuple], Optional[object]],
                             bideg_of: Callable[[tuple], Bideg],
                             title: str) -> Tuple[Report, List[dict]]:
    """Generic check on a graded generator space.

    ``letters``: (key, bidegree, weight) for each basis vector of the generator space;
    ``image(key)``: the differential of that letter as {term: coeff};
    ``letter_of(term)``: the key if ``term`` is a single basis letter, else None;
    ``bideg_of(term)``: bidegree of a term.
    """
    rep = Report(title)
    keys = [k for k, _, _ in letters]
    info = {k: (bd, w) for k, bd, w in letters}
    viol = []
    nonlin = []
    gr: Dict[object, dict] = {}
    for k in keys:
        (p, q), w = info[k]
        lin = {}
        for term, c in image(k).items():
            pp, qq = bideg_of(term)
            if pp < p or pp + qq != p + q + 1:
                viol.append((k, term))
                continue
            if pp == p:
                lk = letter_of(term)
                if lk is None:
                    nonlin.append((k, term))
                else:
                    lin[lk] = c
        gr[k] = lin
    rep.add("d preserves the filtration and raises p+q by one", not viol, str(viol[:2]))
    rep.add("graded part is linear, mapping g^{pq} to g^{p,q+1}", not nonlin, str(nonlin[:2]))
    # exactness off p + q = 0, per (p, weight)
    blocks: Dict[tuple, List[object]] = {}
    for k in keys:
        (p, q), w = info[k]
        blocks.setdefault((p, q, w), []).append(k)
    bad = []
    coh: List[dict] = []
    for (p, q, w), ks in sorted(blocks.items(), key=lambda t: (t[0][2], t[0][0], t[0][1])):
        ker = linalg.nullspace({k: gr[k] for k in ks}, ks)
        src = blocks.get((p, q - 1, w), [])
        rows = [gr[k] for k in src if gr[k]]
        rk = linalg.rank(rows, ks) if rows else 0
        if p + q == 0:
            coh.extend(ker[i] for i in range(len(ker)))
        elif len(ker) != rk:
            bad.append(f"(p,q)=({p},{q}) weight {w}: ker {len(ker)} vs im {rk}")
    rep.add("Ker d^gr = Im d^gr off p + q = 0", not bad, "; ".join(bad[:3]))
    return rep, coh


def _affine_letters(cs: ComplexSpec, max_weight) -> List[Tuple[int, Bideg, Fraction]]:
    B = cs.blocks
    prof = affine_profile(cs)
    out = []
    for gi, g in enumerate(B.gens):
        n = 0
        while g.weight + n <= max_weight:
            out.append(((gi << SHIFT) | n, prof[g.name], g.weight + n))
            n += 1
    return out


def good_almost_linear_affine(cs: ComplexSpec, max_weight=3, zero: bool = False) -> Tuple[Report, List[str]]:
    """Hypotheses for the reduced SUSY complex with the affine bigrading."""
    from .brst import blocks_d0
    B = cs.blocks
    prof = affine_profile(cs)
    gprof = {gi: prof[g.name] for gi, g in enumerate(B.gens)}
    letters = _affine_letters(cs, Fraction(max_weight))

    def image(x):
        return {} if zero else blocks_d0(cs, {(x,): ONE})

    def letter_of(m):
        return m[0] if len(m) == 1 else None

    def bideg_of(m):
        return _bideg(gprof, [x >> SHIFT for x in m])

    rep, coh = check_good_almost_linear(letters, image, letter_of, bideg_of,
                                        f"good almost linear (affine bigrading{', zero d' if zero else ''}): {cs.algebra.name}")
    names = []
    for v in coh:
        names.append(" + ".join(f"{c}*{B.fmt_mono((x,))}" for x, c in sorted(v.items())))
    return rep, names


def good_almost_linear_finite(cs: ComplexSpec, zero: bool = False) -> Tuple[Report, List[str]]:
    """Hypotheses for Q on U(r_-) with the finite bigrading."""
    Z = zhu_of(cs, "blocks")
    prof = finite_profile(cs)
    gprof = {gi: prof[g.name] for gi, g in enumerate(Z.alg.gens)}
    Q = induced_Q(cs, "blocks")
    letters = [(gi, gprof[gi], Z.wt[gi]) for gi in range(Z.n)]

    def image(gi):
        return {} if zero else Q(ZhuElement(Z, {(gi,): ONE})).terms

    def letter_of(w):
        return w[0] if len(w) == 1 else None

    def bideg_of(w):
        return _bideg(gprof, list(w))

    rep, coh = check_good_almost_linear(letters, image, letter_of, bideg_of,
                                        f"good almost linear (finite bigrading{', zero Q' if zero else ''}): {cs.algebra.name}")
    names = [" + ".join(f"{c}*{Z.alg.gens[g].name}" for g, c in sorted(v.items())) for v in coh]
    return rep, names


# ---------------------------------------------------------------------------
# r_+ and r_-
# ---------------------------------------------------------------------------

def wfin_closure(cs: ComplexSpec) -> Report:
    """Q preserves U(r_-) and U(r_+); the displayed Q(J) formulas; H(U(r_+), Q) = C."""
    spec = cs.algebra
    rep = Report(f"r_+ / r_- closure: {spec.name}")
    Zr = zhu_of(cs, "raw")
    Zb = zhu_of(cs, "blocks")
    Qr = induced_Q(cs, "raw")
    Qb = induced_Q(cs, "blocks")
    N = _Notation(cs)
    B = cs.blocks
    # homomorphism U(r_-) -> Zhu_H C through sigma
    imgs = {gi: Zr.project(sigma(cs, ((gi << SHIFT),))) for gi in range(Zb.n)}
    iota = Zb.homomorphism(imgs, Zr)
    bad = []
    for gi, g in enumerate(B.gens):
        lhs = Qr(imgs[gi])
        rhs = iota(Qb(ZhuElement(Zb, {(gi,): ONE})))
        if lhs != rhs:
            bad.append(g.name)
    rep.add("Q(U(r_-)) in U(r_-): Q of each r_- generator lies in the image of U(r_-)",
            not bad, ", ".join(bad))
    # displayed formulas for Q(J_abar) and Q(J_a), a in g_{<=0}
    g = cs.grading
    kap = N.kappa
    p = spec.parity
    f = spec.osp.f
    E = [{i: mpq(1)} for i in range(spec.dim)]
    le0 = [i for i in range(spec.dim) if g.weight[i] <= 0]

    def Jbar(y):
        out = Zb.scalar(0)
        for i, c in y.items():
            if g.weight[i] <= 0:
                out = out + Zb[f"J[{spec.names[i]}b]"] * to_scalar(c)
        return out

    def Jbold(y):
        out = Zb.scalar(0)
        for i, c in y.items():
            if g.weight[i] <= 0:
                out = out + Zb[f"DJ[{spec.names[i]}b]"] * to_scalar(c)
        return out

    def pub(m):
        out = Zb.scalar(0)
        for gam in g.n_plus:
            c = spec.form(m, {gam: 1})
            if c:
                out = out + Zb[f"phi^{spec.names[gam]}"] * to_scalar(c)
        return out

    def pu(m):
        out = Zb.scalar(0)
        for gam in g.n_plus:
            c = spec.form(m, {gam: 1})
            if c:
                out = out + Zb[f"Dphi^{spec.names[gam]}"] * to_scalar(c)
        return out

    from .vertex import nprod
    B = cs.blocks

    def zprod(X: VertexPoly, Y: VertexPoly) -> ZhuElement:
        """Zhu image of :X Y: minus Zhu(X) Zhu(Y), the normal-ordering correction."""
        return Zb.project(nprod(X, Y)) - Zb.project(X) * Zb.project(Y)

    def vJ(y):
        out = B.vacuum(0)
        for l, c in y.items():
            if g.weight[l] <= 0:
                out = out + B[f"J[{spec.names[l]}b]"] * to_scalar(c)
        return out

    badJ, badDJ, literal = [], [], []
    for i in le0:
        a = E[i]
        pab = p[i] + 1
        r1 = Zb.scalar(0)
        r2 = Zb.scalar(0)
        corr = Zb.scalar(0)
        for b in g.n_plus:
            ub = cs.dual.upper[b]
            pb = p[b]
            y = spec.bracket(E[b], a)
            fy = to_scalar(spec.form(f, y))
            r1 = r1 + pub(ub) * (Jbar(y) + fy) * _sign(pab * pb)
            r1 = r1 + pu(ub) * (kap * to_scalar(spec.form(E[b], a)) * _sign(pb + 1))
            xb = spec.bracket(N.x, E[b])
            r2 = r2 + (pub(ub) * Jbold(y) - pub(ub) * (kap * to_scalar(spec.form(xb, a)))) * _sign(p[i] * pb)
            r2 = r2 + pu(ub) * (Jbar(y) + fy) * _sign(pab * pb + 1)
            nm = spec.names[b]
            corr = corr + zprod(B[f"phi^{nm}"], vJ(y).D()) * _sign(p[i] * pb)
            corr = corr + zprod(B[f"Dphi^{nm}"], vJ(y)) * _sign(pab * pb + 1)
        if Qb(Jbar(a)) != r1:
            badJ.append(f"{spec.names[i]}: {Qb(Jbar(a)) - r1}")
        if Qb(Jbold(a)) != r2 + corr:
            badDJ.append(f"{spec.names[i]}: {Qb(Jbold(a)) - r2 - corr}")
        if Qb(Jbold(a)) != r2:
            literal.append(f"{spec.names[i]}: {Qb(Jbold(a)) - r2}")
    rep.add("Q(J_abar) display for a in g_{<=0}", not badJ, "; ".join(badJ[:2]))
    rep.add("Q(J_a) display for a in g_{<=0}, products taken as Zhu images of normally ordered products",
            not badDJ, "; ".join(badDJ[:2]))
    rep.notes.append("Q(J_a) with plain products in U(r_-): "
                     + ("exact" if not literal else "differs by " + "; ".join(literal)))
    # r_+ : Q(phi_{u_alpha}) = (-1)^{p(alphabar)} J_{ubar_alpha} - (f|u_alpha), Q(phi_{ubar}) = (-1)^{p(alpha)} J_{u_alpha}
    badp = []
    rplus: Dict[str, ZhuElement] = {}
    for al in g.n_plus:
        nm = spec.names[al]
        Jb = building_block(cs, al)
        zJb = Zr.project(Jb)
        zJ = Zr.project(Jb.D())
        rplus[f"J[{nm}b]"] = zJb
        rplus[f"DJ[{nm}b]"] = zJ
        ph = Zr[f"ph_{nm}"]
        dph = Zr[f"Dph_{nm}"]
        rplus[f"ph_{nm}"] = ph
        rplus[f"Dph_{nm}"] = dph
        e1 = zJb * _sign(p[al] + 1) - to_scalar(spec.form(f, E[al]))
        e2 = zJ * _sign(p[al])
        if Qr(ph) != e1:
            badp.append(f"phi_{nm}")
        if Qr(dph) != e2:
            badp.append(f"phi_{nm}bar")
    rep.add("Q(phi_{u_alpha}) = (-1)^{p(alphabar)} J_{ubar_alpha} - (f|u_alpha) and "
            "Q(phi_{ubar_alpha}) = (-1)^{p(alpha)} J_{u_alpha}", not badp, ", ".join(badp))
    # H(U(r_+), Q) = C at PBW degree <= 2
    dim_h = _rplus_cohomology(Zr, Qr, list(rplus.values()))
    rep.add("H(U(r_+), Q) = C in PBW degree <= 2", dim_h == 1, f"dimension {dim_h}")
    # Zhu images of cohomology generators are Q-closed
    badz = []
    for w in (Fraction(1), Fraction(3, 2), Fraction(2)):
        for v in cohomology_generators(cs, w) if _has_weight(cs, w) else []:
            if Qb(Zb.project(v)):
                badz.append(str(w))
    rep.add("Zhu images of low-weight cohomology generators are Q-closed", not badz, ", ".join(badz))
    return rep


def _has_weight(cs: ComplexSpec, w) -> bool:
    try:
        return bool(cohomology_generators(cs, w))
    except Exception:
        return False


def _rplus_cohomology(Z: ZhuAlgebra, Q, gens: List[ZhuElement]) -> int:
    """dim ker Q / im Q on span{1, g_i, g_i g_j}."""
    elems = [Z.one()] + list(gens)
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            elems.append(gens[i] * gens[j])
            if i != j:
                elems.append(gens[j] * gens[i])
    # basis of the span
    order = sorted({w for e in elems for w in e.terms}, key=lambda w: (len(w), w))
    red, piv = linalg.rref([dict(e.terms) for e in elems if e], order)
    basis = red
    n = len(basis)
    images = {i: Q(ZhuElement(Z, basis[i])).terms for i in range(n)}
    # express images in the span (they must lie there)
    cols = {}
    for i, img in images.items():
        cols[i] = img
    ker = linalg.nullspace(cols, list(range(n)))
    rows = [v for v in images.values() if v]
    allw = sorted({w for v in rows for w in v} | set(order), key=lambda w: (len(w), w))
    rk = linalg.rank(rows, allw) if rows else 0
    return len(ker) - rk


def zhu_report(spec: AlgebraSpec) -> List[Report]:
    cs = build_complex(spec, "susy")
    reps = [check_bracket_table(cs), check_Q_formulas(cs), check_Q_squared(cs, "raw"),
            check_Q_squared(cs, "blocks"), wfin_closure(cs)]
    for fn in (good_almost_linear_affine, good_almost_linear_finite):
        r, coh = fn(cs)
        r.notes.append("charge-zero graded cohomology: " + ", ".join(coh))
        ctrl, _ = fn(cs, zero=True)
        r.add("negative control: the zero differential is rejected", not ctrl.ok)
        reps.append(r)
    return reps
