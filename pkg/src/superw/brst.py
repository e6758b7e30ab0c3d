"""BRST complexes for principal W-algebras, ordinary and supersymmetric.

Two layers are kept apart:

* the *raw* complex, freely generated by affine currents, Weyl fermions
  (ordinary case only) and charged ghosts, with the differential element d;
* the *building-block* algebra ``blocks``, freely generated by the letters
  J_a (a in g_{<=0}), Phi_b (b in g_{1/2}, ordinary case) and the ghosts
  phi^alpha, together with the embedding ``sigma`` into the raw complex.

The bracket table of ``blocks`` and the action of d_0 on its letters are
obtained by computing in the raw complex and solving back through sigma.
After that all weight-graded work (cohomology, Miura images) happens in the
much smaller building-block algebra, with d_0 applied as an odd derivation.

Raw generator names
    ordinary:  basis names of g, ``Phi[b]``, ``ph_X`` (phi_alpha), ``ph^X`` (phi^alpha)
    SUSY:      ``Xb``/``DXb`` (affine), ``ph^X``/``Dph^X``, ``ph_X``/``Dph_X``
Building-block names
    ordinary:  ``J[a]``, ``Phi[b]``, ``phi^X``
    SUSY:      ``J[ab]``/``DJ[ab]``, ``phi^X``/``Dphi^X``
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import linalg
from .liealg import (AlgebraError, AlgebraSpec, DualData, GradingData, Report, dual_bases,
                     grade_decompose, _killing)
from .scalar import K, ONE, ZERO, LevelScalar, RootSession, to_scalar
from .susy import add_susy_pair, affine_susy, set_Lambda
from .vertex import (SHIFT, NMASK, LambdaPoly, VertexAlgebra, VertexError, VertexPoly,
                     enumerate_monomials, lambda_bracket, nprod, _acc)

__all__ = [
    "ComplexSpec", "build_complex", "differential_element", "apply_d0", "check_d_squared",
    "building_block", "check_closure", "nu_form", "blocks_d0", "cohomology_generators",
    "cohomology_dimensions", "miura", "miura_target", "tau_translate", "tau_inverse",
    "central_charge", "central_charge_identity", "BRSTError",
]


class BRSTError(ValueError):
    pass


FLAVORS = ("nonsusy", "susy")


def _sign(n: int) -> int:
    return -1 if n % 2 else 1


@dataclass
class ComplexSpec:
    """A built complex.  ``raw`` is the full complex, ``blocks`` the reduced one."""
    flavor: str
    algebra: AlgebraSpec
    grading: GradingData
    dual: DualData
    level: LevelScalar
    raw: VertexAlgebra
    d: VertexPoly
    d0_gen: VertexPoly              # d (ordinary) or Dd (SUSY): d_0 X = [d0_gen_lambda X]|_{lambda=0}
    blocks: Optional[VertexAlgebra] = None
    sigma_gen: Dict[str, VertexPoly] = field(default_factory=dict)
    _sigma: Dict[tuple, VertexPoly] = field(default_factory=dict)
    _d0_letter: Dict[int, dict] = field(default_factory=dict)
    _d0_mono: Dict[tuple, dict] = field(default_factory=dict)

    @property
    def reduced(self) -> bool:
        return self.blocks is not None

    @property
    def h_vee(self):
        return self.algebra.dual_coxeter


# ---------------------------------------------------------------------------
# Raw complexes
# ---------------------------------------------------------------------------

def _jweight(g: GradingData, i: int) -> Fraction:
    return g.weight[i]


def _ghost_pairing(spec: AlgebraSpec, a: int, ub) -> object:
    """[phi_alpha lambda phi^beta] = (u^beta | u_alpha) = delta."""
    return spec.form(ub, {a: 1})


def _raw_nonsusy(spec: AlgebraSpec, g: GradingData, dual: DualData, level) -> VertexAlgebra:
    alg = VertexAlgebra(f"C({spec.name},F)")
    F = spec.osp.F
    for i, nm in enumerate(spec.names):
        alg.add_generator(nm, spec.parity[i], 1 - g.weight[i])
    for b in g.g_half:
        alg.add_generator(f"Phi[{spec.names[b]}]", spec.parity[b], Fraction(1, 2))
    for a in g.n_plus:
        alg.add_generator(f"ph_{spec.names[a]}", spec.parity[a] + 1, 1 - g.weight[a], -1)
    for a in g.n_plus:
        alg.add_generator(f"ph^{spec.names[a]}", spec.parity[a] + 1, g.weight[a], 1)
    n = spec.dim
    for i in range(n):
        for j in range(i, n):
            val = {}
            br = spec.bracket({i: 1}, {j: 1})
            if br:
                val[0] = sum((alg.gen(spec.names[l]) * to_scalar(c) for l, c in br.items()),
                             alg.vacuum(0))
            fm = spec.form({i: 1}, {j: 1})
            if fm:
                val[1] = level * fm
            if val:
                alg.set_bracket(spec.names[i], spec.names[j], val)
    for a in g.g_half:
        for b in g.g_half:
            if b < a:
                continue
            c = spec.form(F, spec.bracket({a: 1}, {b: 1}))
            if c:
                alg.set_bracket(f"Phi[{spec.names[a]}]", f"Phi[{spec.names[b]}]", {0: c})
    for a in g.n_plus:
        for b in g.n_plus:
            c = _ghost_pairing(spec, a, dual.upper[b])
            if c:
                alg.set_bracket(f"ph_{spec.names[a]}", f"ph^{spec.names[b]}", {0: c})
    return alg


def _raw_susy(spec: AlgebraSpec, g: GradingData, dual: DualData, level) -> VertexAlgebra:
    weights = {i: Fraction(1, 2) - g.weight[i] for i in range(spec.dim)}
    alg = affine_susy(spec, level=level, weights=weights)
    alg.name = f"C({spec.name}bar,f)"
    for a in g.n_plus:
        nm = spec.names[a]
        add_susy_pair(alg, f"ph^{nm}", f"Dph^{nm}", spec.parity[a] + 1, g.weight[a], 1)
    for a in g.n_plus:
        nm = spec.names[a]
        add_susy_pair(alg, f"ph_{nm}", f"Dph_{nm}", spec.parity[a],
                      Fraction(1, 2) - g.weight[a], -1)
    for a in g.n_plus:
        for b in g.n_plus:
            c = spec.form(dual.upper[a], {b: 1})
            if c:
                set_Lambda(alg, f"ph^{spec.names[a]}", f"ph_{spec.names[b]}", {0: c}, {})
    return alg


def _structure(spec: AlgebraSpec, a: int, b: int, gamma: int):
    return spec.bracket({a: 1}, {b: 1}).get(gamma, 0)


def differential_element(cs: ComplexSpec) -> VertexPoly:
    """The element d whose zero mode is the BRST differential."""
    return cs.d


def _build_d(flavor: str, spec: AlgebraSpec, g: GradingData, alg: VertexAlgebra) -> VertexPoly:
    names = spec.names
    Ip = g.n_plus
    d = alg.vacuum(0)
    if flavor == "nonsusy":
        F = spec.osp.F
        for a in Ip:
            d = d + nprod(alg[names[a]], alg[f"ph^{names[a]}"]) * _sign(spec.parity[a])
        for a in Ip:
            for b in Ip:
                for c in Ip:
                    s = _structure(spec, a, b, c)
                    if s:
                        coef = mpq(-1, 2) * s * _sign(spec.parity[a] * spec.parity[c])
                        d = d + nprod(alg[f"ph_{names[c]}"], alg[f"ph^{names[a]}"],
                                      alg[f"ph^{names[b]}"]) * to_scalar(coef)
        for a in g.g_half:
            d = d + nprod(alg[f"Phi[{names[a]}]"], alg[f"ph^{names[a]}"])
        for a in Ip:
            c = spec.form(F, {a: 1})
            if c:
                d = d + alg[f"ph^{names[a]}"] * to_scalar(c)
        return d
    f = spec.osp.f
    for a in Ip:
        d = d + nprod(alg[names[a] + "b"], alg[f"ph^{names[a]}"])
    for a in Ip:
        for b in Ip:
            br = spec.bracket({a: 1}, {b: 1})
            if not br:
                continue
            sgn = _sign(spec.parity[a] * (spec.parity[b] + 1))
            for c, s in br.items():
                if c not in Ip:
                    raise AlgebraError("n_+ is not a subalgebra")
                coef = mpq(1, 2) * s * sgn
                d = d + nprod(alg[f"ph_{names[c]}"], alg[f"ph^{names[b]}"],
                              alg[f"ph^{names[a]}"]) * to_scalar(coef)
    for a in Ip:
        c = spec.form(f, {a: 1})
        if c:
            d = d - alg[f"ph^{names[a]}"] * to_scalar(c)
    return d


def _raw_block(flavor: str, spec: AlgebraSpec, g: GradingData, dual: DualData,
               alg: VertexAlgebra, a: int) -> VertexPoly:
    names = spec.names
    Ip = g.n_plus
    if flavor == "nonsusy":
        J = alg[names[a]]
        for b in Ip:
            br = spec.bracket({a: 1}, {b: 1})
            for c in Ip:
                s = br.get(c, 0)
                if s:
                    J = J + nprod(alg[f"ph_{names[c]}"], alg[f"ph^{names[b]}"]) * \
                        to_scalar(s * _sign(spec.parity[c]))
        return J
    J = alg[names[a] + "b"]
    for b in Ip:
        br = spec.bracket({b: 1}, {a: 1})
        if not br:
            continue
        for c in Ip:
            s = spec.form(dual.upper[c], br)
            if s:
                sgn = _sign((spec.parity[a] + 1) * (spec.parity[b] + 1))
                J = J + nprod(alg[f"ph^{names[b]}"], alg[f"ph_{names[c]}"]) * to_scalar(s * sgn)
    return J


_CACHE: Dict[tuple, ComplexSpec] = {}


def build_complex(spec: AlgebraSpec, flavor: str = "susy", level=None,
                  reduced: bool = True) -> ComplexSpec:
    """Build the raw complex, d, and (if ``reduced``) the building-block algebra.

    ``level`` defaults to the formal level k; a rational value gives the
    specialized complex used for sampled-k cross checks.
    """
    if flavor not in FLAVORS:
        raise BRSTError(f"flavor must be one of {FLAVORS}")
    if spec.osp is None:
        raise BRSTError("the algebra carries no osp(1|2) data")
    lvl = K if level is None else to_scalar(level)
    key = (id(spec), flavor, str(lvl), reduced)
    if key in _CACHE:
        return _CACHE[key]
    g = grade_decompose(spec)
    dual = dual_bases(spec)
    if flavor == "nonsusy":
        raw = _raw_nonsusy(spec, g, dual, lvl)
        d = _build_d(flavor, spec, g, raw)
        d0g = d
    else:
        raw = _raw_susy(spec, g, dual, lvl + spec.dual_coxeter)
        d = _build_d(flavor, spec, g, raw)
        d0g = d.D()
    cs = ComplexSpec(flavor, spec, g, dual, lvl, raw, d, d0g)
    if reduced:
        _build_blocks(cs)
    _CACHE[key] = cs
    return cs


# ---------------------------------------------------------------------------
# d_0 on the raw complex
# ---------------------------------------------------------------------------

def apply_d0(cs: ComplexSpec, X: VertexPoly) -> VertexPoly:
    """d_(0) X (ordinary) or d_(0|0) X (SUSY), computed in the raw complex."""
    if X.alg is cs.raw:
        L = cs.raw.bracket_poly(cs.d0_gen.terms, X.terms)
        return VertexPoly._wrap(cs.raw, dict(L.get(0, {})))
    if cs.blocks is not None and X.alg is cs.blocks:
        return VertexPoly._wrap(cs.blocks, blocks_d0(cs, X.terms))
    raise BRSTError("element does not belong to this complex")


def check_d_squared(cs: ComplexSpec, sample_k: Sequence = (1, 2, 5)) -> Report:
    """d_0(d_0(g)) = 0 on every raw generator, symbolically and at sampled k."""
    rep = Report(f"d^2 = 0 ({cs.flavor}, {cs.algebra.name})")
    bad = []
    for gname in [x.name for x in cs.raw.gens]:
        r = apply_d0(cs, apply_d0(cs, cs.raw[gname]))
        if r:
            bad.append(f"{gname}: {r}")
    rep.add("symbolic in k, all generators", not bad, "; ".join(bad[:3]))
    if cs.level == K:
        for k0 in sample_k:
            cs0 = build_complex(cs.algebra, cs.flavor, level=k0, reduced=False)
            bad = []
            for gname in [x.name for x in cs0.raw.gens]:
                r = apply_d0(cs0, apply_d0(cs0, cs0.raw[gname]))
                if r:
                    bad.append(gname)
            rep.add(f"specialized complex at k = {k0}", not bad, ", ".join(bad[:3]))
    return rep


# ---------------------------------------------------------------------------
# Building blocks
# ---------------------------------------------------------------------------

def building_block(cs: ComplexSpec, a) -> VertexPoly:
    """J_a (ordinary) or J_abar (SUSY) for a basis name/index or element of g."""
    spec = cs.algebra
    if isinstance(a, (str, int)):
        a = spec.basis_elt(a)
    out = cs.raw.vacuum(0)
    for i, c in a.items():
        out = out + _raw_block(cs.flavor, spec, cs.grading, cs.dual, cs.raw, i) * to_scalar(c)
    return out


def _kappa_sub(spec: AlgebraSpec, idx: Sequence[int], a, b):
    """Supertrace over span(idx) of ad a ad b, projected onto that span."""
    acc = mpq(0)
    for i in idx:
        v = spec.bracket(a, spec.bracket(b, {i: 1}))
        c = v.get(i, 0)
        if c:
            acc += c if spec.parity[i] == 0 else -c
    return acc


def nu_form(cs: ComplexSpec, a, b) -> LevelScalar:
    """nu_k(a|b) = k(a|b) + kappa_g(a|b)/2 - kappa_{g_0}(a|b)/2."""
    spec = cs.algebra
    fm = spec.form(a, b)
    kg = _killing(spec, a, b)
    pa = {i: c for i, c in a.items() if i in cs.grading.g0}
    pb = {i: c for i, c in b.items() if i in cs.grading.g0}
    k0 = _kappa_sub(spec, cs.grading.g0, pa, pb)
    return cs.level * fm + to_scalar(mpq(kg) / 2 - mpq(k0) / 2)


def check_closure(cs: ComplexSpec) -> Report:
    """Building-block brackets against their closed forms, for a, b in g_{<=0}."""
    spec = cs.algebra
    rep = Report(f"building-block closure ({cs.flavor}, {spec.name})")
    le0 = [i for i in range(spec.dim) if cs.grading.weight[i] <= 0]
    bad = []
    for i in le0:
        for j in le0:
            Ja, Jb = building_block(cs, i), building_block(cs, j)
            br = spec.bracket({i: 1}, {j: 1})
            if cs.flavor == "nonsusy":
                got = lambda_bracket(Ja, Jb)
                exp = {0: building_block(cs, br)}
                nu = nu_form(cs, {i: 1}, {j: 1})
                if nu:
                    exp[1] = nu
                ok = got == LambdaPoly.from_poly(cs.raw, exp)
            else:
                sgn = _sign(spec.parity[i] * (spec.parity[j] + 1))
                part1 = lambda_bracket(Ja, Jb)
                part0 = lambda_bracket(Ja.D(), Jb)
                c = (cs.level + spec.dual_coxeter) * spec.form({i: 1}, {j: 1})
                ok = (part1 == LambdaPoly.from_poly(cs.raw, {0: c} if c else {})
                      and part0 == LambdaPoly.from_poly(
                          cs.raw, {0: building_block(cs, br) * sgn}))
            if not ok:
                bad.append(f"({spec.names[i]},{spec.names[j]})")
    label = ("[J_a lambda J_b] = J_[a,b] + nu_k(a|b) lambda" if cs.flavor == "nonsusy"
             else "[J_a Lambda J_b] = sign J_[a,b] + chi (a|b)(k+h^vee)")
    rep.add(label, not bad, ", ".join(bad[:4]))
    return rep


# ---------------------------------------------------------------------------
# The building-block algebra
# ---------------------------------------------------------------------------

def _build_blocks(cs: ComplexSpec) -> None:
    spec, g = cs.algebra, cs.grading
    B = VertexAlgebra(f"Ctilde({spec.name},{cs.flavor})")
    sig: Dict[str, VertexPoly] = {}
    le0 = [i for i in range(spec.dim) if g.weight[i] <= 0]
    if cs.flavor == "nonsusy":
        for i in le0:
            nm = f"J[{spec.names[i]}]"
            B.add_generator(nm, spec.parity[i], 1 - g.weight[i])
            sig[nm] = building_block(cs, i)
        for b in g.g_half:
            nm = f"Phi[{spec.names[b]}]"
            B.add_generator(nm, spec.parity[b], Fraction(1, 2))
            sig[nm] = cs.raw[nm]
        for a in g.n_plus:
            nm = f"phi^{spec.names[a]}"
            B.add_generator(nm, spec.parity[a] + 1, g.weight[a], 1)
            sig[nm] = cs.raw[f"ph^{spec.names[a]}"]
    else:
        for i in le0:
            nm = f"J[{spec.names[i]}b]"
            add_susy_pair(B, nm, "D" + nm, spec.parity[i] + 1, Fraction(1, 2) - g.weight[i])
            J = building_block(cs, i)
            sig[nm] = J
            sig["D" + nm] = J.D()
        for a in g.n_plus:
            nm = f"phi^{spec.names[a]}"
            add_susy_pair(B, nm, "D" + nm, spec.parity[a] + 1, g.weight[a], 1)
            sig[nm] = cs.raw[f"ph^{spec.names[a]}"]
            sig["D" + nm] = cs.raw[f"Dph^{spec.names[a]}"]
    cs.blocks = B
    cs.sigma_gen = sig
    names = [x.name for x in B.gens]
    # bracket table through sigma
    for i, x in enumerate(names):
        for y in names[i:]:
            L = lambda_bracket(sig[x], sig[y])
            val = {}
            for n, P in L.coeffs.items():
                val[n] = pullback(cs, VertexPoly._wrap(cs.raw, P))
            if val:
                B.set_bracket(x, y, val)


def sigma(cs: ComplexSpec, m: tuple) -> VertexPoly:
    """Image in the raw complex of a building-block monomial."""
    r = cs._sigma.get(m)
    if r is not None:
        return r
    B = cs.blocks
    if not m:
        r = cs.raw.vacuum(1)
    else:
        facs = []
        for x in m:
            gname = B.gens[x >> SHIFT].name
            facs.append(cs.sigma_gen[gname].d(x & NMASK) if x & NMASK else cs.sigma_gen[gname])
        r = nprod(*facs)
    cs._sigma[m] = r
    return r


def sigma_poly(cs: ComplexSpec, X: VertexPoly) -> VertexPoly:
    out = cs.raw.vacuum(0)
    for m, c in X.terms.items():
        out = out + sigma(cs, m) * c
    return out


def pullback(cs: ComplexSpec, P: VertexPoly) -> VertexPoly:
    """Express a raw element lying in the image of sigma in building-block letters."""
    B = cs.blocks
    if not P:
        return B.vacuum(0)
    raw = cs.raw
    ws = {raw.mweight(m) for m in P.terms}
    chs = {raw.mcharge(m) for m in P.terms}
    if len(ws) != 1 or len(chs) != 1:
        raise BRSTError("pullback needs a weight- and charge-homogeneous element")
    w, ch = ws.pop(), chs.pop()
    if w <= 0:
        if set(P.terms) == {()}:
            return B.vacuum(P.terms[()])
        raise BRSTError("nonconstant element of weight <= 0 outside the subcomplex")
    cands = enumerate_monomials(B, w, min_weight=w, charge=ch, exact_weight=w)
    cols = {m: sigma(cs, m).terms for m in cands}
    sol = linalg.solve(cols, cands, P.terms)
    if sol is None:
        raise BRSTError(f"element is not in the building-block subalgebra: {P}")
    return VertexPoly._wrap(B, {m: to_scalar(c) for m, c in sol.items()})


def _d0_letter(cs: ComplexSpec, x: int) -> dict:
    r = cs._d0_letter.get(x)
    if r is not None:
        return r
    B = cs.blocks
    gidx, n = x >> SHIFT, x & NMASK
    if n:
        base = _d0_letter(cs, gidx << SHIFT)
        r = B.deriv_poly(base, n)
    else:
        raw_img = apply_d0(cs, cs.sigma_gen[B.gens[gidx].name])
        r = pullback(cs, raw_img).terms
    cs._d0_letter[x] = r
    return r


def blocks_d0(cs: ComplexSpec, P: Mapping[tuple, LevelScalar]) -> dict:
    """d_0 on the building-block algebra as an odd derivation of normal products."""
    B = cs.blocks
    out: dict = {}
    for m, c in P.items():
        _acc(out, _d0_mono(cs, m), c)
    return out


def _d0_mono(cs: ComplexSpec, m: tuple) -> dict:
    r = cs._d0_mono.get(m)
    if r is not None:
        return r
    B = cs.blocks
    if not m:
        r = {}
    elif len(m) == 1:
        r = _d0_letter(cs, m[0])
    else:
        x, R = m[0], m[1:]
        # d :x R: = :(d x) R: + (-1)^{p(x)} :x (d R):
        r = dict(B.no_product_poly(_d0_letter(cs, x), {R: ONE}))
        inner = _d0_mono(cs, R)
        if inner:
            sgn = -1 if B.lparity(x) else 1
            _acc(r, B.no_product_poly({(x,): ONE}, inner), to_scalar(sgn))
    cs._d0_mono[m] = r
    return r


# ---------------------------------------------------------------------------
# Cohomology
# ---------------------------------------------------------------------------

def _lead_key(B: VertexAlgebra, m: tuple):
    """Pivot preference: short monomials, few derivatives, non-D letters,
    deep negative grade first."""
    ders = sum(x & NMASK for x in m)
    dflag = sum(1 for x in m if B.gens[x >> SHIFT].name.startswith("D"))
    return (len(m), ders, dflag, -B.mweight(m), m)


def charge_basis(cs: ComplexSpec, weight, charge: int) -> List[tuple]:
    w = Fraction(weight)
    B = cs.blocks
    monos = enumerate_monomials(B, w, min_weight=w, charge=charge, exact_weight=w)
    return sorted(monos, key=lambda m: _lead_key(B, m))


def d0_matrix(cs: ComplexSpec, weight, charge: int) -> Tuple[List[tuple], Dict[tuple, dict]]:
    dom = charge_basis(cs, weight, charge)
    return dom, {m: _d0_mono(cs, m) for m in dom}


def cohomology_generators(cs: ComplexSpec, weight) -> List[VertexPoly]:
    """Echelon basis of ker d_0 on the charge-0, weight-``weight`` subspace.

    Each vector has coefficient 1 on its pivot monomial, pivots preferring
    single letters without derivatives (the "leading term").
    """
    if cs.blocks is None:
        raise BRSTError("cohomology needs the reduced complex")
    dom, cols = d0_matrix(cs, weight, 0)
    if not dom:
        raise BRSTError(f"weight {weight} component is empty")
    ker = linalg.nullspace(cols, dom)
    if not ker:
        return []
    red, _ = linalg.rref(ker, dom)
    return [VertexPoly._wrap(cs.blocks, {m: to_scalar(c) for m, c in v.items()}) for v in red]


def _rank(cols: Dict[tuple, dict], dom: List[tuple]) -> int:
    rows = [v for v in cols.values() if v]
    if not rows:
        return 0
    targets = sorted({t for v in rows for t in v})
    return linalg.rank(rows, targets)


def cohomology_dimensions(cs: ComplexSpec, weight, charges=(-1, 0, 1)) -> Dict[int, dict]:
    """dim C^c, rank d_0 out of C^c, and dim H^c at one weight for the
    reduced complex.  Charge -1 is empty there by construction."""
    out: Dict[int, dict] = {}
    ranks: Dict[int, int] = {}

    def rank_out(c):
        if c not in ranks:
            dom, cols = d0_matrix(cs, weight, c) if c >= 0 else ([], {})
            ranks[c] = _rank(cols, dom)
        return ranks[c]

    for c in charges:
        dim = len(charge_basis(cs, weight, c)) if c >= 0 else 0
        r_out = rank_out(c)
        r_in = rank_out(c - 1) if c - 1 >= 0 else 0
        out[c] = {"dim": dim, "rank_out": r_out, "rank_in": r_in,
                  "cohomology": dim - r_out - r_in}
    return out


# ---------------------------------------------------------------------------
# Miura map and the tau identification
# ---------------------------------------------------------------------------

def miura_target(cs: ComplexSpec, session: Optional[RootSession] = None) -> VertexAlgebra:
    """The free-field algebra: J letters for g_0 (and Phi letters, ordinary case),
    with brackets copied from the building-block algebra."""
    B = cs.blocks
    keep = _target_letters(cs)
    T = VertexAlgebra(f"Miura({cs.algebra.name},{cs.flavor})", session)
    for gi in keep:
        gen = B.gens[gi]
        T.add_generator(gen.name, gen.parity, gen.weight, gen.charge)
    for gi in keep:
        if gi in B.dpartner:
            h, s = B.dpartner[gi]
            if s == 0:
                T.set_dpartner(B.gens[gi].name, B.gens[h].name)
    full = B.table()
    for gi in keep:
        for hj in keep:
            L = full.get((gi, hj))
            if L:
                T._table[(T.index[B.gens[gi].name], T.index[B.gens[hj].name])] = {
                    n: _rename(B, T, P) for n, P in L.items()}
    T._reset_caches()
    return T


def _target_letters(cs: ComplexSpec) -> List[int]:
    B, spec = cs.blocks, cs.algebra
    keep = []
    for gi, gen in enumerate(B.gens):
        if gen.charge != 0:
            continue
        nm = gen.name
        if nm.startswith("Phi["):
            keep.append(gi)
            continue
        base = nm[2:] if nm.startswith("DJ[") else nm[1:]
        base = base[1:-1]
        if cs.flavor == "susy":
            base = base[:-1]
        if cs.grading.weight[spec.index[base]] == 0:
            keep.append(gi)
    return keep


def _rename(B: VertexAlgebra, T: VertexAlgebra, P: Mapping[tuple, LevelScalar]) -> dict:
    out = {}
    for m, c in P.items():
        new = []
        for x in m:
            nm = B.gens[x >> SHIFT].name
            if nm not in T.index:
                raise BRSTError(f"bracket leaves the free-field target via {nm}")
            new.append((T.index[nm] << SHIFT) | (x & NMASK))
        out[tuple(sorted(new))] = c
    return out


def miura(cs: ComplexSpec, X: VertexPoly, target: Optional[VertexAlgebra] = None) -> VertexPoly:
    """Project every J_a with a in g_{<0} to zero (and keep g_0, Phi letters)."""
    B = cs.blocks
    if X.alg is not B:
        raise BRSTError("miura expects an element of the building-block algebra")
    T = target or miura_target(cs)
    out = {}
    for m, c in X.terms.items():
        if B.mcharge(m) != 0:
            raise BRSTError("miura is defined on charge 0")
        new = []
        for x in m:
            nm = B.gens[x >> SHIFT].name
            if nm not in T.index:
                new = None
                break
            new.append((T.index[nm] << SHIFT) | (x & NMASK))
        if new is None:
            continue
        key = tuple(sorted(new))
        if key in out:
            raise BRSTError("letter collision in miura")
        out[key] = c
    return VertexPoly._wrap(T, {m: c for m, c in out.items() if c})


def coroot_data(spec: AlgebraSpec) -> List[Tuple[int, dict]]:
    """Pairs (e_alpha index in g_{1/2} basis-combination, h_alpha = [f, e_alpha]) for
    the odd simple roots, with (e_alpha | e^beta) = delta where f = sum e^alpha.

    For the built-in algebras g_{1/2} is spanned by simple root vectors of
    H-eigenvalue 1; the root vectors are eigenvectors of the Cartan subalgebra.
    """
    g = grade_decompose(spec)
    half = g.g_half
    if not spec.cartan:
        raise BRSTError("no Cartan subalgebra designated")
    vecs = _eigen_refine(spec, half)
    f = spec.osp.f
    out = []
    # normalize: (e_alpha | f) = 1 after writing f = sum of root components
    for v in vecs:
        c = spec.form(v, f)
        if not c:
            raise BRSTError("f has no component dual to a simple root vector")
        e = {i: x / c for i, x in v.items()}
        out.append((e, spec.bracket(f, e)))
    return out


def _charpoly(A: List[List[object]]) -> List[object]:
    """Coefficients c_0..c_n of det(x - A) (Faddeev-LeVerrier, exact)."""
    n = len(A)
    coeffs = [mpq(0)] * (n + 1)
    coeffs[n] = mpq(1)
    M = [[mpq(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M <- A M + c_{n-k+1} I
        AM = [[sum((A[i][l] * M[l][j] for l in range(n)), mpq(0)) for j in range(n)]
              for i in range(n)]
        c_prev = coeffs[n - k + 1]
        M = [[AM[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        AM = [[sum((A[i][l] * M[l][j] for l in range(n)), mpq(0)) for j in range(n)]
              for i in range(n)]
        coeffs[n - k] = -sum((AM[i][i] for i in range(n)), mpq(0)) / k
    return coeffs


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0] or [1]


def _rational_roots(coeffs: List[object]) -> List[object]:
    """Rational roots of an integer-clearable polynomial via the rational root test."""
    from math import lcm
    den = lcm(*[int(mpq(c).denominator) for c in coeffs])
    ints = [int(mpq(c) * den) for c in coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]
    roots = {mpq(0)} if len(ints) < len(coeffs) else set()
    if len(ints) <= 1:
        return sorted(roots)
    for p in _divisors(abs(ints[0])):
        for q in _divisors(abs(ints[-1])):
            for r in (mpq(p, q), mpq(-p, q)):
                if sum((c * r ** i for i, c in enumerate(ints)), mpq(0)) == 0:
                    roots.add(r)
    return sorted(roots)


def _eigen_refine(spec: AlgebraSpec, half: List[int]) -> List[dict]:
    """Common eigenvectors of ad(h), h in the Cartan, on g_{1/2} (exact, small)."""
    import itertools
    pos = {j: i for i, j in enumerate(half)}
    for weights in itertools.product(range(1, 6), repeat=len(spec.cartan)):
        h = {}
        for c, w in zip(spec.cartan, weights):
            h = linalg.vadd(h, {c: mpq(1)}, w)
        M = {j: spec.bracket(h, {j: mpq(1)}) for j in half}
        if any(i not in pos for j in half for i in M[j]):
            raise BRSTError("the Cartan subalgebra does not preserve g_{1/2}")
        A = [[mpq(0)] * len(half) for _ in half]
        for j in half:
            for i, x in M[j].items():
                A[pos[i]][pos[j]] = mpq(x)
        eig: List[dict] = []
        for lam in _rational_roots(_charpoly(A)):
            cols = {j: linalg.vadd(M[j], {j: mpq(1)}, -lam) for j in half}
            ker = linalg.nullspace(cols, list(half))
            if len(ker) > 1:
                eig = []
                break
            eig.extend(ker)
        if len(eig) == len(half) and linalg.rank(eig, list(half)) == len(half):
            return eig
    raise BRSTError("could not diagonalize the Cartan action on g_{1/2}")


@dataclass
class TauData:
    """tau: Phi_{e_alpha} -> hbar_alpha / sqrt(k+h^vee), J_h -> D J_hbar."""
    session: RootSession
    nonsusy_target: VertexAlgebra
    susy_target: VertexAlgebra
    phi_image: Dict[str, VertexPoly]      # Phi[b] -> element of susy target
    j_image: Dict[str, VertexPoly]        # J[c]   -> DJ[cb]
    inverse: Dict[str, VertexPoly]        # J[cb], DJ[cb] -> element of nonsusy target


def tau_data(spec: AlgebraSpec, session: Optional[RootSession] = None) -> TauData:
    """Build both free-field targets over one root session s^2 = k + h^vee."""
    if session is None:
        session = RootSession(K + spec.dual_coxeter)
    ns = build_complex(spec, "nonsusy")
    su = build_complex(spec, "susy")
    T = miura_target(ns, session)
    Tb = miura_target(su, session)
    s = session.s
    if s * s != K + spec.dual_coxeter:
        raise BRSTError("tau needs the session root sqrt(k + h^vee)")
    g = ns.grading
    roots = coroot_data(spec)
    # write each basis vector b of g_{1/2} in the e_alpha basis
    half = g.g_half
    cols = {a: e for a, (e, _) in enumerate(roots)}
    phi_image = {}
    for b in half:
        sol = linalg.solve(cols, list(range(len(roots))), {b: mpq(1)})
        if sol is None:
            raise BRSTError("simple root vectors do not span g_{1/2}")
        img = Tb.vacuum(0)
        for a, c in sol.items():
            h = roots[a][1]
            for ci, x in h.items():
                img = img + Tb[f"J[{spec.names[ci]}b]"] * (to_scalar(c) * to_scalar(x) / s)
        phi_image[f"Phi[{spec.names[b]}]"] = img
    j_image = {f"J[{spec.names[c]}]": Tb[f"DJ[{spec.names[c]}b]"] for c in g.g0}
    # inverse: hbar_alpha -> s Phi_{e_alpha}; express each Cartan basis vector in coroots
    hcols = {a: h for a, (_, h) in enumerate(roots)}
    inverse = {}
    for c in g.g0:
        sol = linalg.solve(hcols, list(range(len(roots))), {c: mpq(1)})
        if sol is None:
            raise BRSTError("coroots do not span g_0")
        img = T.vacuum(0)
        for a, x in sol.items():
            e = roots[a][0]
            for bi, y in e.items():
                img = img + T[f"Phi[{spec.names[bi]}]"] * (to_scalar(x) * to_scalar(y) * s)
        inverse[f"J[{spec.names[c]}b]"] = img
        inverse[f"DJ[{spec.names[c]}b]"] = T[f"J[{spec.names[c]}]"]
    return TauData(session, T, Tb, phi_image, j_image, inverse)


def _letter_map(X: VertexPoly, images: Mapping[str, VertexPoly], target: VertexAlgebra) -> VertexPoly:
    A = X.alg
    out = target.vacuum(0)
    cache: Dict[int, VertexPoly] = {}
    for m, c in X.terms.items():
        facs = []
        for x in m:
            if x not in cache:
                nm = A.gens[x >> SHIFT].name
                if nm not in images:
                    raise BRSTError(f"no image for generator {nm}")
                img = images[nm]
                cache[x] = img.d(x & NMASK) if x & NMASK else img
            facs.append(cache[x])
        term = nprod(*facs) if facs else target.vacuum(1)
        out = out + term * c
    return out


def tau_translate(td: TauData, X: VertexPoly) -> VertexPoly:
    """Apply tau: pi (x) Phi(g_{1/2}) -> SUSY Heisenberg, letter by letter."""
    if X.alg is not td.nonsusy_target:
        X = _transport(X, td.nonsusy_target)
    imgs = dict(td.phi_image)
    imgs.update(td.j_image)
    return _letter_map(X, imgs, td.susy_target)


def tau_inverse(td: TauData, Y: VertexPoly) -> VertexPoly:
    if Y.alg is not td.susy_target:
        Y = _transport(Y, td.susy_target)
    return _letter_map(Y, td.inverse, td.nonsusy_target)


def _transport(X: VertexPoly, T: VertexAlgebra) -> VertexPoly:
    """Same-named generators, different algebra object (e.g. another session)."""
    A = X.alg
    out = {}
    for m, c in X.terms.items():
        new = tuple(sorted((T.index[A.gens[x >> SHIFT].name] << SHIFT) | (x & NMASK) for x in m))
        out[new] = c
    return VertexPoly._wrap(T, out)


# ---------------------------------------------------------------------------
# Central charge
# ---------------------------------------------------------------------------

def central_charge(spec: AlgebraSpec, which: str = "nonsusy_form") -> LevelScalar:
    """Closed-form central charge of the principal W-algebra.

    ``nonsusy_form``: k sdim/(k+h) - 3k(H|H) - sum (-1)^p (12m^2 - 12m + 2) - sdim(g_{1/2})/2
    ``susy_form``:    k sdim/(k+h) + sdim/2 + 12 sum (-1)^p m - 3 sdim(n_+) - 3(k+h)(H|H)
    with m defined by [H, u_alpha] = 2 m u_alpha.
    """
    g = grade_decompose(spec)
    hv = to_scalar(spec.dual_coxeter)
    sd = spec.sdim(range(spec.dim))
    HH = spec.form(spec.osp.H, spec.osp.H)
    base = K * sd / (K + hv)
    if which == "nonsusy_form":
        s = Fraction(0)
        for a, m in g.m_values.items():
            s += _sign(spec.parity[a]) * (12 * m * m - 12 * m + 2)
        return base - K * 3 * HH - to_scalar(s) - to_scalar(Fraction(spec.sdim(g.g_half), 2))
    if which == "susy_form":
        s = Fraction(0)
        for a, m in g.m_values.items():
            s += _sign(spec.parity[a]) * m
        return (base + to_scalar(Fraction(sd, 2)) + to_scalar(12 * s)
                - to_scalar(3 * spec.sdim(g.n_plus)) - (K + hv) * 3 * HH)
    raise BRSTError("which must be 'nonsusy_form' or 'susy_form'")


def central_charge_identity(spec: AlgebraSpec) -> Tuple[bool, bool]:
    """The two identities reconciling the forms: sdim g = 2 sdim n_+ - sdim g_{1/2}
    and h^vee (H|H) = 4 sum (-1)^p m^2."""
    g = grade_decompose(spec)
    sd = spec.sdim(range(spec.dim))
    first = sd == 2 * spec.sdim(g.n_plus) - spec.sdim(g.g_half)
    HH = spec.form(spec.osp.H, spec.osp.H)
    s = sum((_sign(spec.parity[a]) * m * m for a, m in g.m_values.items()), Fraction(0))
    second = to_scalar(spec.dual_coxeter) * HH == to_scalar(4 * s)
    return first, second
