"""Fock modules, exponential intertwiners and screening operators.

A free-field algebra with bosons (even, weight 1, [a_l b] = G(a,b) l) and
fermions (odd, weight 1/2, [a_l b] = B(a,b)) is realized on its vacuum Fock
module and on the shifted modules pi_beta.  States are dicts

    (bosons, fermions) -> coefficient

where ``bosons`` is a sorted tuple of (letter, n) standing for the creation
mode a_{-n}, and ``fermions`` is a strictly increasing tuple of (letter, 2r)
standing for psi_{-r}, applied left to right to the highest weight vector.

The intertwiner with vacuum source is

    e^{-alpha}(z) = s_{-alpha} exp(-sum_{m>0} alpha_{-m} z^m / (m kappa))
                               exp( sum_{n>0} alpha_n  z^{-n} / (n kappa)),

and a screening operator is the residue of psi(z) e^{-alpha}(z) for a
fermion field psi.  Both the ordinary case (psi = Phi_alpha) and the SUSY
case (the super-residue of e^{-alpha}(Z), which equals the residue of
-(1/kappa) alphabar(z) e^{-alpha}(z)) use this one routine.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from gmpy2 import mpq

from . import linalg
from .brst import TauData, build_complex, coroot_data, tau_data, cohomology_dimensions
from .liealg import AlgebraSpec, Report, grade_decompose
from .scalar import K, LevelScalar, ONE, ZERO, to_scalar
from .vertex import NMASK, SHIFT, VertexAlgebra, VertexPoly

__all__ = [
    "ScreeningError", "FockSpace", "ScreeningOp", "screening_setup", "vertex_exp_modes",
    "screening_kernel", "identify_domains", "check_screening",
]

Key = Tuple[Tuple[Tuple[int, int], ...], Tuple[Tuple[int, int], ...]]
State = Dict[Key, LevelScalar]

VAC: Key = ((), ())


class ScreeningError(ValueError):
    pass


def _sadd(out: State, key: Key, c) -> None:
    v = out.get(key)
    v = c if v is None else v + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _scombine(*pairs) -> State:
    out: State = {}
    for c, st in pairs:
        for key, x in st.items():
            _sadd(out, key, x * c)
    return out


class FockSpace:
    """Fock modules of a free-field vertex algebra (bosons and fermions only)."""

    def __init__(self, alg: VertexAlgebra):
        self.alg = alg
        self.bosons: List[int] = []
        self.fermions: List[int] = []
        for gi, g in enumerate(alg.gens):
            if g.parity == 0 and g.weight == 1:
                self.bosons.append(gi)
            elif g.parity == 1 and g.weight == Fraction(1, 2):
                self.fermions.append(gi)
            else:
                raise ScreeningError(f"{g.name} is not a free boson or fermion")
        table = alg.table()
        self.G: Dict[Tuple[int, int], LevelScalar] = {}
        self.B: Dict[Tuple[int, int], LevelScalar] = {}
        for (a, b), L in table.items():
            for n, P in L.items():
                if set(P) - {()}:
                    raise ScreeningError("brackets of a free-field algebra must be constant")
                c = P.get(())
                if not c:
                    continue
                if a in self.bosons and b in self.bosons and n == 1:
                    self.G[(a, b)] = c
                elif a in self.fermions and b in self.fermions and n == 0:
                    self.B[(a, b)] = c
                else:
                    raise ScreeningError("unexpected bracket in free-field table")

    # -- bookkeeping --------------------------------------------------------

    def weight(self, key: Key) -> Fraction:
        return (sum((Fraction(n) for _, n in key[0]), Fraction(0))
                + sum((Fraction(r, 2) for _, r in key[1]), Fraction(0)))

    def basis(self, weight) -> List[Key]:
        """Monomial basis of the weight-``weight`` part of any Fock module."""
        weight = Fraction(weight)
        two = int(2 * weight)
        slots = [(b, 0, n) for b in self.bosons for n in range(1, two // 2 + 1)]
        slots += [(f, 1, r) for f in self.fermions for r in range(1, two + 1, 2)]
        slots.sort(key=lambda t: (t[2] if t[1] else 2 * t[2]))
        out: List[Key] = []

        def rec(i, left, bos, fer):
            if left == 0:
                out.append((tuple(sorted(bos)), tuple(sorted(fer))))
                return
            for j in range(i, len(slots)):
                g, odd, n = slots[j]
                w = n if odd else 2 * n
                if w > left:
                    continue
                if odd:
                    rec(j + 1, left - w, bos, fer + [(g, n)])
                else:
                    rec(j, left - w, bos + [(g, n)], fer)

        rec(0, two, [], [])
        return sorted(set(out))

    # -- creation and annihilation -------------------------------------------

    def create(self, letter: int, n2: int, st: State) -> State:
        """Apply the creation mode of a generator; ``n2`` is twice the mode size."""
        out: State = {}
        if letter in self.bosons:
            n = n2 // 2
            for (bos, fer), c in st.items():
                _sadd(out, (tuple(sorted(bos + ((letter, n),))), fer), c)
            return out
        for (bos, fer), c in st.items():
            item = (letter, n2)
            if item in fer:
                continue
            pos = sum(1 for x in fer if x < item)
            sign = -1 if pos % 2 else 1
            new = tuple(sorted(fer + (item,)))
            _sadd(out, (bos, new), c * sign)
        return out

    def annihilate_boson(self, vec: Mapping[int, object], n: int, st: State) -> State:
        """Apply a_n (n > 0) for a = sum vec[b] b."""
        out: State = {}
        for (bos, fer), c in st.items():
            seen = set()
            for i, (b, m) in enumerate(bos):
                if m != n or (b, m) in seen:
                    continue
                seen.add((b, m))
                mult = sum(1 for x in bos if x == (b, m))
                g = ZERO
                for a, x in vec.items():
                    gab = self.G.get((a, b))
                    if gab:
                        g = g + gab * x
                if not g:
                    continue
                rest = list(bos)
                rest.remove((b, m))
                _sadd(out, (tuple(rest), fer), c * g * (n * mult))
        return out

    def fermion_mode(self, vec: Mapping[int, object], r2: int, st: State) -> State:
        """Apply psi_r for psi = sum vec[b] b, with r = r2 / 2 (either sign)."""
        if r2 < 0:
            out: State = {}
            for b, x in vec.items():
                for key, c in self.create(b, -r2, st).items():
                    _sadd(out, key, c * x)
            return out
        out = {}
        for (bos, fer), c in st.items():
            for i, (b, s2) in enumerate(fer):
                if s2 != r2:
                    continue
                g = ZERO
                for a, x in vec.items():
                    bab = self.B.get((a, b))
                    if bab:
                        g = g + bab * x
                if not g:
                    continue
                sign = -1 if i % 2 else 1
                _sadd(out, (bos, fer[:i] + fer[i + 1:]), c * g * sign)
        return out

    def boson_mode(self, vec: Mapping[int, object], n: int, st: State) -> State:
        """a_n for n != 0 (creation for n < 0)."""
        if n < 0:
            out: State = {}
            for b, x in vec.items():
                for key, c in self.create(b, -2 * n, st).items():
                    _sadd(out, key, c * x)
            return out
        if n == 0:
            raise ScreeningError("zero modes act by the highest weight; use zero_mode")
        return self.annihilate_boson(vec, n, st)

    def pairing(self, u: Mapping[int, object], v: Mapping[int, object]) -> LevelScalar:
        """G(u, v) for boson vectors."""
        out = ZERO
        for a, x in u.items():
            for b, y in v.items():
                g = self.G.get((a, b))
                if g:
                    out = out + g * x * y
        return out

    # -- state of a normally ordered polynomial --------------------------------

    def from_vertex(self, X: VertexPoly) -> State:
        """The vacuum-module state of X (state-field correspondence)."""
        if X.alg is not self.alg:
            raise ScreeningError("element of a different algebra")
        out: State = {}
        for m, c in X.terms.items():
            st: State = {VAC: c}
            for x in reversed(m):
                g, n = x >> SHIFT, x & NMASK
                coef = factorial(n)
                if g in self.bosons:
                    st = self.create(g, 2 * (n + 1), st)
                else:
                    st = self.create(g, 2 * n + 1, st)
                st = {key: v * coef for key, v in st.items()}
            for key, v in st.items():
                _sadd(out, key, v)
        return out

    def fmt(self, st: State) -> str:
        if not st:
            return "0"
        parts = []
        for (bos, fer), c in sorted(st.items(), key=lambda kv: str(kv[0])):
            word = [f"{self.alg.gens[b].name}_{{-{n}}}" for b, n in bos]
            word += [f"{self.alg.gens[f].name}_{{-{Fraction(r, 2)}}}" for f, r in fer]
            parts.append(f"({c})*" + (" ".join(word) if word else "|hw>"))
        return " + ".join(parts)


def _exp_series(fock: FockSpace, terms: Sequence[Tuple[int, Mapping[int, object], object]],
                st: State, max_power: int, creation: bool) -> Dict[int, State]:
    """Apply prod_n exp(c_n a^{(n)} z^{+-n}) to st; returns {|power|: state}.

    ``terms`` lists (n, vector, coefficient); creation uses a_{-n}, else a_n.
    Powers beyond ``max_power`` are dropped.
    """
    series: Dict[int, State] = {0: dict(st)}
    for n, vec, coef in terms:
        new: Dict[int, State] = {}
        for p, v in series.items():
            cur = v
            j = 0
            fact = ONE
            while cur and p + j * n <= max_power:
                tgt = new.setdefault(p + j * n, {})
                for key, x in cur.items():
                    _sadd(tgt, key, x / fact)
                j += 1
                fact = fact * j
                cur = fock.boson_mode(vec, -n if creation else n, cur)
                cur = {key: x * coef for key, x in cur.items()}
        series = {p: v for p, v in new.items() if v}
    return series


@dataclass
class ScreeningOp:
    """Residue of psi(z) e^{-alpha}(z) between vacuum and pi_{-alpha}."""
    fock: FockSpace
    alpha: Dict[int, LevelScalar]          # boson vector of alpha
    psi: Dict[int, LevelScalar]            # fermion vector
    kappa: LevelScalar
    label: str = ""
    scale: LevelScalar = field(default_factory=lambda: ONE)

    def exp_modes(self, st: State, cutoff: int) -> Dict[int, State]:
        """e^{-alpha}(z) st as {power of z: state}, powers up to ``cutoff``."""
        w = max((self.fock.weight(k) for k in st), default=Fraction(0))
        nmax = int(w)
        low = [(n, self.alpha, to_scalar(1) / (self.kappa * n)) for n in range(1, nmax + 1)]
        minus = _exp_series(self.fock, low, st, nmax, creation=False)
        out: Dict[int, State] = {}
        for b, v in minus.items():
            high = [(m, self.alpha, -to_scalar(1) / (self.kappa * m))
                    for m in range(1, cutoff + b + 1)]
            plus = _exp_series(self.fock, high, v, cutoff + b, creation=True)
            for a, u in plus.items():
                p = a - b
                if p > cutoff:
                    continue
                tgt = out.setdefault(p, {})
                for key, x in u.items():
                    _sadd(tgt, key, x)
        return {p: v for p, v in out.items() if v}

    def apply(self, st: State) -> State:
        """The residue; on the vacuum source no fractional power appears."""
        out: State = {}
        w = max((self.fock.weight(k) for k in st), default=Fraction(0))
        nmax = int(w)
        low = [(n, self.alpha, to_scalar(1) / (self.kappa * n)) for n in range(1, nmax + 1)]
        minus = _exp_series(self.fock, low, st, nmax, creation=False)
        amax = int(2 * w) + 2
        for b, v in minus.items():
            high = [(m, self.alpha, -to_scalar(1) / (self.kappa * m)) for m in range(1, amax + 1)]
            # residue picks r = a - b + 1/2 for the fermion mode psi_r
            for a in range(0, amax + 1):
                r2 = 2 * (a - b) + 1
                if r2 > 0 and r2 > int(2 * w):
                    continue
                fv = self.fock.fermion_mode(self.psi, r2, v)
                if not fv:
                    continue
                # E+_a applied after psi; psi commutes with the bosons
                plus = _exp_series(self.fock, high, fv, a, creation=True)
                for key, x in plus.get(a, {}).items():
                    _sadd(out, key, x * self.scale)
        return out

    def matrix(self, weight) -> Tuple[List[Key], Dict[Key, State]]:
        dom = self.fock.basis(weight)
        return dom, {key: self.apply({key: ONE}) for key in dom}


def _alpha_vector(spec: AlgebraSpec, e: Mapping[int, object]) -> Dict[int, mpq]:
    """alpha in g_0 via the form: (h | alpha) = alpha(h) for h in g_0."""
    g = grade_decompose(spec)
    h0 = list(g.g0)
    cols = {j: {i: mpq(spec.form({i: 1}, {j: 1})) for i in h0} for j in h0}
    target = {}
    for i in h0:
        br = spec.bracket({i: mpq(1)}, e)
        # [h, e] = alpha(h) e
        lam = None
        for b, x in br.items():
            if e.get(b):
                lam = mpq(x) / mpq(e[b])
                break
        if lam:
            target[i] = lam
    sol = linalg.solve(cols, h0, target)
    if sol is None:
        raise ScreeningError("the form is degenerate on g_0")
    return sol


@dataclass
class ScreeningSetup:
    spec: AlgebraSpec
    tau: TauData
    nonsusy: FockSpace
    susy: FockSpace
    roots: List[Tuple[dict, dict]]
    alphas: List[Dict[int, mpq]]
    ops_nonsusy: List[ScreeningOp]
    ops_susy: List[ScreeningOp]


_SETUPS: Dict[int, ScreeningSetup] = {}


def screening_setup(spec: AlgebraSpec) -> ScreeningSetup:
    """Fock spaces on both sides and one screening operator per odd simple root."""
    if id(spec) in _SETUPS:
        return _SETUPS[id(spec)]
    td = tau_data(spec)
    T, Tb = td.nonsusy_target, td.susy_target
    F, Fb = FockSpace(T), FockSpace(Tb)
    kappa = K + spec.dual_coxeter
    roots = coroot_data(spec)
    alphas, ns_ops, su_ops = [], [], []
    names = spec.names
    for idx, (e, h) in enumerate(roots):
        al = _alpha_vector(spec, e)
        alphas.append(al)
        a_ns = {T.index[f"J[{names[i]}]"]: to_scalar(x) for i, x in al.items()}
        a_su = {Tb.index[f"DJ[{names[i]}b]"]: to_scalar(x) for i, x in al.items()}
        psi_ns = {T.index[f"Phi[{names[b]}]"]: to_scalar(x) for b, x in e.items()}
        psi_su = {Tb.index[f"J[{names[i]}b]"]: -to_scalar(x) / kappa for i, x in al.items()}
        ns_ops.append(ScreeningOp(F, a_ns, psi_ns, kappa, f"alpha_{idx + 1}"))
        su_ops.append(ScreeningOp(Fb, a_su, psi_su, kappa, f"alpha_{idx + 1}"))
    out = ScreeningSetup(spec, td, F, Fb, roots, alphas, ns_ops, su_ops)
    _SETUPS[id(spec)] = out
    return out


def vertex_exp_modes(spec: AlgebraSpec, root: int = 0, flavor: str = "nonsusy",
                     cutoff: int = 3) -> Tuple[ScreeningOp, Dict[Key, Dict[int, State]]]:
    """All modes of e^{-alpha}(z) on the vacuum module up to weight ``cutoff``."""
    if cutoff < 0:
        raise ScreeningError("cutoff must be non-negative")
    S = screening_setup(spec)
    op = (S.ops_nonsusy if flavor == "nonsusy" else S.ops_susy)[root]
    modes = {}
    for w2 in range(0, 2 * cutoff + 1):
        for key in op.fock.basis(Fraction(w2, 2)):
            modes[key] = op.exp_modes({key: ONE}, cutoff)
    return op, modes


def _kernel(ops: Sequence[ScreeningOp], weight) -> Tuple[List[Key], List[State]]:
    fock = ops[0].fock
    dom = fock.basis(weight)
    cols: Dict[Key, dict] = {key: {} for key in dom}
    for i, op in enumerate(ops):
        for key in dom:
            for t, x in op.apply({key: ONE}).items():
                cols[key][(i, t)] = x
    order = sorted(dom, key=str)
    return dom, linalg.nullspace(cols, order)


def screening_kernel(spec: AlgebraSpec, weight, flavor: str = "nonsusy") -> List[State]:
    """Joint kernel of all screening residues on the weight-``weight`` component."""
    S = screening_setup(spec)
    ops = S.ops_nonsusy if flavor == "nonsusy" else S.ops_susy
    if not ops[0].fock.basis(weight):
        raise ScreeningError("weight component empty")
    return _kernel(ops, weight)[1]


def in_kernel(op: ScreeningOp, st: State) -> bool:
    return not op.apply(st)


# ---------------------------------------------------------------------------
# tau at the level of Fock states
# ---------------------------------------------------------------------------

def _letter_images(S: ScreeningSetup) -> Dict[int, Dict[int, LevelScalar]]:
    """Each nonsusy letter goes to a linear combination of susy letters."""
    T, Tb = S.tau.nonsusy_target, S.tau.susy_target
    imgs = dict(S.tau.phi_image)
    imgs.update(S.tau.j_image)
    out = {}
    for name, P in imgs.items():
        vec = {}
        for m, c in P.terms.items():
            if len(m) != 1 or m[0] & NMASK:
                raise ScreeningError("tau must send letters to linear letters")
            vec[m[0] >> SHIFT] = c
        out[T.index[name]] = vec
    return out


def identify_domains(S: ScreeningSetup, st: State) -> State:
    """Translate a state of pi (x) Phi(g_1/2) to the SUSY Heisenberg module via tau."""
    imgs = _letter_images(S)
    Fb = S.susy
    out: State = {}
    for (bos, fer), c in st.items():
        cur: State = {VAC: c}
        for f, r2 in reversed(fer):
            nxt: State = {}
            for b, x in imgs[f].items():
                for key, y in Fb.create(b, r2, cur).items():
                    _sadd(nxt, key, y * x)
            cur = nxt
        for b0, n in reversed(bos):
            nxt = {}
            for b, x in imgs[b0].items():
                for key, y in Fb.create(b, 2 * n, cur).items():
                    _sadd(nxt, key, y * x)
            cur = nxt
        for key, y in cur.items():
            _sadd(out, key, y)
    return out


def _ratio(A: State, B: State) -> Optional[LevelScalar]:
    """c with A = c B, or None."""
    if not A and not B:
        return ZERO
    if not B or set(A) != set(B):
        return None
    key = next(iter(B))
    c = A[key] / B[key]
    for k2, y in B.items():
        if A[k2] != c * y:
            return None
    return c


def screening_agreement(S: ScreeningSetup, weight) -> Tuple[bool, List[Optional[LevelScalar]]]:
    """Check R_susy(tau v) = c_alpha tau(R_nonsusy v) on the whole weight space,
    with one scalar c_alpha per root."""
    ok = True
    scalars = []
    for op_n, op_s in zip(S.ops_nonsusy, S.ops_susy):
        c_found = None
        for key in S.nonsusy.basis(weight):
            lhs = op_s.apply(identify_domains(S, {key: ONE}))
            rhs = identify_domains(S, op_n.apply({key: ONE}))
            if not lhs and not rhs:
                continue
            c = _ratio(lhs, rhs)
            if c is None or (c_found is not None and c != c_found):
                ok = False
                break
            c_found = c
        scalars.append(c_found)
    return ok, scalars


def highest_weight_check(S: ScreeningSetup) -> bool:
    """tau(h)_(0) = (D hbar)_(0) acts on |-alpha> by -alpha(h), on both sides alike:
    the zero mode of the boson h on pi_beta is (h|beta) in either realization."""
    spec = S.spec
    g0 = grade_decompose(spec).g0
    for al in S.alphas:
        for i in g0:
            lhs = -spec.form({i: 1}, al)
            # alpha(h) read off from [h, e_alpha]
            e = S.roots[S.alphas.index(al)][0]
            br = spec.bracket({i: mpq(1)}, e)
            b = next(iter(e))
            val = mpq(br.get(b, 0)) / mpq(e[b])
            if lhs != -val:
                return False
    return True


def check_screening(spec: AlgebraSpec, max_weight=3, members: Optional[Mapping[str, Tuple[str, VertexPoly]]] = None) -> Report:
    """Kernel membership of given Miura images, nonsusy/SUSY agreement and
    kernel dimension counts against the cohomology, for weights <= max_weight."""
    S = screening_setup(spec)
    rep = Report(f"screening operators: {spec.name}")
    if members:
        for label, (flavor, X) in members.items():
            F = S.nonsusy if flavor == "nonsusy" else S.susy
            ops = S.ops_nonsusy if flavor == "nonsusy" else S.ops_susy
            st = F.from_vertex(X)
            bad = [op.label for op in ops if op.apply(st)]
            rep.add(f"{label} is killed by every screening ({flavor})", not bad, ", ".join(bad))
    ns = build_complex(spec, "nonsusy")
    for w2 in range(1, int(2 * Fraction(max_weight)) + 1):
        w = Fraction(w2, 2)
        ok, cs = screening_agreement(S, w)
        rep.add(f"screening matrices agree under tau at weight {w}", ok,
                "" if ok else "no single scalar relates the two sides")
        dn = len(S.nonsusy.basis(w))
        ds = len(S.susy.basis(w))
        rep.add(f"dim pi(x)Phi = dim SUSY Heisenberg at weight {w}", dn == ds, f"{dn} vs {ds}")
        kn = len(_kernel(S.ops_nonsusy, w)[1]) if dn else 0
        ks = len(_kernel(S.ops_susy, w)[1]) if ds else 0
        h0 = cohomology_dimensions(ns, w, charges=(0,))[0]["cohomology"]
        rep.add(f"kernel dimension equals dim H^0 at weight {w}", kn == ks == h0,
                f"nonsusy {kn}, susy {ks}, H^0 {h0}")
    rep.add("(D hbar)_(0) acts on |-alpha> by -alpha(h)", highest_weight_check(S))
    return rep
