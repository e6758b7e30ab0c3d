"""Normally ordered polynomials and the lambda-bracket calculus.

A vertex algebra here is freely generated by named generators with a bracket
table between generators.  Elements are linear combinations of right-nested
normally ordered monomials ``:x1 :x2 ... xn::`` where every letter ``x`` is a
derivative ``d^n(g)`` of a generator.  A letter is encoded as the integer
``g * 64 + n``; monomials are tuples of letters in non-decreasing order, odd
letters never repeated.

Rewriting uses the standard non-commutative Wick formulas together with
quasi-commutativity and quasi-associativity of the normally ordered product.
Everything is memoized per algebra on monomial pairs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from gmpy2 import mpq

from .scalar import LevelScalar, ONE, ZERO, to_scalar, parse_scalar, RootSession

__all__ = [
    "Generator", "VertexAlgebra", "VertexPoly", "LambdaPoly", "VertexError",
    "axiom_check", "hamiltonian_weight", "no_product", "nprod", "lambda_bracket",
    "enumerate_monomials", "parse_vertex",
]

SHIFT = 6
NMASK = (1 << SHIFT) - 1

Mono = Tuple[int, ...]
PDict = Dict[Mono, LevelScalar]
LDict = Dict[int, PDict]

VACUUM: Mono = ()


class VertexError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    parity: int
    weight: Fraction
    charge: int = 0


# ---------------------------------------------------------------------------
# dict-level helpers
# ---------------------------------------------------------------------------

def _acc(out: PDict, P: Mapping[Mono, LevelScalar], c=None) -> None:
    """out += c * P (in place)."""
    if c is None:
        for m, x in P.items():
            y = out.get(m)
            if y is None:
                out[m] = x
            else:
                z = y + x
                if z:
                    out[m] = z
                else:
                    del out[m]
        return
    if not c:
        return
    for m, x in P.items():
        v = x * c
        y = out.get(m)
        if y is None:
            if v:
                out[m] = v
        else:
            z = y + v
            if z:
                out[m] = z
            else:
                del out[m]


def _acc_l(out: LDict, L: Mapping[int, PDict], c=None, shift: int = 0) -> None:
    for n, P in L.items():
        tgt = out.setdefault(n + shift, {})
        _acc(tgt, P, c)
        if not tgt:
            del out[n + shift]


def _scale(P: Mapping[Mono, LevelScalar], c) -> PDict:
    if not c:
        return {}
    return {m: x * c for m, x in P.items()}


_CONST_CACHE: Dict[object, LevelScalar] = {}


def _c(x) -> LevelScalar:
    """Cached small rational constants as LevelScalars."""
    v = _CONST_CACHE.get(x)
    if v is None:
        v = LevelScalar.const(x if not isinstance(x, Fraction) else mpq(x.numerator, x.denominator))
        _CONST_CACHE[x] = v
    return v


def _frac(a: int, b: int) -> LevelScalar:
    return _c(Fraction(a, b))


# ---------------------------------------------------------------------------
# The algebra
# ---------------------------------------------------------------------------

class VertexAlgebra:
    """Free generators, a lambda-bracket table, and the rewriting engine.

    ``table[(g, h)]`` is a dict ``{n: PDict}`` giving the coefficient of
    lambda^n in ``[g_lambda h]``.  Missing pairs are filled by skew-symmetry
    when the reverse pair is present, otherwise they are zero.
    """

    def __init__(self, name: str = "V", session: Optional[RootSession] = None):
        self.name = name
        self.gens: List[Generator] = []
        self.index: Dict[str, int] = {}
        self._table: Dict[Tuple[int, int], LDict] = {}
        self.session = session
        self.dpartner: Dict[int, Tuple[int, int]] = {}
        self._reset_caches()

    # -- generators and table ------------------------------------------------
    def _reset_caches(self):
        self._np: Dict[Tuple[Mono, Mono], PDict] = {}
        self._nl: Dict[Tuple[int, Mono], PDict] = {}
        self._br: Dict[Tuple[Mono, Mono], LDict] = {}
        self._bl: Dict[Tuple[int, int], LDict] = {}
        self._dv: Dict[Mono, PDict] = {}
        self._D: Dict[Mono, PDict] = {}
        self._full: Optional[Dict[Tuple[int, int], LDict]] = None

    def add_generator(self, name: str, parity: int, weight, charge: int = 0) -> "VertexPoly":
        if name in self.index:
            raise VertexError(f"duplicate generator {name}")
        self.index[name] = len(self.gens)
        self.gens.append(Generator(name, parity % 2, Fraction(weight), charge))
        self._reset_caches()
        return self.gen(name)

    def gen(self, name: str, n: int = 0) -> "VertexPoly":
        if name not in self.index:
            raise VertexError(f"unknown generator {name!r}")
        return VertexPoly(self, {((self.index[name] << SHIFT) | n,): ONE})

    def __getitem__(self, name: str) -> "VertexPoly":
        return self.gen(name)

    def vacuum(self, c=1) -> "VertexPoly":
        return VertexPoly(self, {VACUUM: to_scalar(c)} if c else {})

    def scalar(self, c) -> "VertexPoly":
        return self.vacuum(c)

    def set_bracket(self, a: str, b: str, value: Mapping[int, object]) -> None:
        """Set [a_lambda b] = sum_n lambda^n value[n]."""
        L: LDict = {}
        for n, v in value.items():
            P = self._coerce(v).terms
            if P:
                L[n] = dict(P)
        self._table[(self.index[a], self.index[b])] = L
        self._reset_caches()

    def set_dpartner(self, even_or_odd: str, partner: str) -> None:
        """Declare D(a) = partner and D(partner) = d(a)."""
        a, b = self.index[even_or_odd], self.index[partner]
        self.dpartner[a] = (b, 0)
        self.dpartner[b] = (a, 1)
        self._reset_caches()

    def _coerce(self, v) -> "VertexPoly":
        if isinstance(v, VertexPoly):
            if v.alg is not self:
                raise VertexError("element from another algebra")
            return v
        return self.vacuum(to_scalar(v))

    def table(self) -> Dict[Tuple[int, int], LDict]:
        """Bracket table with missing pairs completed by skew-symmetry."""
        if self._full is None:
            full = dict(self._table)
            for (g, h), L in self._table.items():
                if (h, g) not in full:
                    full[(h, g)] = self._skew(g, h, L)
            self._full = full
        return self._full

    def _skew(self, g: int, h: int, L: LDict) -> LDict:
        # [h_lambda g] = -p [g_{-lambda-d} h]
        sign = -1 if (self.gens[g].parity * self.gens[h].parity) == 0 else 1
        out: LDict = {}
        for i, P in L.items():
            for j in range(i + 1):
                c = comb(i, j) * (-1) ** i * sign
                Q = self.deriv_poly(P, j)
                if Q:
                    _acc_l(out, {i - j: Q}, _c(c))
        return out

    # -- letters ------------------------------------------------------------
    def lparity(self, x: int) -> int:
        return self.gens[x >> SHIFT].parity

    def mparity(self, m: Mono) -> int:
        p = 0
        for x in m:
            p ^= self.gens[x >> SHIFT].parity
        return p

    def mweight(self, m: Mono) -> Fraction:
        return sum((self.gens[x >> SHIFT].weight + (x & NMASK) for x in m), Fraction(0))

    def mcharge(self, m: Mono) -> int:
        return sum(self.gens[x >> SHIFT].charge for x in m)

    def letter_name(self, x: int) -> str:
        g, n = x >> SHIFT, x & NMASK
        nm = self.gens[g].name
        if n == 0:
            return nm
        if n == 1:
            return f"d({nm})"
        return f"d{n}({nm})"

    # -- derivative -----------------------------------------------------------
    def deriv_mono(self, m: Mono) -> PDict:
        r = self._dv.get(m)
        if r is not None:
            return r
        if not m:
            r = {}
        elif len(m) == 1:
            r = {(m[0] + 1,): ONE}
        else:
            x, R = m[0], m[1:]
            r = dict(self.nprod_letter(x + 1, R))
            for m2, c in self.deriv_mono(R).items():
                _acc(r, self.nprod_letter(x, m2), c)
        self._dv[m] = r
        return r

    def deriv_poly(self, P: Mapping[Mono, LevelScalar], j: int = 1) -> PDict:
        cur = dict(P)
        for _ in range(j):
            nxt: PDict = {}
            for m, c in cur.items():
                _acc(nxt, self.deriv_mono(m), c)
            cur = nxt
        return cur

    # -- normally ordered product ------------------------------------------------
    def _integral_minus_d(self, L: LDict) -> PDict:
        """int_{-d}^0 (sum lambda^n c_n) dlambda = sum (-1)^n/(n+1) d^{n+1} c_n."""
        out: PDict = {}
        for n, P in L.items():
            _acc(out, self.deriv_poly(P, n + 1), _frac((-1) ** n, n + 1))
        return out

    def nprod_letter(self, x: int, m: Mono) -> PDict:
        key = (x, m)
        r = self._nl.get(key)
        if r is not None:
            return r
        if not m:
            r = {(x,): ONE}
        else:
            y = m[0]
            if x < y:
                r = {(x,) + m: ONE}
            elif x == y:
                if not self.lparity(x):
                    r = {(x,) + m: ONE}
                else:
                    corr = self._integral_minus_d(self.bracket_letters(x, x))
                    r = {}
                    if corr:
                        _acc(r, self.no_product_poly(corr, {m[1:]: ONE}), _frac(1, 2))
            else:
                R = m[1:]
                sign = -1 if self.lparity(x) and self.lparity(y) else 1
                r = {}
                inner = self.nprod_letter(x, R)
                for m2, c in inner.items():
                    _acc(r, self.nprod_letter(y, m2), c if sign == 1 else -c)
                corr = self._integral_minus_d(self.bracket_letters(x, y))
                if corr:
                    _acc(r, self.no_product_poly(corr, {R: ONE}))
        self._nl[key] = r
        return r

    def no_product_mono(self, A: Mono, B: Mono) -> PDict:
        if not A:
            return {B: ONE}
        if not B:
            if len(A) == 1:
                return {A: ONE}
        if len(A) == 1:
            return self.nprod_letter(A[0], B)
        key = (A, B)
        r = self._np.get(key)
        if r is not None:
            return r
        a, Ap = A[0], A[1:]
        r = {}
        for m2, c in self.no_product_mono(Ap, B).items():
            _acc(r, self.nprod_letter(a, m2), c)
        # :(int_0^d a)[A'_lambda B]:
        for n, P in self.bracket_mono(Ap, B).items():
            _acc(r, self.no_product_poly({(a + n + 1,): ONE}, P), _frac(1, n + 1))
        # p(a,A') :(int_0^d A')[a_lambda B]:
        sign = -1 if self.lparity(a) and self.mparity(Ap) else 1
        for n, P in self.bracket_mono((a,), B).items():
            dA = self.deriv_poly({Ap: ONE}, n + 1)
            _acc(r, self.no_product_poly(dA, P), _frac(sign, n + 1))
        self._np[key] = r
        return r

    def no_product_poly(self, P: Mapping[Mono, LevelScalar], Q: Mapping[Mono, LevelScalar]) -> PDict:
        out: PDict = {}
        for a, x in P.items():
            for b, y in Q.items():
                _acc(out, self.no_product_mono(a, b), x * y)
        return out

    # -- lambda brackets -------------------------------------------------------
    def bracket_letters(self, x: int, y: int) -> LDict:
        key = (x, y)
        r = self._bl.get(key)
        if r is not None:
            return r
        g, m = x >> SHIFT, x & NMASK
        h, n = y >> SHIFT, y & NMASK
        base = self.table().get((g, h), {})
        r = {}
        # (-lambda)^m (lambda + d)^n base
        for i, P in base.items():
            for j in range(n + 1):
                Q = self.deriv_poly(P, j)
                if Q:
                    _acc_l(r, {i + m + n - j: Q}, _c(comb(n, j) * (-1) ** m))
        self._bl[key] = r
        return r

    def bracket_mono(self, A: Mono, B: Mono) -> LDict:
        if not A or not B:
            return {}
        if len(A) == 1 and len(B) == 1:
            return self.bracket_letters(A[0], B[0])
        key = (A, B)
        r = self._br.get(key)
        if r is not None:
            return r
        r = {}
        if len(A) == 1:
            x = A[0]
            y, R = B[0], B[1:]
            Lxy = self.bracket_letters(x, y)
            for n, P in Lxy.items():
                _acc_l(r, {n: self.no_product_poly(P, {R: ONE})})
            sign = -1 if self.lparity(x) and self.lparity(y) else 1
            for n, P in self.bracket_mono((x,), R).items():
                Q: PDict = {}
                for m2, c in P.items():
                    _acc(Q, self.nprod_letter(y, m2), c)
                _acc_l(r, {n: Q}, _c(sign))
            for n, P in Lxy.items():
                for m, Q in self.bracket_poly(P, {R: ONE}).items():
                    _acc_l(r, {n + m + 1: Q}, _frac(1, m + 1))
        else:
            a, Ap = A[0], A[1:]
            C = B
            for n, P in self.bracket_mono(Ap, C).items():
                for j in range(n + 1):
                    _acc_l(r, {n - j: self.no_product_poly({(a + j,): ONE}, P)}, _c(comb(n, j)))
            sign = -1 if self.lparity(a) and self.mparity(Ap) else 1
            La = self.bracket_mono((a,), C)
            for n, P in La.items():
                for j in range(n + 1):
                    dA = self.deriv_poly({Ap: ONE}, j)
                    _acc_l(r, {n - j: self.no_product_poly(dA, P)}, _c(comb(n, j) * sign))
            for n, P in La.items():
                for m, Q in self.bracket_poly({Ap: ONE}, P).items():
                    coef = Fraction(factorial(n) * factorial(m), factorial(n + m + 1)) * sign
                    _acc_l(r, {n + m + 1: Q}, _c(coef))
        self._br[key] = r
        return r

    def bracket_poly(self, P: Mapping[Mono, LevelScalar], Q: Mapping[Mono, LevelScalar]) -> LDict:
        out: LDict = {}
        for a, x in P.items():
            if not a:
                continue
            for b, y in Q.items():
                if not b:
                    continue
                _acc_l(out, self.bracket_mono(a, b), x * y)
        return out

    # -- SUSY derivation ------------------------------------------------------
    def D_letter(self, x: int) -> Tuple[int, int]:
        g, n = x >> SHIFT, x & NMASK
        if g not in self.dpartner:
            raise VertexError(f"generator {self.gens[g].name} has no SUSY partner")
        h, s = self.dpartner[g]
        return (h << SHIFT) | (n + s), 1

    def D_mono(self, m: Mono) -> PDict:
        r = self._D.get(m)
        if r is not None:
            return r
        if not m:
            r = {}
        elif len(m) == 1:
            y, _ = self.D_letter(m[0])
            r = {(y,): ONE}
        else:
            x, R = m[0], m[1:]
            y, _ = self.D_letter(x)
            r = dict(self.nprod_letter(y, R))
            sign = -1 if self.lparity(x) else 1
            for m2, c in self.D_mono(R).items():
                _acc(r, self.nprod_letter(x, m2), c if sign == 1 else -c)
        self._D[m] = r
        return r

    def D_poly(self, P: Mapping[Mono, LevelScalar]) -> PDict:
        out: PDict = {}
        for m, c in P.items():
            _acc(out, self.D_mono(m), c)
        return out

    # -- text -------------------------------------------------------------------
    def fmt_mono(self, m: Mono) -> str:
        if not m:
            return "1"
        if len(m) == 1:
            return self.letter_name(m[0])
        return ":" + " ".join(self.letter_name(x) for x in m) + ":"

    def mono_key(self, m: Mono):
        """Deterministic display order: by weight, then length, then letters."""
        return (self.mweight(m), len(m), m)


# ---------------------------------------------------------------------------
# User-facing values
# ---------------------------------------------------------------------------

def _fmt_coef_prefix(c: LevelScalar) -> Tuple[str, str]:
    """Return (sign, body-with-star) for a coefficient in front of a monomial."""
    if c == 1:
        return "+", ""
    if c == -1:
        return "-", ""
    s = str(c)
    neg = False
    if c.is_rational_function() and c.den == (mpq(1),) and len([x for x in c.num if x]) == 1:
        lead = c.num[-1]
        if not hasattr(lead, "im") and lead < 0:
            neg = True
            s = str(-c)
    simple = re.fullmatch(r"[0-9]+(/[0-9]+)?", s) is not None
    body = s if simple else f"({s})"
    return ("-" if neg else "+"), body + "*"


class VertexPoly:
    """A linear combination of normally ordered monomials."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: VertexAlgebra, terms: Mapping[Mono, LevelScalar]):
        self.alg = alg
        self.terms = {m: to_scalar(c) for m, c in terms.items() if c}

    @classmethod
    def _wrap(cls, alg, terms):
        obj = cls.__new__(cls)
        obj.alg = alg
        obj.terms = terms
        return obj

    def _o(self, other) -> "VertexPoly":
        return self.alg._coerce(other)

    def __add__(self, other):
        out = dict(self.terms)
        _acc(out, self._o(other).terms)
        return VertexPoly._wrap(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return VertexPoly._wrap(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        out = dict(self.terms)
        _acc(out, self._o(other).terms, _c(-1))
        return VertexPoly._wrap(self.alg, out)

    def __rsub__(self, other):
        return self._o(other) - self

    def __mul__(self, c):
        if isinstance(c, VertexPoly):
            raise TypeError("use no_product for the normally ordered product")
        return VertexPoly._wrap(self.alg, _scale(self.terms, to_scalar(c)))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (ONE / to_scalar(c))

    def __eq__(self, other):
        if isinstance(other, VertexPoly):
            return self.alg is other.alg and self.terms == other.terms
        try:
            return self.terms == self._o(other).terms
        except (TypeError, VertexError):
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def d(self, j: int = 1) -> "VertexPoly":
        return VertexPoly._wrap(self.alg, self.alg.deriv_poly(self.terms, j))

    def D(self) -> "VertexPoly":
        return VertexPoly._wrap(self.alg, self.alg.D_poly(self.terms))

    def parity(self) -> int:
        ps = {self.alg.mparity(m) for m in self.terms}
        if len(ps) > 1:
            raise VertexError("inhomogeneous parity")
        return ps.pop() if ps else 0

    def charge(self) -> Optional[int]:
        cs = {self.alg.mcharge(m) for m in self.terms}
        return cs.pop() if len(cs) == 1 else None

    def weight(self):
        return hamiltonian_weight(self)

    def coeff(self, mono_text: str) -> LevelScalar:
        for m, c in self.terms.items():
            if self.alg.fmt_mono(m) == mono_text:
                return c
        return ZERO

    def map_coeffs(self, f: Callable[[LevelScalar], LevelScalar]) -> "VertexPoly":
        return VertexPoly(self.alg, {m: f(c) for m, c in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        alg = self.alg
        out = []
        for m in sorted(self.terms, key=alg.mono_key):
            sign, body = _fmt_coef_prefix(self.terms[m])
            mono = alg.fmt_mono(m)
            if mono == "1":
                txt = body[:-1] if body else "1"
            else:
                txt = body + mono
            out.append((sign, txt))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, txt in out[1:]:
            s += f" {sign} {txt}"
        return s

    __repr__ = __str__


def no_product(A: VertexPoly, B: VertexPoly) -> VertexPoly:
    """The normally ordered product :AB: in normal form."""
    alg = A.alg
    B = alg._coerce(B)
    return VertexPoly._wrap(alg, alg.no_product_poly(A.terms, B.terms))


def nprod(*factors: VertexPoly) -> VertexPoly:
    """Right-nested product :f1 :f2 ... fn::."""
    if not factors:
        raise VertexError("empty product")
    acc = factors[-1]
    for f in reversed(factors[:-1]):
        acc = no_product(f, acc)
    return acc


class LambdaPoly:
    """Polynomial in lambda with VertexPoly coefficients (lambda^n, not divided)."""

    __slots__ = ("alg", "coeffs")

    def __init__(self, alg: VertexAlgebra, coeffs: Mapping[int, Mapping[Mono, LevelScalar]]):
        self.alg = alg
        self.coeffs = {n: dict(P) for n, P in coeffs.items() if P}

    def __getitem__(self, n: int) -> VertexPoly:
        return VertexPoly._wrap(self.alg, dict(self.coeffs.get(n, {})))

    def degree(self) -> int:
        return max(self.coeffs, default=-1)

    def __eq__(self, other):
        if isinstance(other, LambdaPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __add__(self, other: "LambdaPoly"):
        out: LDict = {n: dict(P) for n, P in self.coeffs.items()}
        _acc_l(out, other.coeffs)
        return LambdaPoly(self.alg, out)

    def __sub__(self, other: "LambdaPoly"):
        out: LDict = {n: dict(P) for n, P in self.coeffs.items()}
        _acc_l(out, other.coeffs, _c(-1))
        return LambdaPoly(self.alg, out)

    def __mul__(self, c):
        c = to_scalar(c)
        return LambdaPoly(self.alg, {n: _scale(P, c) for n, P in self.coeffs.items()})

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def mode(self, j: int) -> VertexPoly:
        """The j-th product a_(j)b = j! * (coefficient of lambda^j)."""
        return self[j] * factorial(j)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for n in sorted(self.coeffs):
            v = str(self[n])
            lam = "" if n == 0 else ("lambda" if n == 1 else f"lambda^{n}")
            if not lam:
                parts.append(v)
            else:
                parts.append(f"({v})*{lam}")
        return " + ".join(parts)

    __repr__ = __str__

    def as_dict(self) -> Dict[str, str]:
        return {str(n): str(self[n]) for n in sorted(self.coeffs)}

    @staticmethod
    def from_poly(alg: VertexAlgebra, by_power: Mapping[int, object]) -> "LambdaPoly":
        return LambdaPoly(alg, {n: alg._coerce(v).terms for n, v in by_power.items()})


def lambda_bracket(A: VertexPoly, B: VertexPoly) -> LambdaPoly:
    """[A_lambda B] via the Wick formulas and the algebra's bracket table."""
    alg = A.alg
    B = alg._coerce(B)
    return LambdaPoly(alg, alg.bracket_poly(A.terms, B.terms))


def hamiltonian_weight(A: VertexPoly):
    """Common conformal weight of all monomials or the string 'inhomogeneous'."""
    ws = {A.alg.mweight(m) for m in A.terms}
    if len(ws) > 1:
        return "inhomogeneous"
    return ws.pop() if ws else Fraction(0)


# ---------------------------------------------------------------------------
# Lambda-polynomial helpers used by the axiom checks
# ---------------------------------------------------------------------------

def skew_of(alg: VertexAlgebra, L: LDict, pa: int, pb: int) -> LDict:
    """-(-1)^{pa pb} L(-lambda - d) as a lambda polynomial."""
    sign = -1 if pa * pb == 0 else 1
    out: LDict = {}
    for i, P in L.items():
        for j in range(i + 1):
            Q = alg.deriv_poly(P, j)
            if Q:
                _acc_l(out, {i - j: Q}, _c(comb(i, j) * (-1) ** i * sign))
    return out


def skew_residual(alg: VertexAlgebra, A: Mono, B: Mono) -> LDict:
    """[A_l B] + p [B_{-l-d} A]: zero iff skew-symmetry holds for the pair."""
    lhs = alg.bracket_mono(A, B)
    rhs = skew_of(alg, alg.bracket_mono(B, A), alg.mparity(B), alg.mparity(A))
    out = {n: dict(P) for n, P in lhs.items()}
    _acc_l(out, rhs, _c(-1))
    return out


def jacobi_residual(alg: VertexAlgebra, A: Mono, B: Mono, C: Mono) -> Dict[Tuple[int, int], PDict]:
    """[A_l[B_m C]] - p[B_m[A_l C]] - [[A_l B]_{l+m} C], keyed by (deg l, deg m)."""
    out: Dict[Tuple[int, int], PDict] = {}

    def add(key, P, c=None):
        tgt = out.setdefault(key, {})
        _acc(tgt, P, c)
        if not tgt:
            del out[key]

    for m, P in alg.bracket_mono(B, C).items():
        for l, Q in alg.bracket_poly({A: ONE}, P).items():
            add((l, m), Q)
    sign = -1 if alg.mparity(A) and alg.mparity(B) else 1
    for l, P in alg.bracket_mono(A, C).items():
        for m, Q in alg.bracket_poly({B: ONE}, P).items():
            add((l, m), Q, _c(-sign))
    for n, P in alg.bracket_mono(A, B).items():
        for r, Q in alg.bracket_poly(P, {C: ONE}).items():
            # lambda^n (lambda+mu)^r
            for t in range(r + 1):
                add((n + t, r - t), Q, _c(-comb(r, t)))
    return out


def axiom_check(alg: VertexAlgebra, weight_cutoff=None, monomials: Optional[Sequence[Mono]] = None):
    """Skew-symmetry and Jacobi on generators and (optionally) low-weight
    monomials.  Returns a :class:`superw.liealg.Report`."""
    from .liealg import Report
    rep = Report(f"lambda-bracket axioms: {alg.name}")
    elems: List[Mono] = [((g << SHIFT),) for g in range(len(alg.gens))]
    if weight_cutoff is not None:
        elems = [m for m in enumerate_monomials(alg, weight_cutoff) if m]
    if monomials is not None:
        elems = list(monomials)
    gens = [((g << SHIFT),) for g in range(len(alg.gens))]
    bad = []
    for A in elems:
        for B in elems:
            if skew_residual(alg, A, B):
                bad.append(f"({alg.fmt_mono(A)}, {alg.fmt_mono(B)})")
    rep.add("skew-symmetry", not bad, ", ".join(bad[:3]))
    bad = []
    for A in gens:
        for B in gens:
            for C in elems:
                if jacobi_residual(alg, A, B, C):
                    bad.append(f"({alg.fmt_mono(A)}, {alg.fmt_mono(B)}, {alg.fmt_mono(C)})")
    rep.add("Jacobi", not bad, ", ".join(bad[:3]))
    return rep


def enumerate_monomials(alg: VertexAlgebra, max_weight, min_weight=0,
                        gens: Optional[Sequence[int]] = None,
                        charge: Optional[int] = None,
                        exact_weight=None) -> List[Mono]:
    """All normal monomials with weight <= max_weight (or == exact_weight).

    Generators of weight <= 0 are excluded (they would give infinitely many).
    """
    max_weight = Fraction(max_weight)
    gl = list(range(len(alg.gens))) if gens is None else list(gens)
    letters = []
    for g in gl:
        w = alg.gens[g].weight
        if w <= 0:
            raise VertexError("enumeration needs positive weights")
        n = 0
        while w + n <= max_weight:
            letters.append(((g << SHIFT) | n, w + n, alg.gens[g].parity, alg.gens[g].charge))
            n += 1
    letters.sort()
    out: List[Mono] = []

    def rec(start, cur, wt, ch):
        if exact_weight is None or wt == exact_weight:
            if charge is None or ch == charge:
                if wt >= min_weight:
                    out.append(tuple(cur))
        for idx in range(start, len(letters)):
            x, w, p, c = letters[idx]
            if wt + w > max_weight:
                continue
            cur.append(x)
            rec(idx + 1 if p else idx, cur, wt + w, ch + c)
            cur.pop()

    rec(0, [], Fraction(0), 0)
    return out


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(:|\+|-|\*|\(|\)|d\d*\(|[A-Za-z_][A-Za-z0-9_\[\]\^{}.']*|\d+(?:/\d+)?)")


def parse_vertex(alg: VertexAlgebra, text: str) -> VertexPoly:
    """Parse the canonical text form, e.g. ``(k+1)*:J[Hb] dJ[Hb]: + 2*d2(Phi[e])``.

    Scalars use the grammar of :func:`superw.scalar.parse_scalar` and must be
    a plain integer/fraction or parenthesized.
    """
    s = text.strip()
    pos = 0
    total = alg.vacuum(0)

    def err(msg):
        raise VertexError(f"{msg} at position {pos} in {text!r}")

    def skip():
        nonlocal pos
        while pos < len(s) and s[pos].isspace():
            pos += 1

    def read_paren():
        nonlocal pos
        depth, start = 0, pos
        while pos < len(s):
            if s[pos] == "(":
                depth += 1
            elif s[pos] == ")":
                depth -= 1
                if depth == 0:
                    pos += 1
                    return s[start + 1:pos - 1]
            pos += 1
        err("unbalanced parenthesis")

    def read_letter():
        nonlocal pos
        skip()
        m = re.match(r"d(\d*)\(", s[pos:])
        if m:
            n = int(m.group(1) or 1)
            pos += m.end()
            inner = read_letter()
            skip()
            if pos >= len(s) or s[pos] != ")":
                err("expected ')'")
            pos += 1
            return inner.d(n)
        m = re.match(r"[A-Za-z_][A-Za-z0-9_\[\]\^{}.']*", s[pos:])
        if not m:
            err("expected generator")
        name = m.group(0)
        if name not in alg.index:
            err(f"unknown generator {name!r}")
        pos += m.end()
        return alg.gen(name)

    def read_factor():
        nonlocal pos
        skip()
        if pos < len(s) and s[pos] == ":":
            pos += 1
            fs = []
            while True:
                skip()
                if pos < len(s) and s[pos] == ":":
                    pos += 1
                    break
                if pos >= len(s):
                    err("unterminated ':'")
                fs.append(read_letter())
            return nprod(*fs)
        if pos < len(s) and s[pos] == "1" and (pos + 1 == len(s) or not s[pos + 1].isdigit()):
            pos += 1
            return alg.vacuum(1)
        return read_letter()

    first = True
    while True:
        skip()
        if pos >= len(s):
            if first:
                err("empty expression")
            break
        sign = 1
        if s[pos] in "+-":
            sign = -1 if s[pos] == "-" else 1
            pos += 1
            skip()
        elif not first:
            err("expected '+' or '-'")
        first = False
        coef = ONE
        if pos < len(s) and s[pos] == "(":
            coef = parse_scalar(read_paren(), alg.session)
            skip()
            if pos < len(s) and s[pos] == "*":
                pos += 1
            else:
                total = total + alg.vacuum(coef * sign)
                continue
        else:
            m = re.match(r"\d+(/\d+)?", s[pos:])
            if m and (pos + m.end() < len(s) and s[pos + m.end()] == "*"):
                coef = parse_scalar(m.group(0))
                pos += m.end() + 1
            elif m and (pos + m.end() == len(s) or s[pos + m.end()] in " +-"):
                coef = parse_scalar(m.group(0))
                pos += m.end()
                total = total + alg.vacuum(coef * sign)
                continue
        total = total + read_factor() * (coef * sign)
    return total
