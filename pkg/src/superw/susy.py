"""N=1 supersymmetric layer on top of :mod:`superw.vertex`.

Every SUSY generator comes as a pair (a, Da) of ordinary generators with
``D(a) = Da`` and ``D(Da) = d(a)``.  A Lambda-bracket

    [a_Lambda b] = [Da_lambda b] + chi [a_lambda b],   chi^2 = -lambda,

is stored as its four lambda-bracket components so the non-SUSY engine does
all rewriting.  For generators a, b with parities p(a), p(b):

    [a_lambda Db]  = (-1)^{p(a)}   (D[a_lambda b] - [Da_lambda b])
    [Da_lambda Db] = (-1)^{p(a)+1} (D[Da_lambda b] + lambda [a_lambda b])

which follow from D being an odd derivation of every n-th product.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from .liealg import AlgebraSpec, Report
from .scalar import K, LevelScalar, ONE, ZERO, to_scalar, I as SQRT_M1
from .vertex import (LambdaPoly, VertexAlgebra, VertexError, VertexPoly, lambda_bracket,
                     _acc, _acc_l, _c)

__all__ = [
    "LambdaSuperPoly", "add_susy_pair", "set_Lambda", "Lambda_bracket", "D",
    "check_superconformal", "affine_susy", "twist_check",
]


class LambdaSuperPoly:
    """part0 + chi * part1, each a LambdaPoly."""

    __slots__ = ("part0", "part1")

    def __init__(self, part0: LambdaPoly, part1: LambdaPoly):
        self.part0 = part0
        self.part1 = part1

    def __eq__(self, other):
        return (isinstance(other, LambdaSuperPoly) and self.part0 == other.part0
                and self.part1 == other.part1)

    def __sub__(self, other):
        return LambdaSuperPoly(self.part0 - other.part0, self.part1 - other.part1)

    def __add__(self, other):
        return LambdaSuperPoly(self.part0 + other.part0, self.part1 + other.part1)

    def __mul__(self, c):
        return LambdaSuperPoly(self.part0 * c, self.part1 * c)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.part0.is_zero() and self.part1.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        a, b = str(self.part0), str(self.part1)
        if b == "0":
            return a
        if a == "0":
            return f"chi*({b})"
        return f"{a} + chi*({b})"

    __repr__ = __str__

    def as_dict(self):
        return {"chi^0": self.part0.as_dict(), "chi^1": self.part1.as_dict()}


def add_susy_pair(alg: VertexAlgebra, name: str, dname: str, parity: int, weight,
                  charge: int = 0) -> Tuple[VertexPoly, VertexPoly]:
    """Add generators (a, Da) with p(Da) = p(a) + 1 and weight(Da) = weight(a) + 1/2."""
    a = alg.add_generator(name, parity, weight, charge)
    b = alg.add_generator(dname, parity + 1, Fraction(weight) + Fraction(1, 2), charge)
    alg.set_dpartner(name, dname)
    return a, b


def D(A: VertexPoly) -> VertexPoly:
    """The odd derivation D (D^2 = d)."""
    return A.D()


def _partner_name(alg: VertexAlgebra, name: str) -> str:
    g = alg.index[name]
    h, shift = alg.dpartner[g]
    if shift != 0:
        raise VertexError(f"{name} is the D-image of its pair; pass the base generator")
    return alg.gens[h].name


def set_Lambda(alg: VertexAlgebra, a: str, b: str,
               part0: Mapping[int, object], part1: Mapping[int, object]) -> None:
    """Record [a_Lambda b] = part0(lambda) + chi*part1(lambda) for base generators a, b.

    All four lambda-brackets between {a, Da} and {b, Db} are derived and
    stored.  Coefficients must lie in the span of SUSY-paired generators.
    """
    Da, Db = _partner_name(alg, a), _partner_name(alg, b)
    pa = alg.gens[alg.index[a]].parity
    L0 = {n: alg._coerce(v).terms for n, v in part0.items()}
    L1 = {n: alg._coerce(v).terms for n, v in part1.items()}

    def dmap(L):
        return {n: alg.D_poly(P) for n, P in L.items()}

    # [a_l Db] = (-1)^{pa} (D L1 - L0)
    ab: Dict[int, dict] = {}
    _acc_l(ab, dmap(L1))
    _acc_l(ab, L0, _c(-1))
    if pa:
        ab = {n: {m: -c for m, c in P.items()} for n, P in ab.items()}
    # [Da_l Db] = (-1)^{pa+1} (D L0 + lambda L1)
    dd: Dict[int, dict] = {}
    _acc_l(dd, dmap(L0))
    _acc_l(dd, L1, shift=1)
    if not pa:
        dd = {n: {m: -c for m, c in P.items()} for n, P in dd.items()}

    def put(x, y, L):
        alg._table[(alg.index[x], alg.index[y])] = {n: dict(P) for n, P in L.items() if P}

    put(a, b, L1)
    put(Da, b, L0)
    put(a, Db, ab)
    put(Da, Db, dd)
    alg._reset_caches()


def Lambda_bracket(A: VertexPoly, B: VertexPoly) -> LambdaSuperPoly:
    """[A_Lambda B] = [DA_lambda B] + chi [A_lambda B]."""
    return LambdaSuperPoly(lambda_bracket(A.D(), B), lambda_bracket(A, B))


def check_superconformal(tau: VertexPoly, c=None) -> Tuple[Report, Optional[LevelScalar]]:
    """Check [tau_Lambda tau] = (2d + 3 lambda + chi D) tau + lambda^2 chi c/3
    and that Dtau/2 is a conformal vector of central charge c.

    Returns the report and the extracted central charge (or None).
    """
    alg = tau.alg
    rep = Report("superconformal vector check")
    sb = Lambda_bracket(tau, tau)
    Dt = tau.D()
    # chi-free part: [Dtau_l tau] = 2 d tau + 3 lambda tau
    exp0 = LambdaPoly(alg, {0: (tau.d() * 2).terms, 1: (tau * 3).terms})
    r0 = sb.part0 - exp0
    rep.add("[Dtau_lambda tau] = (2d + 3 lambda) tau", r0.is_zero(), str(r0) if r0 else "")
    # chi part: [tau_l tau] = D tau + lambda^2 c/3
    p1 = sb.part1
    rest = p1 - LambdaPoly(alg, {0: Dt.terms})
    c_found = None
    extra = {n: P for n, P in rest.coeffs.items() if n != 2}
    lam2 = rest.coeffs.get(2, {})
    ok = not extra and set(lam2) <= {()}
    if ok:
        c_found = lam2.get((), ZERO) * 3
    if c is not None and ok:
        ok = c_found == to_scalar(c)
    rep.add("[tau_lambda tau] = D tau + lambda^2 c/3", ok, "" if ok else str(rest))
    L = Dt * Fraction(1, 2)
    lb = lambda_bracket(L, L)
    exp = LambdaPoly(alg, {0: L.d().terms, 1: (L * 2).terms})
    r = lb - exp
    ok2 = set(r.coeffs) <= {3} and set(r.coeffs.get(3, {})) <= {()}
    if ok2 and c_found is not None:
        ok2 = r.coeffs.get(3, {}).get((), ZERO) * 12 == c_found
    rep.add("D tau / 2 is conformal with the same c", ok2, "" if ok2 else str(r))
    return rep, c_found


# ---------------------------------------------------------------------------
# SUSY affine vertex algebras
# ---------------------------------------------------------------------------

def bar(name: str) -> str:
    return f"{name}b"


def dbar(name: str) -> str:
    return f"D{name}b"


def affine_susy(spec: AlgebraSpec, level=None, convention: str = "standard",
                weights: Optional[Mapping[int, Fraction]] = None,
                prefix: str = "") -> VertexAlgebra:
    """SUSY affine vertex algebra with generators ``<x>b`` and ``D<x>b``.

    ``level`` is the constant in front of chi (a,b); default k + h^vee.
    ``convention='standard'``:  [a_Lambda b] = (-1)^{p(a)(p(b)+1)} [a,b] + chi (a|b) level;
    ``convention='nosign'``:    [a_Lambda b] = (-1)^{p(a)} ([a,b] + chi (a|b) level).
    """
    if level is None:
        level = K + spec.dual_coxeter
    level = to_scalar(level)
    alg = VertexAlgebra(f"V({spec.name}bar)/{convention}")
    n = spec.dim
    for i in range(n):
        w = Fraction(1, 2) if weights is None else weights[i]
        add_susy_pair(alg, prefix + bar(spec.names[i]), prefix + dbar(spec.names[i]),
                      spec.parity[i] + 1, w)
    for i in range(n):
        for j in range(i, n):
            br = spec.bracket({i: 1}, {j: 1})
            pa, pb = spec.parity[i], spec.parity[j]
            if convention == "standard":
                s0 = (-1) ** (pa * (pb + 1))
                s1 = 1
            elif convention == "nosign":
                s0 = s1 = (-1) ** pa
            else:
                raise ValueError(f"unknown convention {convention!r}")
            part0 = alg.vacuum(0)
            for l, c in br.items():
                part0 = part0 + alg.gen(prefix + bar(spec.names[l])) * (s0 * to_scalar(c))
            fm = spec.form({i: 1}, {j: 1})
            part1 = {0: level * fm * s1} if fm else {}
            set_Lambda(alg, prefix + bar(spec.names[i]), prefix + bar(spec.names[j]),
                       {0: part0} if part0 else {}, part1)
    return alg


def twist_check(spec: AlgebraSpec) -> Report:
    """The map a -> i^{p(a)} a (and Da likewise) carries the 'nosign' table
    onto the 'standard' table: [phi a_Lambda phi b]_std = phi([a_Lambda b]_nosign)."""
    rep = Report(f"sqrt(-1) twist between affine conventions: {spec.name}")
    std = affine_susy(spec, convention="standard")
    nos = affine_susy(spec, convention="nosign")
    factor = [SQRT_M1 if p else ONE for p in spec.parity]
    bad = []
    n = spec.dim
    for i in range(n):
        for j in range(n):
            for di in (0, 1):
                for dj in (0, 1):
                    ni = (dbar if di else bar)(spec.names[i])
                    nj = (dbar if dj else bar)(spec.names[j])
                    lhs = lambda_bracket(std.gen(ni), std.gen(nj)) * (factor[i] * factor[j])
                    raw = lambda_bracket(nos.gen(ni), nos.gen(nj))
                    # apply phi to the result, transported to std generators
                    mapped: Dict[int, dict] = {}
                    for deg, P in raw.coeffs.items():
                        Q = {}
                        for m, c in P.items():
                            f = ONE
                            for x in m:
                                g = x >> 6
                                f = f * factor[g // 2]
                            Q[m] = c * f
                        mapped[deg] = Q
                    rhs = LambdaPoly(std, mapped)
                    if lhs != rhs:
                        bad.append(f"({ni},{nj})")
    rep.add("table-level twist identity", not bad, ", ".join(bad[:4]))
    return rep
