"""Exact scalars: Gaussian rationals, rational functions of the level k,
and at most one adjoined square root s with s*s = q(k).

Polynomials are tuples of coefficients (lowest degree first).  A coefficient
is a ``gmpy2.mpq`` when real and a :class:`GaussianRational` otherwise, so the
common purely rational case stays on the fast gmpy2 path.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

from gmpy2 import mpq, is_square, isqrt

__all__ = [
    "GaussianRational", "LevelScalar", "RootSession", "ScalarError",
    "adjoin_root", "to_scalar", "parse_scalar", "evaluate", "normalize",
    "ZERO", "ONE", "I", "K",
]


class ScalarError(ArithmeticError):
    """Raised on division by zero, poles, or incompatible root sessions."""


# --------------------------------------------------------------------------
# Gaussian rationals
# --------------------------------------------------------------------------

def _q(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


class GaussianRational:
    """An element re + im*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _q(re)
        self.im = _q(im)

    @staticmethod
    def of(x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        return GaussianRational(x, 0)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return _fmt_coeff(_canon(self))

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __eq__(self, other):
        if isinstance(other, LevelScalar):
            return other == self
        try:
            o = GaussianRational.of(_canon(other))
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, LevelScalar):
            return NotImplemented
        o = GaussianRational.of(_canon(other))
        return _canon(GaussianRational(self.re + o.re, self.im + o.im))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, LevelScalar):
            return NotImplemented
        o = GaussianRational.of(_canon(other))
        return _canon(GaussianRational(self.re - o.re, self.im - o.im))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LevelScalar):
            return NotImplemented
        o = GaussianRational.of(_canon(other))
        return _canon(GaussianRational(self.re * o.re - self.im * o.im,
                                       self.re * o.im + self.im * o.re))

    __rmul__ = __mul__

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if n == 0:
            raise ScalarError("division by zero")
        return _canon(GaussianRational(self.re / n, -self.im / n))

    def __truediv__(self, other):
        if isinstance(other, LevelScalar):
            return NotImplemented
        return self * _inv_coeff(_canon(other))

    def __rtruediv__(self, other):
        return _canon(other) * self.inverse()

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def as_fractions(self) -> Tuple[Fraction, Fraction]:
        return (Fraction(int(self.re.numerator), int(self.re.denominator)),
                Fraction(int(self.im.numerator), int(self.im.denominator)))


def _canon(x):
    """Canonical coefficient: mpq when real, GaussianRational otherwise."""
    if isinstance(x, GaussianRational):
        return x.re if x.im == 0 else x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Fraction)) or type(x).__name__ == "mpz":
        return _q(x)
    if type(x) is type(mpq(0)):
        return x
    raise TypeError(f"not a coefficient: {x!r}")


def _inv_coeff(c):
    if isinstance(c, GaussianRational):
        return c.inverse()
    if c == 0:
        raise ScalarError("division by zero")
    return 1 / c


def _fmt_rational(r: mpq) -> str:
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def _fmt_coeff(c) -> str:
    """Print a canonical coefficient; compound values get parentheses."""
    if not isinstance(c, GaussianRational):
        return _fmt_rational(c)
    re, im = c.re, c.im
    if im == 1:
        ims = "i"
    elif im == -1:
        ims = "-i"
    elif im.denominator == 1:
        ims = f"{im.numerator}*i"
    else:
        ims = f"({_fmt_rational(im)})*i"
    if re == 0:
        return ims
    if ims.startswith("-"):
        return f"({_fmt_rational(re)} - {ims[1:]})"
    return f"({_fmt_rational(re)} + {ims})"


# --------------------------------------------------------------------------
# Polynomials in k
# --------------------------------------------------------------------------

Poly = Tuple
P0: Poly = ()
P1: Poly = (mpq(1),)


def _trim(c: list) -> Poly:
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def padd(a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    c = list(a)
    for i, x in enumerate(b):
        c[i] = c[i] + x
    return _trim(c)


def pneg(a: Poly) -> Poly:
    return tuple(-x for x in a)


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pscale(a: Poly, c) -> Poly:
    if not c:
        return P0
    return _trim([x * c for x in a])


def pmul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return P0
    if len(a) == 1:
        return pscale(b, a[0])
    if len(b) == 1:
        return pscale(a, b[0])
    c = [mpq(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            c[i + j] = c[i + j] + x * y
    return _trim(c)


def pdivmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    if not b:
        raise ScalarError("polynomial division by zero")
    if len(b) == 1:
        return pscale(a, _inv_coeff(b[0])), P0
    r = list(a)
    db = len(b) - 1
    inv = _inv_coeff(b[-1])
    if len(r) <= db:
        return P0, tuple(r)
    qc = [mpq(0)] * (len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i]
        if not c:
            continue
        c = c * inv
        qc[i - db] = c
        for j in range(db + 1):
            r[i - db + j] = r[i - db + j] - c * b[j]
    return _trim(qc), _trim(r[:db])


def pmonic(a: Poly) -> Poly:
    if not a:
        return a
    lc = a[-1]
    if lc == 1:
        return a
    return pscale(a, _inv_coeff(lc))


def pgcd(a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, pdivmod(a, b)[1]
    return pmonic(a)


def peval(a: Poly, x):
    acc = mpq(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


def ppow(a: Poly, n: int) -> Poly:
    r = P1
    for _ in range(n):
        r = pmul(r, a)
    return r


def as_poly(x) -> Poly:
    """Coerce a coefficient, sequence of coefficients, or LevelScalar to a poly."""
    if isinstance(x, str):
        x = parse_scalar(x)
    if isinstance(x, LevelScalar):
        if x.rnum or x.den != P1:
            raise ScalarError("not a polynomial in k")
        return x.num
    if isinstance(x, (list, tuple)):
        return _trim([_canon(c) for c in x])
    return _trim([_canon(x)])


def _poly_sqrt(q: Poly) -> Optional[Poly]:
    """Square root of q over Q when it exists (positive leading coefficient)."""
    if not q:
        return P0
    if len(q) % 2 == 0:
        return None
    if any(isinstance(c, GaussianRational) for c in q):
        return None
    lc = q[-1]
    if lc <= 0:
        return None
    n, d = int(lc.numerator), int(lc.denominator)
    if not (is_square(n) and is_square(d)):
        return None
    m = (len(q) - 1) // 2
    r = [mpq(0)] * (m + 1)
    r[m] = mpq(int(isqrt(n)), int(isqrt(d)))
    # match coefficients from the top down
    for t in range(m - 1, -1, -1):
        deg = m + t
        acc = q[deg]
        for i in range(t + 1, m + 1):
            j = deg - i
            if t < j <= m:
                acc -= r[i] * r[j]
        r[t] = acc / (2 * r[m])
    if pmul(tuple(r), tuple(r)) != q:
        return None
    return _trim(r)


# --------------------------------------------------------------------------
# LevelScalar
# --------------------------------------------------------------------------

def _reduce(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if not den:
        raise ScalarError("division by the zero rational function")
    if not num:
        return P0, P1
    if len(den) == 1:
        if den[0] == 1:
            return num, P1
        return pscale(num, _inv_coeff(den[0])), P1
    g = pgcd(num, den)
    if len(g) > 1:
        num = pdivmod(num, g)[0]
        den = pdivmod(den, g)[0]
    lc = den[-1]
    if lc != 1:
        inv = _inv_coeff(lc)
        num, den = pscale(num, inv), pscale(den, inv)
    return num, den


def _radd(a, b):
    (an, ad), (bn, bd) = a, b
    if not an:
        return b
    if not bn:
        return a
    if ad == bd:
        if ad == P1:
            return padd(an, bn), P1
        return _reduce(padd(an, bn), ad)
    return _reduce(padd(pmul(an, bd), pmul(bn, ad)), pmul(ad, bd))


def _rmul(a, b):
    (an, ad), (bn, bd) = a, b
    if not an or not bn:
        return P0, P1
    if ad == P1 and bd == P1:
        return pmul(an, bn), P1
    return _reduce(pmul(an, bn), pmul(ad, bd))


class LevelScalar:
    """num/den + s*rnum/rden with s*s = q(k); immutable and canonical."""

    __slots__ = ("num", "den", "rnum", "rden", "q", "_hash")

    def __init__(self, num: Poly = P0, den: Poly = P1, rnum: Poly = P0,
                 rden: Poly = P1, q: Optional[Poly] = None, *, _raw=False):
        if not _raw:
            num, den = _reduce(as_poly(num), as_poly(den))
            rnum, rden = _reduce(as_poly(rnum), as_poly(rden))
            if q is not None:
                q = as_poly(q)
            if rnum:
                if q is None:
                    raise ScalarError("root part requires a root session")
                root = _poly_sqrt(q)
                if root is not None:
                    num, den = _radd((num, den), _rmul((rnum, rden), (root, P1)))
                    rnum, rden = P0, P1
        if not rnum:
            q = None
        self.num, self.den, self.rnum, self.rden, self.q = num, den, rnum, rden, q
        self._hash = None

    # construction helpers ------------------------------------------------
    @classmethod
    def _mk(cls, a, b, q):
        """Build from two reduced (num, den) pairs without re-reducing."""
        if b[0] and q is not None:
            root = _poly_sqrt(q)
            if root is not None:
                a = _radd(a, _rmul(b, (root, P1)))
                b = (P0, P1)
        return cls(a[0], a[1], b[0], b[1], q, _raw=True)

    @classmethod
    def const(cls, c) -> "LevelScalar":
        c = _canon(c)
        return cls((c,) if c else P0, P1, _raw=True)

    @classmethod
    def k(cls) -> "LevelScalar":
        return cls((mpq(0), mpq(1)), P1, _raw=True)

    # predicates ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num and not self.rnum

    def __bool__(self):
        return not self.is_zero()

    def is_constant(self) -> bool:
        return not self.rnum and self.den == P1 and len(self.num) <= 1

    def constant_value(self):
        if not self.is_constant():
            raise ScalarError("not a constant")
        return self.num[0] if self.num else mpq(0)

    def is_rational_function(self) -> bool:
        return not self.rnum

    # arithmetic ------------------------------------------------------------
    def _pairs(self):
        return (self.num, self.den), (self.rnum, self.rden)

    @staticmethod
    def _join_q(a: "LevelScalar", b: "LevelScalar"):
        if a.q is None:
            return b.q
        if b.q is None or b.q == a.q:
            return a.q
        raise ScalarError("mixing scalars from different root sessions")

    def __add__(self, other):
        o = to_scalar(other)
        q = LevelScalar._join_q(self, o)
        a0, a1 = self._pairs()
        b0, b1 = o._pairs()
        return LevelScalar._mk(_radd(a0, b0), _radd(a1, b1), q)

    __radd__ = __add__

    def __neg__(self):
        return LevelScalar(pneg(self.num), self.den, pneg(self.rnum), self.rden,
                           self.q, _raw=True)

    def __sub__(self, other):
        return self + (-to_scalar(other))

    def __rsub__(self, other):
        return to_scalar(other) + (-self)

    def __mul__(self, other):
        if hasattr(other, "alg"):
            return NotImplemented
        o = to_scalar(other)
        if not o.rnum and not self.rnum:
            return LevelScalar(*_rmul((self.num, self.den), (o.num, o.den)), _raw=True)
        q = LevelScalar._join_q(self, o)
        a0, a1 = self._pairs()
        b0, b1 = o._pairs()
        c0 = _radd(_rmul(a0, b0), _rmul(_rmul(a1, b1), (q, P1)))
        c1 = _radd(_rmul(a0, b1), _rmul(a1, b0))
        return LevelScalar._mk(c0, c1, q)

    __rmul__ = __mul__

    def inverse(self) -> "LevelScalar":
        if self.is_zero():
            raise ScalarError("division by the zero rational function")
        if not self.rnum:
            return LevelScalar(*_reduce(self.den, self.num), _raw=True)
        a0, a1 = self._pairs()
        q = self.q
        nrm = _radd(_rmul(a0, a0), _rmul(_rmul(a1, a1), (pneg(q), P1)))
        if not nrm[0]:
            raise ScalarError("zero divisor in root session")
        ninv = _reduce(nrm[1], nrm[0])
        return LevelScalar._mk(_rmul(a0, ninv), _rmul((pneg(a1[0]), a1[1]), ninv), q)

    def __truediv__(self, other):
        return self * to_scalar(other).inverse()

    def __rtruediv__(self, other):
        return to_scalar(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("integer exponents only")
        if n < 0:
            return self.inverse() ** (-n)
        r, b = ONE, self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def conj_root(self) -> "LevelScalar":
        """Image under s -> -s."""
        return LevelScalar(self.num, self.den, pneg(self.rnum), self.rden, self.q, _raw=True)

    # comparison ------------------------------------------------------------
    def key(self):
        return (self.num, self.den, self.rnum, self.rden, self.q)

    def __eq__(self, other):
        try:
            o = to_scalar(other)
        except (TypeError, ScalarError):
            return NotImplemented
        return self.key() == o.key()

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(self.key())
        return h

    def __repr__(self):
        return f"LevelScalar({self})"

    def __str__(self):
        return format_scalar(self)

    def evaluate(self, k0):
        return evaluate(self, k0)


def to_scalar(x) -> LevelScalar:
    if isinstance(x, LevelScalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    return LevelScalar.const(x)


def normalize(x) -> LevelScalar:
    """Canonical form of anything coercible to a scalar."""
    if isinstance(x, LevelScalar):
        return LevelScalar(x.num, x.den, x.rnum, x.rden, x.q)
    return to_scalar(x)


ZERO = LevelScalar()
ONE = LevelScalar.const(1)
I = LevelScalar.const(GaussianRational(0, 1))
K = LevelScalar.k()


# --------------------------------------------------------------------------
# Sessions
# --------------------------------------------------------------------------

class RootSession:
    """Handle for a computation with s*s = q(k).

    Only one root may be adjoined per session: calling :meth:`adjoin_root`
    again with a different q is an error.
    """

    def __init__(self, q):
        q = as_poly(q)
        if not q:
            raise ScalarError("cannot adjoin the square root of 0")
        self.q = q
        self.s = LevelScalar(P0, P1, P1, P1, q)

    def adjoin_root(self, q) -> "RootSession":
        if as_poly(q) != self.q:
            raise ScalarError("a different square root is already adjoined")
        return self

    def parse(self, text: str) -> LevelScalar:
        return parse_scalar(text, self)

    def sqrt_of(self, x) -> LevelScalar:
        """Return c*s when x = c*c*q for a rational function c... up to sign.

        Only handles x a constant multiple of q times a square of a constant.
        """
        x = to_scalar(x)
        ratio = x / LevelScalar(self.q)
        if not ratio.is_constant():
            raise ScalarError("value is not a constant multiple of q")
        c = ratio.constant_value()
        if isinstance(c, GaussianRational) or c < 0:
            raise ScalarError("negative ratio")
        n, d = int(c.numerator), int(c.denominator)
        if not (is_square(n) and is_square(d)):
            raise ScalarError("ratio is not a rational square")
        return self.s * mpq(int(isqrt(n)), int(isqrt(d)))

    def __repr__(self):
        return f"RootSession(q={format_scalar(LevelScalar(self.q))})"


def adjoin_root(q) -> RootSession:
    """Open a scalar session with one adjoined square root of q(k)."""
    if isinstance(q, str):
        q = parse_scalar(q)
    return RootSession(q)


# --------------------------------------------------------------------------
# Evaluation
# --------------------------------------------------------------------------

def _rat_sqrt(v) -> Union[mpq, GaussianRational]:
    if isinstance(v, GaussianRational):
        raise ScalarError("q(k0) is not real")
    neg = v < 0
    a = -v if neg else v
    n, d = int(a.numerator), int(a.denominator)
    if not (is_square(n) and is_square(d)):
        raise ScalarError(f"q(k0) = {_fmt_rational(v)} is not a rational square")
    r = mpq(int(isqrt(n)), int(isqrt(d)))
    return GaussianRational(0, r) if neg else r


def evaluate(x, k0) -> GaussianRational:
    """Exact value at k = k0 (a rational); returns a Gaussian rational."""
    x = to_scalar(x)
    k0 = _q(Fraction(k0) if isinstance(k0, str) else k0)
    dv = peval(x.den, k0)
    if not dv:
        raise ScalarError(f"pole at k = {_fmt_rational(k0)}")
    val = peval(x.num, k0) * _inv_coeff(_canon(dv)) if x.num else mpq(0)
    if x.rnum:
        rd = peval(x.rden, k0)
        if not rd:
            raise ScalarError(f"pole at k = {_fmt_rational(k0)}")
        root = _rat_sqrt(_canon(peval(x.q, k0)))
        val = val + root * peval(x.rnum, k0) * _inv_coeff(_canon(rd))
    return GaussianRational.of(_canon(val))


# --------------------------------------------------------------------------
# Text form
# --------------------------------------------------------------------------

def _fmt_poly(p: Poly) -> str:
    if not p:
        return "0"
    parts = []
    for deg in range(len(p) - 1, -1, -1):
        c = p[deg]
        if not c:
            continue
        if isinstance(c, GaussianRational):
            neg = c.re < 0 or (c.re == 0 and c.im < 0)
        else:
            neg = c < 0
        mag = -c if neg else c
        if deg == 0:
            body = _fmt_coeff(mag)
        else:
            kp = "k" if deg == 1 else f"k^{deg}"
            if mag == 1:
                body = kp
            else:
                body = f"{_fmt_coeff(mag)}*{kp}"
        parts.append(("-" if neg else "+", body))
    out = ("-" + parts[0][1]) if parts[0][0] == "-" else parts[0][1]
    for sgn, body in parts[1:]:
        out += f" {sgn} {body}"
    return out


def _is_atomic(p: Poly) -> bool:
    return sum(1 for c in p if c) == 1 and not isinstance(p[-1], GaussianRational) \
        and (p[-1] > 0) and (len(p) == 1 or p[-1] == 1)


def _fmt_rf(num: Poly, den: Poly) -> str:
    ns = _fmt_poly(num)
    if den == P1:
        return ns
    if not _is_atomic(num) or "/" in ns:
        ns = f"({ns})"
    ds = _fmt_poly(den)
    if not (_is_atomic(den) and len(den) > 1):
        ds = f"({ds})"
    return f"{ns}/{ds}"


def format_scalar(x: LevelScalar) -> str:
    """Canonical text; parse_scalar(format_scalar(x)) == x."""
    main = _fmt_rf(x.num, x.den) if x.num else ""
    if not x.rnum:
        return main or "0"
    if x.rnum == P1 and x.rden == P1:
        rs = "s"
    elif x.rnum == (mpq(-1),) and x.rden == P1:
        rs = "-s"
    else:
        rs = f"({_fmt_rf(x.rnum, x.rden)})*s"
    if not main:
        return rs
    if rs.startswith("-"):
        return f"{main} - {rs[1:]}"
    return f"{main} + {rs}"


class _Parser:
    def __init__(self, text: str, session: Optional[RootSession]):
        self.t = text
        self.i = 0
        self.session = session

    def err(self, msg):
        raise ScalarError(f"{msg} at position {self.i} in {self.t!r}")

    def ws(self):
        while self.i < len(self.t) and self.t[self.i].isspace():
            self.i += 1

    def peek(self):
        self.ws()
        return self.t[self.i] if self.i < len(self.t) else ""

    def parse(self) -> LevelScalar:
        v = self.expr()
        if self.peek():
            self.err("unexpected character")
        return v

    def expr(self):
        if self.peek() in "+-":
            sign = self.t[self.i]
            self.i += 1
            v = self.term()
            v = -v if sign == "-" else v
        else:
            v = self.term()
        while self.peek() in ("+", "-") and self.peek():
            op = self.t[self.i]
            self.i += 1
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.power()
        while self.peek() in ("*", "/") and self.peek():
            op = self.t[self.i]
            self.i += 1
            w = self.unary()
            v = v * w if op == "*" else v / w
        return v

    def unary(self):
        if self.peek() == "-":
            self.i += 1
            return -self.unary()
        if self.peek() == "+":
            self.i += 1
            return self.unary()
        return self.power()

    def power(self):
        b = self.atom()
        if self.peek() == "^":
            self.i += 1
            self.ws()
            j = self.i
            neg = False
            if self.i < len(self.t) and self.t[self.i] == "-":
                neg = True
                self.i += 1
            while self.i < len(self.t) and self.t[self.i].isdigit():
                self.i += 1
            digits = self.t[j + (1 if neg else 0):self.i]
            if not digits:
                self.err("expected integer exponent")
            n = int(digits)
            b = b ** (-n if neg else n)
        return b

    def atom(self):
        c = self.peek()
        if c == "(":
            self.i += 1
            v = self.expr()
            if self.peek() != ")":
                self.err("expected ')'")
            self.i += 1
            return v
        if c.isdigit():
            j = self.i
            while self.i < len(self.t) and self.t[self.i].isdigit():
                self.i += 1
            return LevelScalar.const(int(self.t[j:self.i]))
        if c == "k":
            self.i += 1
            return K
        if c == "i":
            self.i += 1
            return I
        if c == "s":
            self.i += 1
            if self.session is None:
                self.err("'s' used without a root session")
            return self.session.s
        self.err("unexpected character" if c else "unexpected end of input")


def parse_scalar(text: str, session: Optional[RootSession] = None) -> LevelScalar:
    """Parse the text grammar: integers, i, k, s, + - * / ^ and parentheses."""
    return _Parser(text, session).parse()
