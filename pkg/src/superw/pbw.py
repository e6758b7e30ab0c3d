"""PBW normal forms in enveloping algebras of (nonlinear) Lie superalgebras.

A word is a tuple of generator indices.  Normal words are non-decreasing with
no odd index repeated; the rewriting rule is

    ... a b ...  ->  (-1)^{p(a)p(b)} ... b a ...  +  ... [a, b] ...   (a > b)
    ... x x ...  ->  1/2 ... [x, x] ...                               (x odd)

where ``[a, b]`` is supplied by the subclass as a combination of words.  The
rewriting terminates whenever brackets lower a filtration, which holds for
every algebra used here.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .scalar import LevelScalar, ONE, to_scalar

Word = Tuple[int, ...]
Terms = Dict[Word, LevelScalar]

HALF = to_scalar(Fraction(1, 2))


def acc(out: Terms, P: Mapping[Word, LevelScalar], c=None) -> None:
    """out += c * P, dropping zeros."""
    for w, x in P.items():
        y = x if c is None else x * c
        z = out.get(w)
        z = y if z is None else z + y
        if z:
            out[w] = z
        else:
            out.pop(w, None)


class PBWElement:
    __slots__ = ("A", "terms")

    def __init__(self, A: "PBWAlgebra", terms: Mapping[Word, LevelScalar]):
        self.A = A
        self.terms = {w: to_scalar(c) for w, c in terms.items() if c}

    # Zhu code refers to the parent algebra as Z
    @property
    def Z(self) -> "PBWAlgebra":
        return self.A

    def _o(self, other) -> "PBWElement":
        if isinstance(other, PBWElement):
            return other
        return self.A.scalar(other)

    def __add__(self, other):
        out = dict(self.terms)
        acc(out, self._o(other).terms)
        return PBWElement(self.A, out)

    __radd__ = __add__

    def __neg__(self):
        return PBWElement(self.A, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._o(other))

    def __rsub__(self, other):
        return self._o(other) - self

    def __mul__(self, other):
        if isinstance(other, PBWElement):
            return self.A.mul(self, other)
        c = to_scalar(other)
        return PBWElement(self.A, {w: x * c for w, x in self.terms.items()})

    def __rmul__(self, other):
        c = to_scalar(other)
        return PBWElement(self.A, {w: c * x for w, x in self.terms.items()})

    def __pow__(self, n: int):
        out = self.A.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, PBWElement):
            other = self.A.scalar(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def parity(self) -> Optional[int]:
        ps = {self.A.wparity(w) for w in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=0)

    def constant(self) -> LevelScalar:
        return self.terms.get((), to_scalar(0))

    def __str__(self):
        return self.A.fmt(self.terms)

    __repr__ = __str__


class PBWAlgebra:
    """Base class; subclasses implement :meth:`bracket_gens`."""

    def __init__(self, names: Sequence[str], parity: Sequence[int], label: str = "U"):
        self.names = list(names)
        self.par = [int(p) % 2 for p in parity]
        self.n = len(self.names)
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.label = label
        self._br: Dict[Tuple[int, int], Terms] = {}
        self._norm: Dict[Word, Terms] = {}

    # subclasses ------------------------------------------------------------
    def compute_bracket(self, g: int, h: int) -> Terms:
        raise NotImplementedError

    def bracket_gens(self, g: int, h: int) -> Terms:
        r = self._br.get((g, h))
        if r is None:
            r = self.compute_bracket(g, h)
            self._br[(g, h)] = r
        return r

    # construction -------------------------------------------------------------
    def element(self, terms: Mapping[Word, object]) -> PBWElement:
        return PBWElement(self, terms)

    def scalar(self, c) -> PBWElement:
        c = to_scalar(c)
        return PBWElement(self, {(): c} if c else {})

    def zero(self) -> PBWElement:
        return PBWElement(self, {})

    def one(self) -> PBWElement:
        return self.scalar(1)

    def gen(self, name) -> PBWElement:
        i = self.index[name] if isinstance(name, str) else name
        return PBWElement(self, {(i,): ONE})

    def __getitem__(self, name: str) -> PBWElement:
        return self.gen(name)

    def words(self, *names: str) -> PBWElement:
        out = self.one()
        for nm in names:
            out = out * self.gen(nm)
        return out

    def wparity(self, w: Word) -> int:
        return sum(self.par[g] for g in w) % 2

    def word_name(self, w: Word) -> str:
        return " ".join(self.names[g] for g in w) if w else "1"

    def fmt(self, terms: Mapping[Word, LevelScalar]) -> str:
        if not terms:
            return "0"
        from .vertex import _fmt_coef_prefix
        parts = []
        for w in sorted(terms, key=lambda w: (len(w), w)):
            c = terms[w]
            if not w:
                s = str(c)
                parts.append(("-", s[1:]) if s.startswith("-") and " " not in s else ("+", s))
                continue
            sign, pre = _fmt_coef_prefix(c)
            parts.append((sign, pre + self.word_name(w)))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    # normal form --------------------------------------------------------------
    def normal_word(self, w: Word) -> Terms:
        r = self._norm.get(w)
        if r is not None:
            return r
        r = None
        for i in range(len(w) - 1):
            a, b = w[i], w[i + 1]
            if a > b or (a == b and self.par[a]):
                pre, post = w[:i], w[i + 2:]
                r = {}
                if a == b:
                    for u, c in self.bracket_gens(a, a).items():
                        acc(r, self.normal_word(pre + u + post), c * HALF)
                else:
                    sgn = -1 if self.par[a] and self.par[b] else 1
                    acc(r, self.normal_word(pre + (b, a) + post), to_scalar(sgn))
                    for u, c in self.bracket_gens(a, b).items():
                        acc(r, self.normal_word(pre + u + post), c)
                break
        if r is None:
            r = {w: ONE}
        self._norm[w] = r
        return r

    def normalize(self, terms: Mapping[Word, LevelScalar]) -> PBWElement:
        out: Terms = {}
        for w, c in terms.items():
            acc(out, self.normal_word(tuple(w)), to_scalar(c))
        return PBWElement(self, out)

    def mul(self, A: PBWElement, B: PBWElement) -> PBWElement:
        out: Terms = {}
        for u, x in A.terms.items():
            for v, y in B.terms.items():
                acc(out, self.normal_word(u + v), x * y)
        return PBWElement(self, out)

    def sbracket(self, A: PBWElement, B: PBWElement) -> PBWElement:
        """Supercommutator, bilinear over homogeneous components."""
        out = dict(self.mul(A, B).terms)
        for u, x in A.terms.items():
            for v, y in B.terms.items():
                sgn = -1 if self.wparity(u) and self.wparity(v) else 1
                acc(out, self.normal_word(v + u), -x * y * to_scalar(sgn))
        return PBWElement(self, out)

    # maps -----------------------------------------------------------------------
    def derivation(self, on_gens: Mapping[int, PBWElement], odd: bool = True) -> Callable[[PBWElement], PBWElement]:
        """Extend a map on generators to a derivation (odd by default)."""
        cache: Dict[Word, PBWElement] = {}

        def on_word(w: Word) -> PBWElement:
            r = cache.get(w)
            if r is not None:
                return r
            out = self.zero()
            for i, g in enumerate(w):
                img = on_gens.get(g)
                if not img:
                    continue
                pre = PBWElement(self, {w[:i]: ONE})
                post = PBWElement(self, {w[i + 1:]: ONE})
                sgn = -1 if odd and self.wparity(w[:i]) else 1
                out = out + pre * img * post * sgn
            cache[w] = out
            return out

        def apply(A: PBWElement) -> PBWElement:
            out = self.zero()
            for w, c in A.terms.items():
                out = out + on_word(w) * c
            return out

        return apply

    def homomorphism(self, images: Mapping[int, PBWElement], target: "PBWAlgebra") -> Callable[[PBWElement], PBWElement]:
        cache: Dict[Word, PBWElement] = {}

        def on_word(w: Word) -> PBWElement:
            if w not in cache:
                out = target.one()
                for g in w:
                    out = out * images[g]
                cache[w] = out
            return cache[w]

        def apply(A: PBWElement) -> PBWElement:
            out = target.zero()
            for w, c in A.terms.items():
                out = out + on_word(w) * c
            return out

        return apply

    def basis_words(self, letters: Sequence[int], max_degree: int) -> List[Word]:
        """Normal words of length <= max_degree in the given letters."""
        letters = sorted(letters)
        out: List[Word] = [()]
        frontier: List[Word] = [()]
        for _ in range(max_degree):
            nxt = []
            for w in frontier:
                for g in letters:
                    if w and (g < w[-1] or (g == w[-1] and self.par[g])):
                        continue
                    nxt.append(w + (g,))
            out.extend(nxt)
            frontier = nxt
        return out
