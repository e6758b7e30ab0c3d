"""Sparse exact linear algebra over any field whose elements support
``+ - * /`` and truthiness-as-nonzero (gmpy2 mpq, GaussianRational,
LevelScalar).

Rows and vectors are dicts ``{column: value}`` with no zero entries.
"""
from __future__ import annotations

from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from gmpy2 import mpq

Vec = Dict[Hashable, object]


def vadd(u: Vec, v: Vec, c=1) -> Vec:
    """Return u + c*v."""
    out = dict(u)
    for key, x in v.items():
        y = out.get(key)
        z = x * c if y is None else y + x * c
        if z:
            out[key] = z
        else:
            out.pop(key, None)
    return out


def vscale(u: Vec, c) -> Vec:
    if not c:
        return {}
    return {key: x * c for key, x in u.items()}


def rref(rows: Sequence[Vec], order: Sequence[Hashable]) -> Tuple[List[Vec], List[Hashable]]:
    """Reduced row echelon form with pivots chosen in the given column order."""
    pos = {c: i for i, c in enumerate(order)}
    work = [dict(r) for r in rows if r]
    pivots: List[Hashable] = []
    done: List[Vec] = []
    for col in order:
        pick = None
        for idx, r in enumerate(work):
            if col in r:
                if pick is None or len(r) < len(work[pick]):
                    pick = idx
        if pick is None:
            continue
        prow = work.pop(pick)
        piv = prow[col]
        inv = mpq(1, piv) if isinstance(piv, int) else 1 / piv
        prow = {key: x * inv for key, x in prow.items()}
        nxt = []
        for r in work:
            c = r.get(col)
            if c:
                r = vadd(r, prow, -c)
            if r:
                nxt.append(r)
        work = nxt
        for i, r in enumerate(done):
            c = r.get(col)
            if c:
                done[i] = vadd(r, prow, -c)
        done.append(prow)
        pivots.append(col)
    if work:
        missing = {c for r in work for c in r if c not in pos}
        raise ValueError(f"columns outside the given order: {sorted(map(str, missing))}")
    return done, pivots


def rank(rows: Sequence[Vec], order: Sequence[Hashable]) -> int:
    return len(rref(rows, order)[1])


def nullspace(columns: Dict[Hashable, Vec], order: Sequence[Hashable]) -> List[Vec]:
    """Kernel of the linear map sending basis vector j to ``columns[j]``.

    ``order`` lists the domain basis; the returned basis is echelonized so that
    each vector has coefficient 1 on a distinct free column, free columns being
    taken from the *end* of ``order``.  Deterministic.
    """
    # transpose: rows indexed by target coordinates
    trows: Dict[Hashable, Vec] = {}
    for j in order:
        for t, x in columns.get(j, {}).items():
            trows.setdefault(t, {})[j] = x
    rev = list(reversed(order))
    red, piv = rref(list(trows.values()), list(order))
    pivset = set(piv)
    free = [j for j in order if j not in pivset]
    one = mpq(1)
    for r in red:
        for x in r.values():
            one = x / x
            break
        break
    basis = []
    for fcol in free:
        v = {fcol: one}
        for r, p in zip(red, piv):
            c = r.get(fcol)
            if c:
                v[p] = -c
        basis.append(v)
    # echelonize the kernel basis in the reverse order for a canonical answer
    if basis:
        red2, _ = rref(basis, rev)
        return red2
    return []


def solve(columns: Dict[Hashable, Vec], order: Sequence[Hashable], target: Vec) -> Optional[Vec]:
    """Find x with sum_j x_j columns[j] = target, or None if inconsistent."""
    marker = object()
    trows: Dict[Hashable, Vec] = {}
    for j in order:
        for t, x in columns.get(j, {}).items():
            trows.setdefault(t, {})[j] = x
    for t, x in target.items():
        trows.setdefault(t, {})[marker] = x
    red, piv = rref(list(trows.values()), list(order) + [marker])
    if marker in piv:
        return None
    sol = {}
    for r, p in zip(red, piv):
        c = r.get(marker)
        if c:
            sol[p] = c
    return sol


def in_span(vectors: Sequence[Vec], target: Vec) -> bool:
    cols = {i: v for i, v in enumerate(vectors)}
    return solve(cols, list(range(len(vectors))), target) is not None
