from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superw.scalar import K, to_scalar
from superw.vertex import (VertexAlgebra, VertexError, axiom_check, enumerate_monomials,
                           lambda_bracket, nprod, parse_vertex)


def heisenberg_fermion():
    V = VertexAlgebra("H+F")
    V.add_generator("a", 0, 1)
    V.add_generator("b", 0, 1)
    V.add_generator("psi", 1, Fraction(1, 2))
    V.set_bracket("a", "a", {1: 1})
    V.set_bracket("b", "b", {1: K})
    V.set_bracket("psi", "psi", {0: 1})
    return V


def test_sugawara_boson_has_c_one():
    V = heisenberg_fermion()
    a = V["a"]
    L = nprod(a, a) / 2
    lb = lambda_bracket(L, L)
    assert lb[0] == L.d()
    assert lb[1] == L * 2
    assert lb[2].is_zero()
    assert lb[3] == V.vacuum(Fraction(1, 12))


def test_fermion_virasoro_has_c_one_half():
    V = heisenberg_fermion()
    p = V["psi"]
    L = nprod(p.d(), p) / 2
    lb = lambda_bracket(L, L)
    assert lb[0] == L.d() and lb[1] == L * 2
    assert lb[3] == V.vacuum(Fraction(1, 24))       # c/12 with c = 1/2


def test_level_enters_symbolically():
    V = heisenberg_fermion()
    b = V["b"]
    L = nprod(b, b) / (2 * K)
    assert lambda_bracket(L, b)[1] == b
    assert lambda_bracket(L, L)[3] == V.vacuum(Fraction(1, 12))


def test_quasicommutativity_of_central_bracket():
    V = heisenberg_fermion()
    a, b = V["a"], V["b"]
    assert nprod(a, b) == nprod(b, a)


def test_odd_square_is_derivative_term():
    V = heisenberg_fermion()
    p = V["psi"]
    # :psi psi: = 0 for a free fermion whose bracket is a constant
    assert nprod(p, p).is_zero()


def test_axioms_on_low_weight_monomials():
    rep = axiom_check(heisenberg_fermion(), weight_cutoff=2)
    assert rep.ok, rep.text()


def test_broken_table_fails_jacobi():
    V = VertexAlgebra("bad")
    V.add_generator("x", 0, 1)
    V.add_generator("y", 0, 1)
    V.set_bracket("x", "y", {0: V["x"]})
    V.set_bracket("x", "x", {0: V["y"]})
    rep = axiom_check(V)
    assert not rep.ok


def test_parse_errors_carry_position():
    V = heisenberg_fermion()
    with pytest.raises(VertexError) as e:
        parse_vertex(V, "2*:a zz:")
    assert "position" in str(e.value)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(0, 6)), min_size=1, max_size=4))
def test_print_parse_roundtrip(terms):
    V = heisenberg_fermion()
    mons = [m for m in enumerate_monomials(V, 2)]
    X = V.vacuum(0)
    for c, i in terms:
        X = X + _mono(V, mons[i % len(mons)]) * (to_scalar(c) + K)
    assert parse_vertex(V, str(X)) == X


def _mono(V, m):
    from superw.vertex import VertexPoly
    return VertexPoly(V, {m: to_scalar(1)})


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8))
def test_skew_symmetry_on_monomials(i, j):
    V = heisenberg_fermion()
    mons = [m for m in enumerate_monomials(V, Fraction(5, 2)) if m]
    from superw.vertex import skew_residual
    assert not skew_residual(V, mons[i % len(mons)], mons[j % len(mons)])
