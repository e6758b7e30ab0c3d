from fractions import Fraction

import pytest

from superw.env import (AD_DISPLAYS, adjoint_action, character, check_bridge,
                        check_character, check_ghost_center, check_homology_complex,
                        check_lie_complex, check_lie_map, check_takiff, finite_example,
                        finite_w_invariants, ghost_center, is_invariant, level_map,
                        quotient_product, scaling_map, takiff, takiff_envelope)
from superw.liealg import builtin
from superw.scalar import I, to_scalar


@pytest.fixture(scope="module")
def ex():
    return finite_example()


@pytest.mark.parametrize("name", ["osp12", "sl21"])
def test_takiff_and_character(name):
    T = takiff(builtin(name))
    assert check_takiff(T).ok
    assert check_character(T, character(T, 1)).ok


def test_character_values(ex):
    T, chi = ex.T, ex.chi
    vals = {T.names[n]: chi(n) for n in T.nilpotent}
    assert vals == {"eb": -1, "e": 0, "Eb": 0, "E": 0}


@pytest.mark.parametrize("n, word, expected", AD_DISPLAYS)
def test_displayed_ad_computations(ex, n, word, expected):
    U, T = ex.U, ex.T
    got = adjoint_action(U, T.names.index(n), U.words(*word), ex.chi)
    want = U.zero()
    for w, c in expected.items():
        want = want + U.words(*w) * to_scalar(c)
    assert got == want


def test_invariant_space_dimension(ex):
    inv = ex.inv
    assert len(inv.nonscalar()) == 2
    assert len(finite_w_invariants(ex.U, ex.chi, cutoff=0).nonscalar()) == 0
    for b in inv.basis:
        assert is_invariant(ex.U, b, ex.chi)


def test_printed_w_F_is_the_invariant(ex):
    assert ex.printed_F == ex.w_F
    assert is_invariant(ex.U, ex.printed_F, ex.chi)


def test_closure_relation(ex):
    U, chi = ex.U, ex.chi
    sq = quotient_product(U, ex.w_Fbar, ex.w_Fbar, chi)
    assert (sq * 2 + ex.w_F * 2).is_zero()


@pytest.mark.parametrize("ell", [to_scalar(2), -I])
def test_scaling_maps_invariants(ex, ell):
    phi = scaling_map(ex.U, ell)
    chi_l = character(ex.T, to_scalar(ex.chi.ell) * ell)
    for b in ex.inv.nonscalar():
        assert is_invariant(ex.U, phi(b), chi_l)


def test_level_map_is_lie(ex):
    U4 = takiff_envelope(ex.T, level=4)
    assert not check_lie_map(ex.U, U4, level_map(ex.U, U4, Fraction(1, 2)))
    # wrong direction is detected
    assert check_lie_map(ex.U, U4, level_map(ex.U, U4, 2))


def test_ghost_center():
    rep = check_ghost_center(builtin("osp12"))
    assert rep.ok, rep.text()
    gc = ghost_center(builtin("osp12"), Fraction(1, 2))
    assert gc.T * gc.T == gc.C * 4 + Fraction(1, 4)


@pytest.mark.parametrize("name", ["osp12", "sl21"])
def test_complexes_and_bridge(name):
    spec = builtin(name)
    T = takiff(spec)
    U = takiff_envelope(T, level=1)
    chi = character(T, 1)
    rep, coh = check_lie_complex(U, chi)
    assert rep.ok, rep.text()
    assert check_homology_complex(U).ok
    assert check_bridge(spec).ok
