from fractions import Fraction

import pytest

from superw.brst import (apply_d0, build_complex, check_closure, check_d_squared,
                         cohomology_dimensions, cohomology_generators, miura, tau_data,
                         tau_inverse, tau_translate)
from superw.liealg import builtin
from superw.scalar import K


@pytest.mark.parametrize("name", ["osp12", "sl21"])
@pytest.mark.parametrize("flavor", ["nonsusy", "susy"])
def test_d_squared(name, flavor):
    rep = check_d_squared(build_complex(builtin(name), flavor, reduced=False))
    assert rep.ok, rep.text()
    assert len(rep.entries) == 4          # symbolic plus k = 1, 2, 5


@pytest.mark.parametrize("name", ["osp12", "sl21"])
@pytest.mark.parametrize("flavor", ["nonsusy", "susy"])
def test_building_block_closure(name, flavor):
    rep = check_closure(build_complex(builtin(name), flavor))
    assert rep.ok, rep.text()


def test_specialized_level_matches_substitution():
    spec = builtin("osp12")
    gen = build_complex(spec, "nonsusy", reduced=False)
    at2 = build_complex(spec, "nonsusy", level=2, reduced=False)
    for g in ("E", "e", "H", "Phi[e]"):
        a = apply_d0(gen, gen.raw[g])
        b = apply_d0(at2, at2.raw[g])
        assert {str(m) for m in a.terms} == {str(m) for m in b.terms}
        for m, c in a.terms.items():
            assert c.evaluate(2) == b.terms[m].evaluate(2)


def test_osp_cohomology_shape():
    cs = build_complex(builtin("osp12"), "susy")
    assert len(cohomology_generators(cs, Fraction(3, 2))) == 1
    assert len(cohomology_generators(cs, 2)) == 1
    d = cohomology_dimensions(cs, 3)
    assert d[0]["cohomology"] == 1 and d[1]["cohomology"] == 0


def test_tau_roundtrip():
    spec = builtin("sl21")
    td = tau_data(spec)
    for nm in ("Phi[e]", "Phi[et]", "J[H]", "J[U]"):
        if nm not in td.nonsusy_target.index:
            continue
        X = td.nonsusy_target[nm]
        assert tau_inverse(td, tau_translate(td, X)) == X
    assert td.session.s * td.session.s == K + 1


def test_miura_commutes_with_derivative():
    spec = builtin("osp12")
    cs = build_complex(spec, "susy")
    td = tau_data(spec)
    v = cohomology_generators(cs, Fraction(3, 2))[0]
    assert miura(cs, v.D(), td.susy_target) == miura(cs, v, td.susy_target).D()
    assert miura(cs, v.d(), td.susy_target) == miura(cs, v, td.susy_target).d()
