from superw.scalar import K
from superw.brst import build_complex, central_charge, miura, tau_data
from superw.liealg import builtin
from superw.susy import Lambda_bracket, affine_susy, check_superconformal, twist_check
from superw.vertex import axiom_check, parse_vertex
from superw.worked import OSP_OMEGA, vratio


def test_affine_susy_axioms():
    for name in ("osp12", "sl21"):
        assert axiom_check(affine_susy(builtin(name))).ok


def test_sqrt_minus_one_twist():
    for name in ("osp12", "sl21"):
        assert twist_check(builtin(name)).ok


def test_Lambda_bracket_of_affine_generators():
    spec = builtin("osp12")
    V = affine_susy(spec)
    r = Lambda_bracket(V["Hb"], V["Hb"])
    # [Hb_Lambda Hb] = chi (H|H)(k + h^vee) = chi (2k + 3)
    assert r.part0.is_zero()
    assert r.part1.degree() == 0
    assert r.part1[0] == V.vacuum(2 * K + 3)
    # [Hb_Lambda fb] = -fb for the odd f
    assert Lambda_bracket(V["Hb"], V["fb"]).part0[0] == -V["fb"]


def test_superconformal_vector_from_miura_image():
    spec = builtin("osp12")
    td = tau_data(spec)
    su = build_complex(spec, "susy")
    X = miura(su, parse_vertex(su.blocks, OSP_OMEGA), td.susy_target)
    a = vratio(Lambda_bracket(X, X).part1[0], X.D())
    rep, c = check_superconformal(X / a)
    assert rep.ok
    assert c == central_charge(spec, "susy_form")


def test_superconformal_rejects_wrong_normalization():
    spec = builtin("osp12")
    td = tau_data(spec)
    su = build_complex(spec, "susy")
    X = miura(su, parse_vertex(su.blocks, OSP_OMEGA), td.susy_target)
    rep, _ = check_superconformal(X)
    assert not rep.ok
