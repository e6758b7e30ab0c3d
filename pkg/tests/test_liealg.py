import pytest

from superw.liealg import (AlgebraError, builtin, check_algebra, dual_bases, dump_spec,
                           grade_decompose, load_spec)
from superw.suite import CORRUPTIONS, corrupt_spec


@pytest.mark.parametrize("name", ["osp12", "sl21"])
def test_builtin_axioms(name):
    rep = check_algebra(builtin(name))
    assert rep.ok, rep.text()


@pytest.mark.parametrize("name", ["osp12", "sl21"])
def test_spec_roundtrip_is_byte_stable(name):
    text = dump_spec(builtin(name))
    again = load_spec(text)
    assert dump_spec(again) == text
    assert check_algebra(again).ok


def test_builtin_aliases():
    assert builtin("osp(1|2)") is builtin("osp12")
    with pytest.raises(AlgebraError):
        builtin("e8")


def test_grading_osp():
    g = grade_decompose(builtin("osp12"))
    spec = builtin("osp12")
    names = {spec.names[i]: g.weight[i] for i in range(spec.dim)}
    assert names == {"E": 1, "e": 0.5, "H": 0, "f": -0.5, "F": -1}
    assert len(g.g_half) == 1 and len(g.n_plus) == 2


def test_dual_bases_pair_to_delta():
    spec = builtin("sl21")
    d = dual_bases(spec)
    g = grade_decompose(spec)
    for a in g.n_plus:
        for b in g.n_plus:
            assert spec.form(d.upper[b], {a: 1}) == (1 if a == b else 0)


@pytest.mark.parametrize("axiom", CORRUPTIONS)
def test_corruptions_are_detected(axiom):
    rep = check_algebra(corrupt_spec(builtin("osp12"), axiom))
    assert not rep.ok


def test_malformed_spec_rejected():
    with pytest.raises(AlgebraError):
        load_spec('{"format": "something-else"}')
    with pytest.raises(AlgebraError):
        load_spec("{not json")
