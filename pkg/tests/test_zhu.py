import pytest

from superw.brst import build_complex
from superw.liealg import builtin
from superw.zhu import (check_Q_squared, gbinom, good_almost_linear_affine,
                        good_almost_linear_finite, zhu_report)
from fractions import Fraction


def test_gbinom():
    assert gbinom(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert gbinom(Fraction(5), 2) == 10


@pytest.mark.parametrize("name", ["osp12", "sl21"])
def test_zhu_report(name):
    for rep in zhu_report(builtin(name)):
        assert rep.ok, rep.text()


def test_zero_differential_is_rejected():
    cs = build_complex(builtin("osp12"), "susy")
    assert not good_almost_linear_affine(cs, zero=True)[0].ok
    assert not good_almost_linear_finite(cs, zero=True)[0].ok


def test_Q_squared_blocks():
    assert check_Q_squared(build_complex(builtin("sl21"), "susy"), "blocks").ok
