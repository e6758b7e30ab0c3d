from fractions import Fraction

import pytest

from superw.liealg import builtin
from superw.screening import (highest_weight_check, screening_agreement, screening_kernel,
                              screening_setup)
from superw.worked import screening_report


@pytest.mark.parametrize("name", ["osp12", "sl21"])
def test_agreement_under_tau(name):
    S = screening_setup(builtin(name))
    for w in (Fraction(1, 2), 1, Fraction(3, 2), 2):
        ok, scalars = screening_agreement(S, w)
        assert ok


def test_highest_weight():
    assert highest_weight_check(screening_setup(builtin("osp12")))


def test_kernel_dimensions_osp():
    spec = builtin("osp12")
    assert [len(screening_kernel(spec, w)) for w in (Fraction(1, 2), 1, Fraction(3, 2), 2)] == [0, 0, 1, 1]


def test_kernel_contains_miura_images():
    rep = screening_report(builtin("osp12"), 2)
    assert rep.ok, rep.text()
