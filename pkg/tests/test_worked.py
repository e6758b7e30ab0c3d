from fractions import Fraction

from superw.liealg import builtin
from superw.worked import (central_charge_report, dimension_report, expected_dimension,
                           osp_golden, sl21_golden, strong_generators)


def test_expected_dimension_counts():
    # one odd generator at 3/2 and one even at 2
    g = [(Fraction(3, 2), 1), (Fraction(2), 0)]
    assert [expected_dimension(g, Fraction(n, 2)) for n in range(1, 9)] == [0, 0, 1, 1, 1, 1, 2, 3]
    # a single even weight-one field: partitions
    assert [expected_dimension([(Fraction(1), 0)], n) for n in range(1, 7)] == [1, 2, 3, 5, 7, 11]


def test_strong_generators():
    assert strong_generators(builtin("osp12")) == [(Fraction(3, 2), 1), (Fraction(2), 0)]
    assert strong_generators(builtin("sl21")) == [(1, 0), (Fraction(3, 2), 1), (Fraction(3, 2), 1), (2, 0)]


def test_osp_golden():
    rep = osp_golden()
    assert rep.ok, rep.text()


def test_sl21_golden():
    rep = sl21_golden()
    assert rep.ok, rep.text()


def test_central_charge_independent_oracle():
    # N=1 from osp(1|2): c = 3/2 - 12 (k+1)^2 / (2k+3)
    rep = central_charge_report(builtin("osp12"))
    assert rep.ok, rep.text()
    from superw.brst import central_charge
    c = central_charge(builtin("osp12"))
    for k in map(Fraction, (1, 2, 7, Fraction(-1, 3))):
        assert c.evaluate(k) == Fraction(3, 2) - 12 * (k + 1) ** 2 / (2 * k + 3)
    # N=2 from sl(2|1): c = -3(2k+1)
    c2 = central_charge(builtin("sl21"))
    assert all(c2.evaluate(k) == -3 * (2 * k + 1) for k in (1, 3, 5))


def test_dimension_report_osp():
    rep = dimension_report(builtin("osp12"), 3)
    assert rep.ok, rep.text()
