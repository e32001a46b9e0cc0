import math
from fractions import Fraction

from bowen_lab.exact_bounds import PROVED, REFUTED, compare, ln2_bounds, ln_bounds, log2_bounds, pow2_frac_ge


def test_ln2_enclosure():
    lo, hi = ln2_bounds()
    # ln 2 = 0.693147180559945309417232121458176568075...
    assert lo <= Fraction("0.693147180559945309417232121458176568076")
    assert Fraction("0.693147180559945309417232121458176568075") <= hi
    assert hi - lo < Fraction(1, 10 ** 20)


def test_log_enclosures():
    for r in (Fraction(3, 2), Fraction(7), Fraction(1, 3), Fraction(1024)):
        lo, hi = log2_bounds(r)
        assert lo <= math.log2(r) <= hi
        lo, hi = ln_bounds(r)
        assert float(lo) <= math.log(r) + 1e-12 and math.log(r) - 1e-12 <= float(hi)


def test_compare_verdicts():
    assert compare((Fraction(2), Fraction(3)), (Fraction(0), Fraction(1))) == PROVED
    assert compare((Fraction(0), Fraction(1)), (Fraction(2), Fraction(3))) == REFUTED


def test_pow2_exact():
    assert pow2_frac_ge(Fraction(1, 2), Fraction(141, 100))
    assert not pow2_frac_ge(Fraction(1, 2), Fraction(142, 100))
