from fractions import Fraction

import pytest

from bowen_lab.metric_core import random_system, verify_metric_axioms
from bowen_lab.param_schedule import surrogate_schedule
from bowen_lab.symbolic import PeriodicSeq, all_words
from bowen_lab.transforms import (FULL_SHIFT, GOLDEN_MEAN, DominationError, Subshift, alphabet_growth, amplify,
                                  choose_MN, combine, combine_check, diameter, duplicate, duplication_report,
                                  ec23_instance, level_index, pulled_back, sample_deltas, sandwich_sepY, scale,
                                  scaling_check, shift_product, subshift_equality, truncated_copy, window_length)
from bowen_lab.metric_core import bowen


def test_scale_identity_and_equations():
    s = random_system(6, 1)
    assert scale(s, 1).dist == s.dist
    rows = scaling_check(s, Fraction(1, 2), [Fraction(1, 2), Fraction(1, 4), Fraction(3, 8)], [1, 2, 3])
    assert all(r.ok for r in rows)


def test_window_length():
    assert window_length(1, Fraction(1, 4)) == 3
    assert window_length(1, Fraction(1, 2)) == 2
    assert window_length(1, 1) == 1
    with pytest.raises(ValueError):
        window_length(Fraction(1, 2), 1)
    assert level_index([1, Fraction(1, 3), Fraction(1, 9)], Fraction(1, 4)) == 1


def test_amplify_two_point_example():
    base = scale(random_system(2, 0), Fraction(1, 2))
    r = amplify(base, 2, 1, Fraction(1, 2), 1)
    assert r.base_span == 1 and r.product_span == 4 and r.ok


def test_product_metric_axioms():
    p = shift_product(random_system(3, 2), 3, 1, 2)
    assert p.size == 27
    assert verify_metric_axioms(p).ok


def test_combine_small():
    blocks = [scale(random_system(3, 5), 1), scale(random_system(2, 6), Fraction(1, 3))]
    space = combine(blocks, [1, Fraction(1, 3)])
    assert verify_metric_axioms(space.system).ok
    rows = combine_check(space, [Fraction(3, 2), Fraction(1, 3), Fraction(1, 5)], [1, 2])
    assert all(r.ok for r in rows)
    assert all(r.sep in (1, 2) for r in rows if r.level is None)


def test_combine_rejects_slow_decay():
    with pytest.raises(ValueError):
        combine([random_system(2, 0), scale(random_system(2, 1), Fraction(1, 2))], [1, Fraction(1, 2)])


def test_duplication_random():
    y = random_system(5, 7)
    f = [2, 0, 1, 4, 3]
    x = pulled_back(y, f, truncated_copy(y, Fraction(5, 8)).dist)
    rep = duplication_report(duplicate(x, y, f, Fraction(3, 4)), [1, 2, 3])
    assert rep.ok


def test_duplication_domination_violation():
    y = random_system(4, 1)
    f = [0, 1, 2, 3]
    x = pulled_back(y, f, [[v * 2 for v in r] for r in y.dist])
    with pytest.raises(DominationError) as exc:
        duplicate(x, y, f, Fraction(3, 4))
    assert exc.value.pair is not None


def test_duplication_alpha_range():
    y = random_system(4, 1)
    x = pulled_back(y, [0, 1, 2, 3], y.dist)
    with pytest.raises(ValueError):
        duplicate(x, y, [0, 1, 2, 3], diameter(y))


def test_ec23_conjugate():
    inst, alpha = ec23_instance()
    assert inst.ok and inst.x_sys.size == 9
    # same-phase pairs with a first difference at 0 are eps on the {2,3} side
    for i in range(9):
        for j in range(9):
            assert inst.x_sys.dist[i][j] <= inst.y_sys.dist[i][j]
    rep = duplication_report(duplicate(inst.x_sys, inst.y_sys, inst.f, alpha), [1, 2, 3])
    assert rep.ok


def test_subshift_examples():
    assert subshift_equality(FULL_SHIFT, 2, 1, 1).cov == 2
    r = subshift_equality(GOLDEN_MEAN, 2, 2, Fraction(1, 2))
    assert r.ok and r.sep == 5
    assert subshift_equality(Subshift(2, ((1,),)), 2, 3, Fraction(1, 4)).sep == 1


def test_subshift_incomplete_sample():
    with pytest.raises(ValueError):
        subshift_equality(FULL_SHIFT, 2, 2, Fraction(1, 2), sample=[(0, 0, 0), (1, 1, 1)])


def test_sandwich():
    s = surrogate_schedule((3, 3), (1, 1))
    seqs = [PeriodicSeq(w) for w in all_words(3)]
    eps = s.eps(0) + s.eps(1)
    r = sandwich_sepY(s, seqs, 1, eps / 3, 2)
    assert r.M == 1 and r.ok
    with pytest.raises(ValueError):
        choose_MN([Fraction(1)], Fraction(2))


def test_alphabet_growth_conditional():
    assert alphabet_growth([2, 5, 11], Fraction(1)) == [True, True]
    assert alphabet_growth([2, 4], Fraction(1)) == [False]


def test_sample_deltas_cover_values():
    s = random_system(4, 0)
    ds = sample_deltas([bowen(s, 1)])
    assert ds[-1] > diameter(s)
