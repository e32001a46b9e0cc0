from dataclasses import replace
from fractions import Fraction

from bowen_lab.exact_bounds import PROVED, REFUTED
from bowen_lab.param_schedule import (check_constraints, dumps_schedule, final_gap, generate_faithful,
                                      loads_schedule, make_schedule, rate_rows, surrogate_schedule)


def test_level_arithmetic():
    s = surrogate_schedule((3, 3, 3), (2, 1, 1))
    assert [s.Tplus(n) for n in range(3)] == [6, 18, 54]
    assert [s.T(n) for n in range(3)] == [2, 6, 18]
    assert s.Tplus(-1) == 1


def test_surrogate_flags_pk1_but_is_accepted():
    rep = check_constraints(surrogate_schedule((3,), (2,)))
    assert rep.verdict("PK01") == REFUTED
    assert rep.waived and rep.accepted


def test_surrogate_eps_delta_constraints_hold():
    s = surrogate_schedule((3, 3), (1, 1))
    rep = check_constraints(s)
    for n in range(2):
        assert rep.verdict(f"Pdelta1.{n}") == PROVED
        assert rep.verdict(f"Pdelta2.{n}") == PROVED
        assert rep.verdict(f"Pdelta3.{n}") == PROVED
    assert rep.verdict("ED0.1") == PROVED


def test_faithful_one_level_all_proved():
    s = generate_faithful(1)
    rep = check_constraints(s)
    assert rep.all_proved
    assert s.Tplus(0) == s.C(0) * s.K(0)
    assert s.lam == 1


def test_structure_failure_reported():
    s = make_schedule([3], [2])
    bad = replace(s, levels=(replace(s.levels[0], Tplus=7),))
    rep = check_constraints(bad)
    assert rep.verdict("structure0") == REFUTED


def test_schedule_text_round_trip():
    s = surrogate_schedule((3, 3), (2, 1))
    assert loads_schedule(dumps_schedule(s)) == s


def test_rates_gap():
    upper, lower, strict = final_gap()
    assert upper == Fraction(88, 100) and lower == Fraction(9, 10) and strict
    rows = rate_rows(generate_faithful(1, with_eps=False))
    assert all(r.step_ok and r.pk5 == PROVED for r in rows)
