from fractions import Fraction

import pytest

from bowen_lab.metric_core import (bowen, bowen_table, dumps_system, loads_system, make_system, random_system,
                                   system_from_function, verify_metric_axioms)


def test_one_point_system():
    s = make_system([[0]], [0])
    assert s.size == 1
    assert verify_metric_axioms(s).ok
    assert bowen(s, 3).dist == ((Fraction(0),),)


def test_bowen_is_max_over_orbit_segments():
    s = make_system([[0, 1, Fraction(1, 2)], [1, 0, 1], [Fraction(1, 2), 1, 0]], [1, 2, 0], bijective=True)
    b2 = bowen(s, 2).dist
    # d_2(0, 2) = max(d(0,2), d(1,0))
    assert b2[0][2] == 1
    table = bowen_table(s, [1, 2, 3])
    assert table[2].dist == b2
    assert table[1].dist == s.dist


def test_triangle_violation_reported():
    s = make_system([[0, 1, 3], [1, 0, 1], [3, 1, 0]], [0, 1, 2])
    rep = verify_metric_axioms(s)
    assert not rep.triangle and rep.counterexample is not None


def test_random_systems_are_metrics():
    for seed in range(10):
        s = random_system(7, seed)
        assert verify_metric_axioms(s).ok
        assert sorted(s.fmap) == list(range(7))


def test_round_trip_text_format():
    s = random_system(5, 3)
    t = loads_system(dumps_system(s))
    assert t.dist == s.dist and t.fmap == s.fmap


def test_map_must_stay_inside():
    with pytest.raises(ValueError):
        make_system([[0, 1], [1, 0]], [0, 2])
    with pytest.raises(ValueError):
        system_from_function([0, 1], lambda p: p + 5, lambda a, b: 1)


def test_bijective_flag_checked():
    with pytest.raises(ValueError):
        make_system([[0, 1], [1, 0]], [0, 0], bijective=True)
