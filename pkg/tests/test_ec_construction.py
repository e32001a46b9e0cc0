from fractions import Fraction

import pytest

from bowen_lab.colorings import CC1
from bowen_lab.ec_construction import (ECnPoint, Quadruple, build_ry, ec_spec, ecn_distance, large_delta_construction,
                                       ambient_set, pdn_check, phi_invariance, sabotaged_spec, sep_reduction_check,
                                       transitive_prefix, verify_ry, verify_span_lower, verify_Wn_separated,
                                       window_lattice_construction, witness_table, x_lower_construction)
from bowen_lab.param_schedule import surrogate_schedule
from bowen_lab.symbolic import BinarySeq, all_words


@pytest.fixture(scope="module")
def setup():
    s = surrogate_schedule((3, 3, 3), (2, 2, 1))
    return s, ec_spec(s), build_ry(s)


def test_ry_family(setup):
    _, _, ry = setup
    rep = verify_ry(ry)
    assert rep.ok
    assert rep.sizes == (2, 4, 4)


def test_separation_and_witnesses(setup):
    _, spec, ry = setup
    for n in range(3):
        assert verify_Wn_separated(ry, n, spec).ok
        rows = witness_table(ry, n, spec)
        assert all(r.agree and r.direct_ok and r.in_colored_block for r in rows)


def test_sabotage_is_detected(setup):
    _, spec, ry = setup
    assert not verify_Wn_separated(ry, 1, sabotaged_spec(spec)).ok


def test_span_lower_bound(setup):
    _, spec, ry = setup
    v = verify_span_lower(ry, 1, spec, -6, 6)
    assert v.ok and v.lower_bound == 4


def test_metric_clauses(setup):
    _, spec, _ = setup
    pts = [ECnPoint(BinarySeq.from_word(w, -2), 0, k) for w in all_words(5) for k in (0, 1, 3)]
    assert pdn_check(spec, pts)[0]
    assert phi_invariance(spec, 1, [BinarySeq.from_word(w, -5) for w in all_words(8)])[0]
    a, b = pts[0], pts[1]
    assert ecn_distance(a, a, spec) == 0
    assert ecn_distance(a, b, spec) == spec.beta(0)


def test_reduction_rows(setup):
    _, spec, _ = setup
    for k in range(6):
        assert sep_reduction_check(spec, 0, k).ok


def test_spanning_constructions():
    s = surrogate_schedule((3, 3), (2, 1))
    spec = ec_spec(s, style=CC1)
    ry = build_ry(s)
    pool = [ap.point for ap in ambient_set(ry, spec, -6, 6)]
    for d in (spec.eps_total + Fraction(1, 100), spec.eps_total, (spec.eps_total + spec.delta_total) / 2):
        assert large_delta_construction(spec, pool, d, 6).ok
    assert window_lattice_construction(spec, pool, spec.delta_total / 2, 4).ok
    s0 = surrogate_schedule((3,), (2,))
    r = x_lower_construction(ec_spec(s0, style=CC1), 2, 1)
    assert r.ok and r.exact_span == 2


def test_transitive_prefix(setup):
    _, spec, _ = setup
    q = [Quadruple(7, (1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0, 0, 1, 1, 1), 3, 0), Quadruple(40, tuple([1, 0] * 40 + [1]), 5, 1)]
    assert transitive_prefix(spec, q).ok
    with pytest.raises(ValueError):
        transitive_prefix(spec, [Quadruple(20, tuple([0] * 41), 0, 1)])


def test_short_level0_blocks_rejected():
    with pytest.raises(ValueError):
        build_ry(surrogate_schedule((3,), (1,)))
